#include "biasplan/agents.hpp"

#include "biasplan/doubly_soph.hpp"

#include <algorithm>
#include <stdexcept>

namespace biasplan {

namespace {

constexpr std::array<std::pair<AgentKind, std::string_view>, 7> kNames{{
    {AgentKind::Optimal, "optimal"},
    {AgentKind::NaivePresentBiased, "naive-present-biased"},
    {AgentKind::SophisticatedPresentBiased, "sophisticated-present-biased"},
    {AgentKind::DoublyNaive, "doubly-naive"},
    {AgentKind::SinglySophisticated, "singly-sophisticated"},
    {AgentKind::DoublySophisticated, "doubly-sophisticated"},
    {AgentKind::NaivePresentSophSunk, "naive-present-soph-sunk"},
}};

// Shortest path from `from` under the agents' edge tie-break, given d(., t).
std::vector<NodeIndex> shortest_path_from(const TaskGraph& graph, const std::vector<ExtRational>& dist,
                                          NodeIndex from) {
    std::vector<NodeIndex> path{from};
    NodeIndex u = from;
    while (u != graph.target() && dist[u].is_finite()) {
        std::vector<EdgeOption> options;
        for (EdgeIndex e : graph.out_edges(u)) {
            const auto& edge = graph.edge(e);
            options.push_back({e, edge.cost, ExtRational(edge.cost) + dist[edge.head]});
        }
        const auto best = best_option(options);
        u = graph.edge(best->edge).head;
        path.push_back(u);
    }
    return path;
}

TraceStep make_step(NodeIndex node, const Rational& sunk, const Rational& rho) {
    TraceStep step;
    step.node = node;
    step.sunk_cost = sunk;
    step.perceived_reward = rho;
    return step;
}

// Shared walk: `decide` returns the edge to take (or nullopt to abandon) and
// fills the step's planned path.
template <class Decide>
TraversalTrace walk(const Instance& instance, AgentKind kind, Decide&& decide) {
    const auto& g = instance.graph;
    const Rational lambda = effective_lambda(kind, instance.params);
    TraversalTrace trace;
    trace.kind = kind;
    NodeIndex u = g.source();
    Rational sunk;
    while (true) {
        TraceStep step = make_step(u, sunk, perceived_reward(instance.reward, lambda, sunk));
        if (u == g.target()) {
            step.planned_path = {u};
            step.decision = Decision::finish();
            trace.steps.push_back(std::move(step));
            break;
        }
        const std::optional<EdgeIndex> choice = decide(step);
        if (!choice) {
            step.decision = Decision::abandon();
            if (step.planned_path.empty()) step.planned_path = {u};
            trace.steps.push_back(std::move(step));
            break;
        }
        step.decision = Decision::take(*choice);
        trace.steps.push_back(std::move(step));
        sunk += g.edge(*choice).cost;
        u = g.edge(*choice).head;
    }
    finalize_trace(trace, g, instance.reward);
    return trace;
}

TraversalTrace simulate_optimal(const Instance& instance) {
    const auto& g = instance.graph;
    const auto dist = shortest_path_costs(g);
    const bool go = dist[g.source()] <= ExtRational(instance.reward);
    return walk(instance, AgentKind::Optimal, [&](TraceStep& step) -> std::optional<EdgeIndex> {
        if (!go) return std::nullopt;
        std::vector<EdgeOption> options;
        for (EdgeIndex e : g.out_edges(step.node)) {
            options.push_back({e, g.edge(e).cost, ExtRational(g.edge(e).cost) + dist[g.edge(e).head]});
        }
        step.planned_path = shortest_path_from(g, dist, step.node);
        return best_option(options)->edge;
    });
}

// Naive about present bias: the believed future self completes the cheapest
// remaining path.
TraversalTrace simulate_naive(const Instance& instance, AgentKind kind) {
    const auto& g = instance.graph;
    const auto dist = shortest_path_costs(g);
    const Rational& b = instance.params.b;
    return walk(instance, kind, [&](TraceStep& step) -> std::optional<EdgeIndex> {
        std::vector<EdgeOption> options;
        for (EdgeIndex e : g.out_edges(step.node)) {
            const auto& edge = g.edge(e);
            if (dist[edge.head].is_infinite()) continue;
            options.push_back({e, edge.cost, ExtRational(b * edge.cost) + dist[edge.head]});
        }
        const auto best = best_option(options);
        if (!best || best->perceived > ExtRational(step.perceived_reward)) return std::nullopt;
        step.planned_path = {step.node};
        const auto rest = shortest_path_from(g, dist, g.edge(best->edge).head);
        step.planned_path.insert(step.planned_path.end(), rest.begin(), rest.end());
        return best->edge;
    });
}

// Naive about present bias, sophisticated about sunk cost: the believed future
// self is a (1, lambda) agent that anticipates its own sunk-cost bias.
TraversalTrace simulate_naive_present_soph_sunk(const Instance& instance) {
    const auto& g = instance.graph;
    const Rational& b = instance.params.b;
    DoublySophPlanner future(g, instance.reward, AgentParams{Rational(1), instance.params.lambda});
    return walk(instance, AgentKind::NaivePresentSophSunk, [&](TraceStep& step) -> std::optional<EdgeIndex> {
        std::vector<EdgeOption> options;
        for (EdgeIndex e : g.out_edges(step.node)) {
            const auto& edge = g.edge(e);
            const auto& believed = future.evaluate(edge.head, step.sunk_cost + edge.cost);
            if (believed.abandons()) continue;
            options.push_back({e, edge.cost, ExtRational(b * edge.cost) + believed.continuation});
        }
        const auto best = best_option(options);
        if (!best || best->perceived > ExtRational(step.perceived_reward)) return std::nullopt;
        const auto& edge = g.edge(best->edge);
        step.planned_path = {step.node};
        const auto rest = future.policy().path_from(g, StateKey{edge.head, step.sunk_cost + edge.cost});
        step.planned_path.insert(step.planned_path.end(), rest.begin(), rest.end());
        return best->edge;
    });
}

TraversalTrace simulate_sophisticated(const Instance& instance) {
    const auto& g = instance.graph;
    const PlanTable plan = sophisticated_plan(g, instance.params.b, instance.reward);
    return walk(instance, AgentKind::SophisticatedPresentBiased, [&](TraceStep& step) -> std::optional<EdgeIndex> {
        step.planned_path = plan.path_from(g, step.node);
        return plan.at(step.node).abandons() ? std::nullopt : plan.at(step.node).edge;
    });
}

// Sophisticated about present bias but believes the current perceived reward
// stays fixed, so it re-plans at every node.
TraversalTrace simulate_singly(const Instance& instance) {
    const auto& g = instance.graph;
    return walk(instance, AgentKind::SinglySophisticated, [&](TraceStep& step) -> std::optional<EdgeIndex> {
        const PlanTable plan = sophisticated_plan(g, instance.params.b, step.perceived_reward);
        step.planned_path = plan.path_from(g, step.node);
        return plan.at(step.node).abandons() ? std::nullopt : plan.at(step.node).edge;
    });
}

}  // namespace

std::string_view agent_kind_name(AgentKind kind) {
    for (const auto& [k, name] : kNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

std::optional<AgentKind> parse_agent_kind(std::string_view name) {
    for (const auto& [k, n] : kNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

Rational effective_lambda(AgentKind kind, const AgentParams& params) {
    switch (kind) {
        case AgentKind::Optimal:
        case AgentKind::NaivePresentBiased:
        case AgentKind::SophisticatedPresentBiased:
            return Rational(0);
        default:
            return params.lambda;
    }
}

Rational perceived_reward(const Rational& reward, const Rational& lambda, const Rational& sunk) {
    return reward + lambda * sunk;
}

bool preferred(const EdgeOption& a, const EdgeOption& b) {
    if (a.perceived != b.perceived) return a.perceived < b.perceived;
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.edge < b.edge;
}

std::optional<EdgeOption> best_option(std::span<const EdgeOption> options) {
    std::optional<EdgeOption> best;
    for (const auto& opt : options) {
        if (opt.perceived.is_infinite()) continue;
        if (!best || preferred(opt, *best)) best = opt;
    }
    return best;
}

PlanTable::PlanTable(Rational b, Rational rho, std::vector<PlanEntry> entries)
    : b_(std::move(b)), rho_(std::move(rho)), entries_(std::move(entries)) {}

std::vector<NodeIndex> PlanTable::path_from(const TaskGraph& graph, NodeIndex node) const {
    std::vector<NodeIndex> path{node};
    while (node != graph.target() && !at(node).abandons()) {
        node = graph.edge(*at(node).edge).head;
        path.push_back(node);
    }
    return path;
}

PlanTable sophisticated_plan(const TaskGraph& graph, const Rational& b, const Rational& rho) {
    std::vector<PlanEntry> entries(graph.node_count(), PlanEntry{std::nullopt, ExtRational::infinity()});
    const auto order = topological_order(graph);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const NodeIndex u = *it;
        if (u == graph.target()) {
            entries[u] = PlanEntry{std::nullopt, Rational(0)};
            continue;
        }
        std::vector<EdgeOption> options;
        for (EdgeIndex e : graph.out_edges(u)) {
            const auto& edge = graph.edge(e);
            if (entries[edge.head].abandons()) continue;
            options.push_back({e, edge.cost, ExtRational(b * edge.cost) + entries[edge.head].continuation});
        }
        const auto best = best_option(options);
        if (!best || best->perceived > ExtRational(rho)) continue;
        const auto& edge = graph.edge(best->edge);
        entries[u] = PlanEntry{best->edge, ExtRational(edge.cost) + entries[edge.head].continuation};
    }
    return PlanTable(b, rho, std::move(entries));
}

std::vector<NodeIndex> TraversalTrace::path() const {
    std::vector<NodeIndex> nodes;
    nodes.reserve(steps.size());
    for (const auto& step : steps) nodes.push_back(step.node);
    return nodes;
}

Rational payoff_of(const TraversalTrace& trace, const Rational& reward) {
    switch (trace.outcome.kind) {
        case OutcomeKind::Reached:
            return reward - trace.total_cost;
        case OutcomeKind::AbandonedAt:
            return -trace.total_cost;
        case OutcomeKind::NeverStarted:
            break;
    }
    return Rational(0);
}

void finalize_trace(TraversalTrace& trace, const TaskGraph& graph, const Rational& reward) {
    if (trace.steps.empty()) throw std::logic_error("empty trace");
    const auto& last = trace.steps.back();
    trace.total_cost = last.sunk_cost;
    if (last.decision.type == Decision::Type::Finish) {
        trace.outcome = Outcome{OutcomeKind::Reached, last.node};
    } else if (trace.steps.size() == 1 && last.node == graph.source()) {
        trace.outcome = Outcome{OutcomeKind::NeverStarted, last.node};
    } else {
        trace.outcome = Outcome{OutcomeKind::AbandonedAt, last.node};
    }
    trace.payoff = payoff_of(trace, reward);
}

TraversalTrace simulate(const Instance& instance, AgentKind kind) {
    switch (kind) {
        case AgentKind::Optimal:
            return simulate_optimal(instance);
        case AgentKind::NaivePresentBiased:
        case AgentKind::DoublyNaive:
            return simulate_naive(instance, kind);
        case AgentKind::SophisticatedPresentBiased:
            return simulate_sophisticated(instance);
        case AgentKind::SinglySophisticated:
            return simulate_singly(instance);
        case AgentKind::DoublySophisticated:
            return recursive_states(instance).trace;
        case AgentKind::NaivePresentSophSunk:
            return simulate_naive_present_soph_sunk(instance);
    }
    throw std::logic_error("unknown agent kind");
}

SwitchReport count_switches(const TraversalTrace& trace) {
    SwitchReport report;
    Rational last_switch_cost;
    for (std::size_t i = 1; i < trace.steps.size(); ++i) {
        const auto& prev = trace.steps[i - 1].planned_path;
        const auto& cur = trace.steps[i].planned_path;
        const bool continues = prev.size() >= 2 && std::equal(cur.begin(), cur.end(), prev.begin() + 1, prev.end());
        if (!continues) {
            ++report.switches;
            report.switch_steps.push_back(i);
            report.segment_costs.push_back(trace.steps[i].sunk_cost - last_switch_cost);
            last_switch_cost = trace.steps[i].sunk_cost;
        }
    }
    if (!trace.steps.empty()) report.segment_costs.push_back(trace.steps.back().sunk_cost - last_switch_cost);
    return report;
}

}  // namespace biasplan
