#include "biasplan/doubly_soph.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace biasplan {

namespace {

const PolicyEntry kTargetEntry{std::nullopt, Rational(0)};
const PolicyEntry kAbandonEntry{std::nullopt, ExtRational::infinity()};

// Decision at one state given the continuation of each successor state.
template <class ChildLookup>
PolicyEntry decide_state(const TaskGraph& graph, const Rational& reward, const AgentParams& params, NodeIndex u,
                         const Rational& sunk, ChildLookup&& child) {
    if (u == graph.target()) return kTargetEntry;
    std::vector<EdgeOption> options;
    for (EdgeIndex e : graph.out_edges(u)) {
        const auto& edge = graph.edge(e);
        const std::optional<ExtRational> cont = child(edge.head, sunk + edge.cost);
        if (!cont || cont->is_infinite()) continue;
        options.push_back({e, edge.cost, ExtRational(params.b * edge.cost) + *cont});
    }
    const auto best = best_option(options);
    if (!best || best->perceived > ExtRational(perceived_reward(reward, params.lambda, sunk))) return kAbandonEntry;
    const auto& edge = graph.edge(best->edge);
    return PolicyEntry{best->edge, best->perceived + ExtRational(edge.cost - params.b * edge.cost)};
}

PolicyEntry brute_eval(const TaskGraph& graph, const Rational& reward, const AgentParams& params, NodeIndex u,
                       const Rational& sunk) {
    return decide_state(graph, reward, params, u, sunk,
                        [&](NodeIndex v, const Rational& s) -> std::optional<ExtRational> {
                            return brute_eval(graph, reward, params, v, s).continuation;
                        });
}

std::vector<NodeIndex> follow(const TaskGraph& graph, StateKey state,
                              const std::function<const PolicyEntry&(const StateKey&)>& lookup) {
    std::vector<NodeIndex> path{state.node};
    while (true) {
        const PolicyEntry& entry = lookup(state);
        if (!entry.edge) break;
        const auto& edge = graph.edge(*entry.edge);
        state = StateKey{edge.head, state.sunk + edge.cost};
        path.push_back(state.node);
    }
    return path;
}

DoublySophResult finish_result(const Instance& instance, PolicyTable policy,
                               const std::function<const PolicyEntry&(const StateKey&)>& lookup) {
    DoublySophResult result;
    result.trace = trace_from_policy(instance, lookup);
    result.started = result.trace.outcome.kind != OutcomeKind::NeverStarted;
    result.policy = std::move(policy);
    return result;
}

long integer_total_cost(const TaskGraph& graph) {
    mpz_class total = 0;
    for (const auto& edge : graph.edges()) {
        if (!edge.cost.is_integer()) {
            throw std::invalid_argument("dp_integer requires integer edge costs; edge '" + edge.id + "' costs " +
                                        edge.cost.str());
        }
        total += edge.cost.numerator();
    }
    if (!total.fits_slong_p() || total > 50'000'000) {
        throw std::invalid_argument("dp_integer: total edge cost too large for a dense table");
    }
    return total.get_si();
}

// Path costs s -> u for every node, not expanding past the target.
std::vector<std::set<Rational>> forward_costs(const TaskGraph& graph) {
    std::vector<std::set<Rational>> costs(graph.node_count());
    costs[graph.source()].insert(Rational(0));
    for (NodeIndex u : topological_order(graph)) {
        if (u == graph.target()) continue;
        for (EdgeIndex e : graph.out_edges(u)) {
            const auto& edge = graph.edge(e);
            for (const auto& c : costs[u]) costs[edge.head].insert(c + edge.cost);
        }
    }
    return costs;
}

// Path costs u -> t for every node.
std::vector<std::set<Rational>> backward_costs(const TaskGraph& graph) {
    std::vector<std::set<Rational>> costs(graph.node_count());
    const auto order = topological_order(graph);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const NodeIndex u = *it;
        if (u == graph.target()) {
            costs[u].insert(Rational(0));
            continue;
        }
        for (EdgeIndex e : graph.out_edges(u)) {
            const auto& edge = graph.edge(e);
            for (const auto& c : costs[edge.head]) costs[u].insert(c + edge.cost);
        }
    }
    return costs;
}

}  // namespace

const PolicyEntry* PolicyTable::find(const StateKey& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

const PolicyEntry& PolicyTable::at(const StateKey& key) const {
    if (const auto* entry = find(key)) return *entry;
    throw std::out_of_range("no policy entry for node " + std::to_string(key.node) + " at sunk cost " +
                            key.sunk.str());
}

std::vector<NodeIndex> PolicyTable::path_from(const TaskGraph& graph, StateKey start) const {
    return follow(graph, std::move(start), [this](const StateKey& k) -> const PolicyEntry& { return at(k); });
}

DoublySophPlanner::DoublySophPlanner(const TaskGraph& graph, Rational reward, AgentParams params)
    : graph_(graph), policy_(std::move(reward), std::move(params)) {}

const PolicyEntry& DoublySophPlanner::evaluate(NodeIndex node, const Rational& sunk) {
    StateKey key{node, sunk};
    if (const auto* known = policy_.find(key)) return *known;
    PolicyEntry entry = decide_state(graph_, policy_.reward(), policy_.params(), node, sunk,
                                     [this](NodeIndex v, const Rational& s) -> std::optional<ExtRational> {
                                         return evaluate(v, s).continuation;
                                     });
    policy_.set(key, std::move(entry));
    return policy_.at(key);
}

std::vector<std::vector<PolicyEntry>> dp_integer_table(const Instance& instance) {
    const auto& g = instance.graph;
    const long total = integer_total_cost(g);
    std::vector<std::vector<PolicyEntry>> table(g.node_count(),
                                                std::vector<PolicyEntry>(static_cast<std::size_t>(total) + 1));
    const auto order = topological_order(g);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const NodeIndex u = *it;
        for (long i = 0; i <= total; ++i) {
            // Successor cells past C belong to unreachable states only.
            table[u][i] = decide_state(g, instance.reward, instance.params, u, Rational(i),
                                       [&](NodeIndex v, const Rational& s) -> std::optional<ExtRational> {
                                           const long j = s.numerator().get_si();
                                           if (j > total) return std::nullopt;
                                           return table[v][j].continuation;
                                       });
        }
    }
    return table;
}

DoublySophResult dp_integer(const Instance& instance) {
    const auto& g = instance.graph;
    const auto table = dp_integer_table(instance);
    PolicyTable policy(instance.reward, instance.params);
    const auto reachable = forward_costs(g);
    for (NodeIndex u = 0; u < g.node_count(); ++u) {
        for (const auto& sunk : reachable[u]) {
            policy.set(StateKey{u, sunk}, table[u][sunk.numerator().get_si()]);
        }
    }
    auto lookup = [&](const StateKey& k) -> const PolicyEntry& {
        return table.at(k.node).at(k.sunk.numerator().get_si());
    };
    return finish_result(instance, std::move(policy), lookup);
}

DoublySophResult recursive_states(const Instance& instance) {
    DoublySophPlanner planner(instance.graph, instance.reward, instance.params);
    planner.evaluate(instance.graph.source(), Rational(0));
    PolicyTable policy = std::move(planner).take_policy();
    auto lookup = [&](const StateKey& k) -> const PolicyEntry& { return policy.at(k); };
    auto trace = trace_from_policy(instance, lookup);
    DoublySophResult result;
    result.started = trace.outcome.kind != OutcomeKind::NeverStarted;
    result.trace = std::move(trace);
    result.policy = std::move(policy);
    return result;
}

DoublySophResult brute_force(const Instance& instance) {
    PolicyTable policy(instance.reward, instance.params);
    auto lookup = [&](const StateKey& k) -> const PolicyEntry& {
        if (const auto* known = policy.find(k)) return *known;
        policy.set(k, brute_eval(instance.graph, instance.reward, instance.params, k.node, k.sunk));
        return policy.at(k);
    };
    auto trace = trace_from_policy(instance, lookup);
    DoublySophResult result;
    result.started = trace.outcome.kind != OutcomeKind::NeverStarted;
    result.trace = std::move(trace);
    result.policy = std::move(policy);
    return result;
}

bool starts(const TaskGraph& graph, const Rational& reward, const AgentParams& params) {
    DoublySophPlanner planner(graph, reward, params);
    return !planner.evaluate(graph.source(), Rational(0)).abandons();
}

TraversalTrace trace_from_policy(const Instance& instance,
                                 const std::function<const PolicyEntry&(const StateKey&)>& lookup) {
    const auto& g = instance.graph;
    TraversalTrace trace;
    trace.kind = AgentKind::DoublySophisticated;
    StateKey state{g.source(), Rational(0)};
    while (true) {
        const PolicyEntry& entry = lookup(state);
        TraceStep step;
        step.node = state.node;
        step.sunk_cost = state.sunk;
        step.perceived_reward = perceived_reward(instance.reward, instance.params.lambda, state.sunk);
        step.planned_path = follow(g, state, lookup);
        if (state.node == g.target()) {
            step.decision = Decision::finish();
            trace.steps.push_back(std::move(step));
            break;
        }
        if (entry.abandons()) {
            step.decision = Decision::abandon();
            trace.steps.push_back(std::move(step));
            break;
        }
        const EdgeIndex e = *entry.edge;
        step.decision = Decision::take(e);
        trace.steps.push_back(std::move(step));
        state = StateKey{g.edge(e).head, state.sunk + g.edge(e).cost};
    }
    finalize_trace(trace, g, instance.reward);
    return trace;
}

std::vector<std::string> check_policy(const TaskGraph& graph, const PolicyTable& policy) {
    std::vector<std::string> problems;
    const auto& params = policy.params();
    for (const auto& [key, entry] : policy.entries()) {
        const std::string where = "state (" + graph.node_id(key.node) + ", " + key.sunk.str() + "): ";
        if (key.node == graph.target()) {
            if (entry != kTargetEntry) problems.push_back(where + "target must have continuation 0");
            continue;
        }
        bool complete = true;
        const PolicyEntry expected = decide_state(
            graph, policy.reward(), params, key.node, key.sunk,
            [&](NodeIndex v, const Rational& s) -> std::optional<ExtRational> {
                const auto* child = policy.find(StateKey{v, s});
                if (!child) {
                    complete = false;
                    return std::nullopt;
                }
                return child->continuation;
            });
        if (entry.abandons() && entry.edge) problems.push_back(where + "abandoned state carries an edge");
        if (!entry.abandons()) {
            if (!entry.edge || graph.edge(*entry.edge).tail != key.node) {
                problems.push_back(where + "continuing state without a valid outgoing edge");
                continue;
            }
            const auto& edge = graph.edge(*entry.edge);
            const auto* child = policy.find(StateKey{edge.head, key.sunk + edge.cost});
            if (!child) {
                problems.push_back(where + "successor state missing");
                continue;
            }
            if (entry.continuation != ExtRational(edge.cost) + child->continuation) {
                problems.push_back(where + "continuation is not edge cost plus successor continuation");
            }
            const ExtRational perceived = ExtRational(params.b * edge.cost) + child->continuation;
            if (perceived > ExtRational(perceived_reward(policy.reward(), params.lambda, key.sunk))) {
                problems.push_back(where + "continues although perceived cost exceeds perceived reward");
            }
        }
        if (complete && expected != entry) problems.push_back(where + "decision differs from recomputed argmin");
    }
    return problems;
}

std::string dump_policy(const TaskGraph& graph, const PolicyTable& policy) {
    const auto order = topological_order(graph);
    std::vector<std::size_t> position(graph.node_count());
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
    std::vector<const std::pair<const StateKey, PolicyEntry>*> rows;
    for (const auto& row : policy.entries()) rows.push_back(&row);
    std::sort(rows.begin(), rows.end(), [&](const auto* a, const auto* b) {
        if (position[a->first.node] != position[b->first.node]) return position[a->first.node] < position[b->first.node];
        return a->first.sunk < b->first.sunk;
    });
    std::ostringstream out;
    for (const auto* row : rows) {
        const auto& [key, entry] = *row;
        out << graph.node_id(key.node) << ' ' << key.sunk << ' ';
        if (key.node == graph.target()) {
            out << "finish";
        } else if (entry.abandons()) {
            out << "abandon";
        } else {
            out << graph.edge(*entry.edge).id;
        }
        out << ' ' << entry.continuation << '\n';
    }
    return out.str();
}

Rational next_fraction_above(const Rational& x, long bound) {
    if (bound < 1) throw std::invalid_argument("denominator bound must be >= 1");
    std::optional<Rational> best;
    for (long q = 1; q <= bound; ++q) {
        const mpz_class p = (x * Rational(q)).floor() + 1;
        Rational candidate(p, mpz_class(q));
        if (!best || candidate < *best) best = candidate;
    }
    return *best;
}

Rational prev_fraction_below(const Rational& x, long bound) {
    if (bound < 1) throw std::invalid_argument("denominator bound must be >= 1");
    std::optional<Rational> best;
    for (long q = 1; q <= bound; ++q) {
        const mpz_class p = (x * Rational(q)).ceil() - 1;
        Rational candidate(p, mpz_class(q));
        if (!best || candidate > *best) best = candidate;
    }
    return *best;
}

namespace {

Rational reward_cap(const TaskGraph& graph, const Rational& b) {
    const ExtRational co = optimal_cost(graph);
    if (co.is_infinite()) throw std::invalid_argument("target unreachable");
    return b * co.value();
}

bool representable(const Rational& r, long bound) { return r.denominator() <= bound; }

}  // namespace

Rational min_reward_scan(const TaskGraph& graph, const Rational& b, const Rational& lambda, long denominator_bound) {
    const AgentParams params{b, lambda};
    const Rational cap = reward_cap(graph, b);
    std::set<Rational> candidates{Rational(0), cap};
    const auto fwd = forward_costs(graph);
    const auto bwd = backward_costs(graph);
    for (const auto& edge : graph.edges()) {
        if (edge.tail == graph.target()) continue;
        for (const auto& sunk : fwd[edge.tail]) {
            for (const auto& rest : bwd[edge.head]) {
                const Rational r = b * edge.cost + rest - lambda * sunk;
                if (r.sign() >= 0 && r <= cap) candidates.insert(r);
            }
        }
    }
    std::optional<Rational> previous;
    for (const auto& c : candidates) {
        if (previous) {
            const Rational inside = next_fraction_above(*previous, denominator_bound);
            if (inside < c && starts(graph, inside, params)) return inside;
        }
        if ((representable(c, denominator_bound) || c == cap) && starts(graph, c, params)) return c;
        previous = c;
    }
    throw std::logic_error("doubly sophisticated agent does not start at reward b*C_o");
}

MinRewardResult min_reward_search(const TaskGraph& graph, const Rational& b, const Rational& lambda,
                                  long denominator_bound) {
    if (denominator_bound < 1) throw std::invalid_argument("denominator bound must be >= 1");
    const AgentParams params{b, lambda};
    const Rational cap = reward_cap(graph, b);
    if (starts(graph, Rational(0), params)) return {Rational(0), false};
    if (!starts(graph, cap, params)) {
        return {min_reward_scan(graph, b, lambda, denominator_bound), true};
    }

    Rational lo(0), hi = cap;
    const Rational width = Rational(1) / Rational(2 * denominator_bound * denominator_bound);
    while (hi - lo >= width) {
        const Rational mid = (lo + hi) / Rational(2);
        (starts(graph, mid, params) ? hi : lo) = mid;
    }
    // At most one fraction of denominator <= D lies in (lo, hi].
    Rational answer = next_fraction_above(lo, denominator_bound);
    if (!starts(graph, answer, params)) answer = next_fraction_above(answer, denominator_bound);
    if (answer > cap) answer = cap;

    const Rational below = prev_fraction_below(answer, denominator_bound);
    const bool boundary_ok =
        starts(graph, answer, params) && (below.sign() < 0 || !starts(graph, below, params));
    if (!boundary_ok) return {min_reward_scan(graph, b, lambda, denominator_bound), true};
    return {answer, false};
}

Rational min_reward(const TaskGraph& graph, const Rational& b, const Rational& lambda, long denominator_bound) {
    return min_reward_search(graph, b, lambda, denominator_bound).reward;
}

}  // namespace biasplan
