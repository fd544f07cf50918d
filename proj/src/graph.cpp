#include "biasplan/graph.hpp"

#include <functional>
#include <queue>
#include <stdexcept>

namespace biasplan {

std::optional<NodeIndex> TaskGraph::find_node(std::string_view id) const {
    auto it = node_lookup_.find(std::string(id));
    if (it == node_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<EdgeIndex> TaskGraph::find_edge(std::string_view id) const {
    for (EdgeIndex e = 0; e < edges_.size(); ++e) {
        if (edges_[e].id == id) return e;
    }
    return std::nullopt;
}

Rational TaskGraph::total_cost() const {
    Rational sum;
    for (const auto& e : edges_) sum += e.cost;
    return sum;
}

std::string default_edge_id(EdgeIndex index) { return "e" + std::to_string(index); }

NodeIndex GraphBuilder::add_node(std::string id) {
    if (id.empty()) throw std::invalid_argument("empty node id");
    if (graph_.node_lookup_.contains(id)) throw std::invalid_argument("duplicate node id '" + id + "'");
    const NodeIndex index = graph_.nodes_.size();
    graph_.node_lookup_.emplace(id, index);
    graph_.nodes_.push_back(std::move(id));
    graph_.out_.emplace_back();
    return index;
}

NodeIndex GraphBuilder::lookup(std::string_view id) const {
    auto found = graph_.find_node(id);
    if (!found) throw std::invalid_argument("unknown node '" + std::string(id) + "'");
    return *found;
}

bool GraphBuilder::has_node(std::string_view id) const { return graph_.find_node(id).has_value(); }

EdgeIndex GraphBuilder::add_edge(std::string_view tail, std::string_view head, Rational cost,
                                 std::string id) {
    return add_edge(lookup(tail), lookup(head), std::move(cost), std::move(id));
}

EdgeIndex GraphBuilder::add_edge(NodeIndex tail, NodeIndex head, Rational cost, std::string id) {
    if (tail >= graph_.nodes_.size() || head >= graph_.nodes_.size()) {
        throw std::invalid_argument("edge endpoint out of range");
    }
    const EdgeIndex index = graph_.edges_.size();
    if (id.empty()) id = default_edge_id(index);
    if (edge_lookup_.contains(id)) throw std::invalid_argument("duplicate edge id '" + id + "'");
    edge_lookup_.emplace(id, index);
    graph_.edges_.push_back(Edge{tail, head, std::move(cost), std::move(id)});
    graph_.out_[tail].push_back(index);
    return index;
}

void GraphBuilder::set_source(std::string_view id) { source_ = lookup(id); }
void GraphBuilder::set_target(std::string_view id) { target_ = lookup(id); }

TaskGraph GraphBuilder::build() const {
    if (!source_) throw std::invalid_argument("missing source");
    if (!target_) throw std::invalid_argument("missing target");
    TaskGraph g = graph_;
    g.source_ = *source_;
    g.target_ = *target_;
    return g;
}

void check_params(const AgentParams& params) {
    if (params.b < Rational(1)) throw std::invalid_argument("present bias b must be >= 1, got " + params.b.str());
    if (params.lambda < Rational(0)) {
        throw std::invalid_argument("sunk-cost bias lambda must be >= 0, got " + params.lambda.str());
    }
}

std::optional<std::vector<NodeIndex>> try_topological_order(const TaskGraph& graph) {
    const std::size_t n = graph.node_count();
    std::vector<std::size_t> indegree(n, 0);
    for (const auto& e : graph.edges()) ++indegree[e.head];

    std::priority_queue<NodeIndex, std::vector<NodeIndex>, std::greater<>> ready;
    for (NodeIndex v = 0; v < n; ++v) {
        if (indegree[v] == 0) ready.push(v);
    }
    std::vector<NodeIndex> order;
    order.reserve(n);
    while (!ready.empty()) {
        const NodeIndex u = ready.top();
        ready.pop();
        order.push_back(u);
        for (EdgeIndex e : graph.out_edges(u)) {
            if (--indegree[graph.edge(e).head] == 0) ready.push(graph.edge(e).head);
        }
    }
    if (order.size() != n) return std::nullopt;
    return order;
}

std::vector<NodeIndex> topological_order(const TaskGraph& graph) {
    auto order = try_topological_order(graph);
    if (!order) throw std::invalid_argument("graph has a cycle");
    return std::move(*order);
}

std::vector<bool> reachable_from(const TaskGraph& graph, NodeIndex from) {
    std::vector<bool> seen(graph.node_count(), false);
    std::vector<NodeIndex> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        const NodeIndex u = stack.back();
        stack.pop_back();
        for (EdgeIndex e : graph.out_edges(u)) {
            const NodeIndex v = graph.edge(e).head;
            if (!seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
        }
    }
    return seen;
}

std::vector<GraphIssue> validate(const TaskGraph& graph) {
    std::vector<GraphIssue> issues;

    std::unordered_map<std::string, int> seen_nodes;
    for (const auto& id : graph.nodes()) {
        if (++seen_nodes[id] == 2) issues.push_back({IssueKind::DuplicateId, "duplicate node id '" + id + "'"});
    }
    std::unordered_map<std::string, int> seen_edges;
    for (const auto& e : graph.edges()) {
        if (++seen_edges[e.id] == 2) issues.push_back({IssueKind::DuplicateId, "duplicate edge id '" + e.id + "'"});
    }

    for (const auto& e : graph.edges()) {
        if (e.cost.sign() < 0) {
            issues.push_back({IssueKind::NegativeCost, "edge '" + e.id + "' (" + graph.node_id(e.tail) + " -> " +
                                                           graph.node_id(e.head) + ") has negative cost " +
                                                           e.cost.str()});
        }
    }

    if (!try_topological_order(graph)) issues.push_back({IssueKind::Cycle, "graph contains a cycle"});

    if (graph.node_count() > 0 && !reachable_from(graph, graph.source())[graph.target()]) {
        issues.push_back({IssueKind::UnreachableTarget, "target '" + graph.node_id(graph.target()) +
                                                            "' is unreachable from source '" +
                                                            graph.node_id(graph.source()) + "'"});
    }
    return issues;
}

void require_valid(const TaskGraph& graph) {
    auto issues = validate(graph);
    if (issues.empty()) return;
    std::string msg = "invalid graph:";
    for (const auto& issue : issues) msg += " " + issue.message + ";";
    throw std::invalid_argument(msg);
}

void require_valid(const Instance& instance) {
    require_valid(instance.graph);
    if (instance.reward.sign() < 0) throw std::invalid_argument("reward must be >= 0");
    check_params(instance.params);
}

std::vector<ExtRational> shortest_path_costs(const TaskGraph& graph) {
    std::vector<ExtRational> dist(graph.node_count(), ExtRational::infinity());
    dist[graph.target()] = Rational(0);
    const auto order = topological_order(graph);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const NodeIndex u = *it;
        if (u == graph.target()) continue;
        for (EdgeIndex e : graph.out_edges(u)) {
            const auto& edge = graph.edge(e);
            const ExtRational via = ExtRational(edge.cost) + dist[edge.head];
            if (via < dist[u]) dist[u] = via;
        }
    }
    return dist;
}

ExtRational optimal_cost(const TaskGraph& graph) { return shortest_path_costs(graph)[graph.source()]; }

}  // namespace biasplan
