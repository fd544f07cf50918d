#pragma once

#include "biasplan/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace biasplan {

using NodeIndex = std::size_t;
using EdgeIndex = std::size_t;

struct Edge {
    NodeIndex tail = 0;
    NodeIndex head = 0;
    Rational cost;
    std::string id;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed task graph with exact edge costs. Node and edge insertion order is
/// canonical: it drives topological tie-breaks and edge tie-breaks.
class TaskGraph {
public:
    [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }
    [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }

    [[nodiscard]] const std::vector<std::string>& nodes() const { return nodes_; }
    [[nodiscard]] const std::string& node_id(NodeIndex n) const { return nodes_.at(n); }
    [[nodiscard]] std::optional<NodeIndex> find_node(std::string_view id) const;

    [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
    [[nodiscard]] const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
    [[nodiscard]] std::optional<EdgeIndex> find_edge(std::string_view id) const;
    [[nodiscard]] std::span<const EdgeIndex> out_edges(NodeIndex n) const { return out_.at(n); }

    [[nodiscard]] NodeIndex source() const { return source_; }
    [[nodiscard]] NodeIndex target() const { return target_; }

    /// Sum of all edge costs.
    [[nodiscard]] Rational total_cost() const;

    friend bool operator==(const TaskGraph& a, const TaskGraph& b) {
        return a.nodes_ == b.nodes_ && a.edges_ == b.edges_ && a.source_ == b.source_ &&
               a.target_ == b.target_;
    }

private:
    friend class GraphBuilder;

    std::vector<std::string> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeIndex>> out_;
    std::unordered_map<std::string, NodeIndex> node_lookup_;
    NodeIndex source_ = 0;
    NodeIndex target_ = 0;
};

/// Assembles a TaskGraph. Rejects duplicate ids and references to unknown
/// nodes; structural invariants (acyclicity, costs, reachability) are left to
/// validate().
class GraphBuilder {
public:
    NodeIndex add_node(std::string id);
    /// An empty id becomes "e<index>".
    EdgeIndex add_edge(std::string_view tail, std::string_view head, Rational cost,
                       std::string id = {});
    EdgeIndex add_edge(NodeIndex tail, NodeIndex head, Rational cost, std::string id = {});
    void set_source(std::string_view id);
    void set_target(std::string_view id);

    [[nodiscard]] bool has_node(std::string_view id) const;
    [[nodiscard]] std::size_t node_count() const { return graph_.nodes_.size(); }

    /// Throws std::invalid_argument if source or target was never set.
    [[nodiscard]] TaskGraph build() const;

private:
    NodeIndex lookup(std::string_view id) const;

    TaskGraph graph_;
    std::unordered_map<std::string, EdgeIndex> edge_lookup_;
    std::optional<NodeIndex> source_;
    std::optional<NodeIndex> target_;
};

std::string default_edge_id(EdgeIndex index);

/// Present bias b ≥ 1 and sunk-cost bias lambda ≥ 0.
struct AgentParams {
    Rational b{1};
    Rational lambda{0};

    friend bool operator==(const AgentParams&, const AgentParams&) = default;
};

/// Throws std::invalid_argument when b < 1 or lambda < 0.
void check_params(const AgentParams& params);

struct Instance {
    TaskGraph graph;
    Rational reward;
    AgentParams params;
    std::string label;

    friend bool operator==(const Instance&, const Instance&) = default;
};

enum class IssueKind { Cycle, UnreachableTarget, NegativeCost, DuplicateId };

struct GraphIssue {
    IssueKind kind;
    std::string message;
};

/// Every violated TaskGraph invariant; empty when the graph is valid.
std::vector<GraphIssue> validate(const TaskGraph& graph);

/// Throws std::invalid_argument listing every issue when the graph is invalid,
/// or when the instance reward is negative or params are out of range.
void require_valid(const TaskGraph& graph);
void require_valid(const Instance& instance);

/// Kahn's algorithm, always releasing the ready node with the smallest
/// insertion index. nullopt if the graph has a cycle.
std::optional<std::vector<NodeIndex>> try_topological_order(const TaskGraph& graph);

/// Precondition: graph is acyclic.
std::vector<NodeIndex> topological_order(const TaskGraph& graph);

/// d(v, t) for every node; infinity where t is unreachable.
std::vector<ExtRational> shortest_path_costs(const TaskGraph& graph);

/// d(s, t).
ExtRational optimal_cost(const TaskGraph& graph);

/// Nodes reachable from `from` (including itself).
std::vector<bool> reachable_from(const TaskGraph& graph, NodeIndex from);

}  // namespace biasplan
