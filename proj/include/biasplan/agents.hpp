#pragma once

#include "biasplan/graph.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace biasplan {

enum class AgentKind {
    Optimal,
    NaivePresentBiased,
    SophisticatedPresentBiased,
    DoublyNaive,
    SinglySophisticated,
    DoublySophisticated,
    NaivePresentSophSunk,
};

inline constexpr std::array<AgentKind, 7> kAllAgentKinds{
    AgentKind::Optimal,
    AgentKind::NaivePresentBiased,
    AgentKind::SophisticatedPresentBiased,
    AgentKind::DoublyNaive,
    AgentKind::SinglySophisticated,
    AgentKind::DoublySophisticated,
    AgentKind::NaivePresentSophSunk,
};

/// Kebab-case name, e.g. "doubly-naive".
std::string_view agent_kind_name(AgentKind kind);
std::optional<AgentKind> parse_agent_kind(std::string_view name);

/// Sunk-cost bias the kind actually applies: 0 for Optimal and the two
/// present-bias-only kinds.
Rational effective_lambda(AgentKind kind, const AgentParams& params);

Rational perceived_reward(const Rational& reward, const Rational& lambda, const Rational& sunk);

// ---------------------------------------------------------------------------
// Edge choice

/// One outgoing option as seen from the current node.
struct EdgeOption {
    EdgeIndex edge;
    Rational cost;
    ExtRational perceived;
};

/// Tie-break: lower perceived cost, then lower immediate edge cost, then
/// canonical edge order.
bool preferred(const EdgeOption& a, const EdgeOption& b);

/// Best option with finite perceived cost, or nullopt.
std::optional<EdgeOption> best_option(std::span<const EdgeOption> options);

// ---------------------------------------------------------------------------
// Sophisticated (b, 0) planning

struct PlanEntry {
    /// Chosen edge; nullopt at the target and at abandoned nodes.
    std::optional<EdgeIndex> edge;
    /// Infinity marks an abandoned node.
    ExtRational continuation;

    [[nodiscard]] bool abandons() const { return continuation.is_infinite(); }
};

class PlanTable {
public:
    PlanTable(Rational b, Rational rho, std::vector<PlanEntry> entries);

    [[nodiscard]] const PlanEntry& at(NodeIndex node) const { return entries_.at(node); }
    [[nodiscard]] const Rational& b() const { return b_; }
    [[nodiscard]] const Rational& rho() const { return rho_; }
    /// Nodes visited following the plan from `node`; just {node} when it abandons.
    [[nodiscard]] std::vector<NodeIndex> path_from(const TaskGraph& graph, NodeIndex node) const;

private:
    Rational b_;
    Rational rho_;
    std::vector<PlanEntry> entries_;
};

/// Backward induction for an agent sophisticated about present bias b and
/// facing a fixed reward rho.
PlanTable sophisticated_plan(const TaskGraph& graph, const Rational& b, const Rational& rho);

// ---------------------------------------------------------------------------
// Traces

struct Decision {
    enum class Type { Take, Abandon, Finish };
    Type type = Type::Finish;
    EdgeIndex edge = 0;  // meaningful for Take only

    static Decision take(EdgeIndex e) { return {Type::Take, e}; }
    static Decision abandon() { return {Type::Abandon, 0}; }
    static Decision finish() { return {Type::Finish, 0}; }

    friend bool operator==(const Decision&, const Decision&) = default;
};

struct TraceStep {
    NodeIndex node = 0;
    Rational sunk_cost;
    Rational perceived_reward;
    std::vector<NodeIndex> planned_path;
    Decision decision;

    friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

enum class OutcomeKind { Reached, AbandonedAt, NeverStarted };

struct Outcome {
    OutcomeKind kind = OutcomeKind::NeverStarted;
    NodeIndex node = 0;  // abandonment node for AbandonedAt

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct TraversalTrace {
    AgentKind kind = AgentKind::Optimal;
    std::vector<TraceStep> steps;
    Outcome outcome;
    Rational total_cost;
    Rational payoff;

    /// Visited nodes in order.
    [[nodiscard]] std::vector<NodeIndex> path() const;

    friend bool operator==(const TraversalTrace&, const TraversalTrace&) = default;
};

Rational payoff_of(const TraversalTrace& trace, const Rational& reward);

/// Fills outcome, total_cost and payoff from the recorded steps.
void finalize_trace(TraversalTrace& trace, const TaskGraph& graph, const Rational& reward);

TraversalTrace simulate(const Instance& instance, AgentKind kind);

struct SwitchReport {
    std::size_t switches = 0;
    /// Step indices at which the plan changed.
    std::vector<std::size_t> switch_steps;
    /// c_0..c_k: cost between consecutive switch points, starting at the
    /// source and ending with the trailing segment after the last switch.
    std::vector<Rational> segment_costs;
};

/// A step is a switch when its planned path is not the tail of the previous
/// step's planned path.
SwitchReport count_switches(const TraversalTrace& trace);

}  // namespace biasplan
