#pragma once

// Planning for agents sophisticated about both present bias and sunk-cost
// bias. A decision depends on the node and on the exact sunk cost already
// paid, so every planner works over (node, sunk cost) states.

#include "biasplan/agents.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace biasplan {

struct StateKey {
    NodeIndex node = 0;
    Rational sunk;

    friend bool operator==(const StateKey&, const StateKey&) = default;
    friend auto operator<=>(const StateKey&, const StateKey&) = default;
};

struct PolicyEntry {
    /// nullopt at the target and at abandoned states.
    std::optional<EdgeIndex> edge;
    /// Infinity marks an abandoned state.
    ExtRational continuation;

    [[nodiscard]] bool abandons() const { return continuation.is_infinite(); }

    friend bool operator==(const PolicyEntry&, const PolicyEntry&) = default;
};

/// Decisions keyed by (node, exact sunk cost) for one (R, b, lambda).
class PolicyTable {
public:
    PolicyTable() = default;
    PolicyTable(Rational reward, AgentParams params) : reward_(std::move(reward)), params_(std::move(params)) {}

    void set(StateKey key, PolicyEntry entry) { entries_[std::move(key)] = std::move(entry); }
    [[nodiscard]] const PolicyEntry* find(const StateKey& key) const;
    [[nodiscard]] const PolicyEntry& at(const StateKey& key) const;
    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] const std::map<StateKey, PolicyEntry>& entries() const { return entries_; }

    [[nodiscard]] const Rational& reward() const { return reward_; }
    [[nodiscard]] const AgentParams& params() const { return params_; }

    /// Nodes visited following the policy from `start`.
    [[nodiscard]] std::vector<NodeIndex> path_from(const TaskGraph& graph, StateKey start) const;

    friend bool operator==(const PolicyTable&, const PolicyTable&) = default;

private:
    Rational reward_;
    AgentParams params_;
    std::map<StateKey, PolicyEntry> entries_;
};

struct DoublySophResult {
    TraversalTrace trace;
    PolicyTable policy;
    bool started = false;
};

/// Memoized top-down evaluation over reachable (node, sunk cost) states with
/// exact rational sunk costs. Usable from any start state.
class DoublySophPlanner {
public:
    DoublySophPlanner(const TaskGraph& graph, Rational reward, AgentParams params);

    const PolicyEntry& evaluate(NodeIndex node, const Rational& sunk);
    [[nodiscard]] const PolicyTable& policy() const { return policy_; }
    [[nodiscard]] PolicyTable take_policy() && { return std::move(policy_); }

private:
    const TaskGraph& graph_;
    PolicyTable policy_;
};

/// Bottom-up table over every integer sunk cost 0..C (C = sum of edge
/// costs). Throws std::invalid_argument on non-integer costs. The returned
/// policy is restricted to states reachable from (source, 0).
DoublySophResult dp_integer(const Instance& instance);

/// Full (n x (C+1)) table from dp_integer, indexed [node][sunk].
std::vector<std::vector<PolicyEntry>> dp_integer_table(const Instance& instance);

DoublySophResult recursive_states(const Instance& instance);

/// Unmemoized recursion; exponential in graph depth. Policy holds the states
/// along the realized path only.
DoublySophResult brute_force(const Instance& instance);

/// True when the doubly sophisticated agent leaves the source.
bool starts(const TaskGraph& graph, const Rational& reward, const AgentParams& params);

/// Builds the trace that follows a policy from (source, 0).
TraversalTrace trace_from_policy(const Instance& instance, const std::function<const PolicyEntry&(const StateKey&)>& lookup);

/// Violations of the PolicyTable invariants; empty when consistent.
std::vector<std::string> check_policy(const TaskGraph& graph, const PolicyTable& policy);

/// One line per state: "node sunk decision continuation", sorted by
/// (topological index, sunk cost).
std::string dump_policy(const TaskGraph& graph, const PolicyTable& policy);

struct MinRewardResult {
    Rational reward;
    /// True when the binary search boundary check failed and the candidate
    /// scan produced the answer.
    bool used_fallback = false;
};

/// Smallest reward with denominator <= denominator_bound at which the agent
/// starts. Binary search assuming monotonicity, verified at the boundary,
/// falling back to min_reward_scan.
MinRewardResult min_reward_search(const TaskGraph& graph, const Rational& b, const Rational& lambda,
                                  long denominator_bound);
Rational min_reward(const TaskGraph& graph, const Rational& b, const Rational& lambda, long denominator_bound);

/// Exhaustive scan over every reward at which some abandonment comparison is
/// tight, plus one representable point inside each gap between them. Does not
/// assume monotonicity.
Rational min_reward_scan(const TaskGraph& graph, const Rational& b, const Rational& lambda, long denominator_bound);

/// Smallest fraction with denominator <= bound strictly greater than x.
Rational next_fraction_above(const Rational& x, long bound);
/// Largest fraction with denominator <= bound strictly less than x.
Rational prev_fraction_below(const Rational& x, long bound);

}  // namespace biasplan
