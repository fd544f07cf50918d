#pragma once

// Payoff gaps between agent kinds, closed forms for the exponential
// families, the Subset Sum oracle, and the property suites behind `verify`.

#include "biasplan/agents.hpp"
#include "biasplan/generators.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace biasplan {

/// observed <= bound. A missing observation never holds.
struct BoundCheck {
    std::string name;
    Rational bound;
    std::optional<Rational> observed;
    bool holds = false;

    friend bool operator==(const BoundCheck&, const BoundCheck&) = default;
};

/// Recomputes holds from bound and observed.
bool check_holds(const BoundCheck& check);

struct GapReport {
    std::string label;
    std::map<AgentKind, Rational> payoffs;
    Rational optimal_cost;
    std::vector<BoundCheck> checks;

    [[nodiscard]] bool all_hold() const;
};

/// payoff(Optimal) - payoff(DoublySophisticated) <= (b-1) C_o.
BoundCheck gap_doubly_soph_vs_optimal(const Instance& instance);

/// |payoff(DoublySoph) - payoff(SophPB)| <= (b-1) C_o and
/// payoff(SinglySoph) - payoff(DoublySoph) <= (b-1) C_o.
std::vector<BoundCheck> gap_soph_kinds(const Instance& instance);

/// min_reward <= b C_o.
BoundCheck min_reward_check(const Instance& instance, long denominator_bound);

/// With R := b C_o the doubly sophisticated agent reaches t at cost <= b C_o.
BoundCheck reward_ratio_check(const Instance& instance);

/// Payoffs of every kind plus all five bound checks.
GapReport gap_report(const Instance& instance, long denominator_bound = 100);

std::string format_gap_report(const GapReport& report);
std::string gap_report_record(const GapReport& report);

/// ((1+lambda)^k - 1)/lambda * R + R. Rejects lambda <= 0 and k < 0.
Rational singly_gap_bound(long k, const Rational& lambda, const Rational& reward);

/// (y0/lambda) [(b+lambda) (b(b+lambda)/(b^2+lambda))^n - b].
Rational fan_cost_closed_form(int n, const Rational& b, const Rational& lambda, const Rational& y0);

/// Indices of a subset of xs summing to target, or nullopt. Among all
/// witnesses the one with the fewest elements wins, then the
/// lexicographically smallest ascending index list. Requires xs.size() <= 24.
std::optional<std::vector<std::size_t>> subset_sum_oracle(const SubsetSumInstance& ss);

/// Two traces agree on everything except the agent kind.
bool same_behavior(const TraversalTrace& a, const TraversalTrace& b);
/// Same path, outcome, total cost and payoff.
bool same_outcome(const TraversalTrace& a, const TraversalTrace& b);

// ---------------------------------------------------------------------------
// Property suites

struct VerifyFailure {
    std::string check;
    std::string message;
    /// Instance file text that reproduces the failure; empty when the check
    /// is not tied to one instance.
    std::string replay;
};

struct VerifyReport {
    std::string suite;
    std::size_t checks = 0;
    std::vector<VerifyFailure> failures;

    [[nodiscard]] bool passed() const { return failures.empty(); }
};

struct VerifyOptions {
    std::size_t trials = 200;
    std::uint64_t seed = 20240601;
    long denominator_bound = 100;
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite; "all" runs every suite.
std::vector<VerifyReport> run_suite(const std::string& name, const VerifyOptions& options);

VerifyReport verify_fixtures(const VerifyOptions& options);
VerifyReport verify_equivalence(const VerifyOptions& options);
VerifyReport verify_bounds(const VerifyOptions& options);
VerifyReport verify_reduction(const VerifyOptions& options);

std::string format_verify_report(const VerifyReport& report);

/// Random instance used by the sweeps for trial i: n in [2, 10], costs <= 12.
Instance sweep_instance(std::uint64_t seed, std::size_t trial, std::optional<Rational> b = std::nullopt,
                        std::optional<Rational> lambda = std::nullopt);

}  // namespace biasplan
