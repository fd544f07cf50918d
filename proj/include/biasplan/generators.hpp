#pragma once

// Instance families: the worked fixtures, the exponential-cost families, the
// Subset Sum reduction and seeded random DAGs. Generators check the strict
// inequalities their constructions depend on and throw
// std::invalid_argument when a parameter choice breaks one.

#include "biasplan/graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace biasplan {

struct SubsetSumInstance {
    std::vector<long> xs;
    long target = 0;

    friend bool operator==(const SubsetSumInstance&, const SubsetSumInstance&) = default;
};

/// Throws unless every x_i >= 1 and target >= 1.
void check_subset_sum(const SubsetSumInstance& ss);

using GadgetSequence = std::vector<Rational>;

Instance gym_fixture();

/// Week/project grid with s = v0_0 and t = v4_3. The default variant leaves
/// out the v1_0 -> v2_0 deferral edge; full = true keeps it.
Instance deadline_fixture(bool full = false);

Instance sing_abandons_fixture();
Instance sing_better_fixture(const Rational& b, const Rational& lambda, const Rational& eps);
Instance doubly_vs_soph_fixture(const Rational& b, const Rational& lambda, const Rational& eps);

/// Chain s = v0, v1..vn with a direct edge from every chain node to t.
Instance fan_instance(int n, const Rational& b, const Rational& lambda, const Rational& y0);

/// alpha = min(1/(2 b lambda), (b-1)/(b^2 + 2 lambda)).
Rational singly_exp_alpha(const Rational& b, const Rational& lambda);
Instance singly_exponential_instance(int n, const Rational& b, const Rational& lambda, const Rational& reward,
                                     const Rational& eps);

GadgetSequence gadget_sequence(long x, const Rational& b);

/// Upper bound on gadget length: ceil(log2(6x + 1)) + 2.
std::size_t gadget_length_bound(long x);

/// Present bias used by the reduction: b = 2 + lambda.
Rational reduction_bias(const Rational& lambda);
/// Default eps = 1/(4b).
Rational reduction_default_eps(const Rational& lambda);

/// Nodes s, v1..v{n+1}, w1..wn, t and gadget nodes g<i>_<k>. Requires
/// 1/2 <= lambda < 1 and 0 < eps <= 1/(2b).
Instance reduction_instance(const SubsetSumInstance& ss, const Rational& lambda, const Rational& eps);

/// Sidecar written next to a reduction instance: xs, T, b, lambda, eps.
std::string reduction_sidecar_json(const SubsetSumInstance& ss, const Rational& lambda, const Rational& eps);

struct RandomOptions {
    int n = 8;
    long max_cost = 12;
    Rational density{1, 2};
    std::uint64_t seed = 1;
    /// Drawn from a small fixed menu when absent.
    std::optional<Rational> b;
    std::optional<Rational> lambda;
};

/// Layered random DAG with integer costs in [0, max_cost]. Every node is
/// reachable from s and every non-target node has an edge to a later layer.
/// Reward is a multiple of 1/2 in [0, 2 b C_o].
Instance random_instance(const RandomOptions& options);
Instance random_instance(int n, long max_cost, const Rational& density, std::uint64_t seed);

/// Names accepted by the CLI generate subcommand.
const std::vector<std::string>& generator_names();

}  // namespace biasplan
