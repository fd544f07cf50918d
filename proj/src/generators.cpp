#include "biasplan/generators.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <random>
#include <stdexcept>

namespace biasplan {

namespace {

void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

Instance make_instance(const GraphBuilder& builder, Rational reward, AgentParams params, std::string label) {
    Instance instance{builder.build(), std::move(reward), std::move(params), std::move(label)};
    require_valid(instance);
    return instance;
}

std::string grid_node(int week, int done) { return "v" + std::to_string(week) + "_" + std::to_string(done); }

}  // namespace

void check_subset_sum(const SubsetSumInstance& ss) {
    require(ss.target >= 1, "subset sum target must be >= 1");
    for (long x : ss.xs) require(x >= 1, "subset sum items must be >= 1");
}

Instance gym_fixture() {
    GraphBuilder g;
    for (const char* id : {"s", "v", "w", "t"}) g.add_node(id);
    g.add_edge("s", "v", Rational(1));
    g.add_edge("v", "t", Rational(12));
    g.add_edge("s", "w", Rational(4));
    g.add_edge("w", "t", Rational(10));
    g.set_source("s");
    g.set_target("t");
    return make_instance(g, Rational(19), AgentParams{Rational(2), Rational(1, 2)}, "gym");
}

Instance deadline_fixture(bool full) {
    GraphBuilder g;
    for (int week = 0; week <= 4; ++week) {
        for (int done = 0; done <= std::min(3, 2 * week); ++done) g.add_node(grid_node(week, done));
    }
    const Rational costs[] = {Rational(0), Rational(4), Rational(10)};
    for (int week = 0; week < 4; ++week) {
        for (int done = 0; done <= std::min(3, 2 * week); ++done) {
            for (int step = 0; step <= 2 && done + step <= 3; ++step) {
                if (!full && week == 1 && done == 0 && step == 0) continue;
                g.add_edge(grid_node(week, done), grid_node(week + 1, done + step), costs[step]);
            }
        }
    }
    g.set_source(grid_node(0, 0));
    g.set_target(grid_node(4, 3));
    return make_instance(g, Rational(35, 2), AgentParams{Rational(2), Rational(3, 4)},
                         full ? "deadline-full" : "deadline");
}

Instance sing_abandons_fixture() {
    GraphBuilder g;
    for (const char* id : {"s", "u", "v", "w", "t"}) g.add_node(id);
    g.add_edge("s", "u", Rational(2));
    g.add_edge("u", "v", Rational(4));
    g.add_edge("v", "w", Rational(0));
    g.add_edge("v", "t", Rational(3));
    g.add_edge("w", "t", Rational(6));
    g.set_source("s");
    g.set_target("t");
    return make_instance(g, Rational(11), AgentParams{Rational(2), Rational(1, 2)}, "sing-abandons");
}

Instance sing_better_fixture(const Rational& b, const Rational& lambda, const Rational& eps) {
    require(b > Rational(1), "sing-better needs b > 1");
    require(lambda.sign() > 0, "sing-better needs lambda > 0");
    require(eps.sign() > 0, "sing-better needs eps > 0");
    const Rational reward = b * b - lambda * eps;
    require(b * eps + b <= reward, "sing-better needs b*eps + b <= b^2 - lambda*eps");
    GraphBuilder g;
    for (const char* id : {"s", "v1", "v2", "t"}) g.add_node(id);
    g.add_edge("s", "v1", eps);
    g.add_edge("v1", "t", b);
    g.add_edge("s", "v2", Rational(1));
    g.add_edge("v2", "t", (b + Rational(1)) * eps);
    g.set_source("s");
    g.set_target("t");
    return make_instance(g, reward, AgentParams{b, lambda}, "sing-better");
}

Instance doubly_vs_soph_fixture(const Rational& b, const Rational& lambda, const Rational& eps) {
    require(b > Rational(1), "doubly-vs-soph needs b > 1");
    require(lambda.sign() > 0, "doubly-vs-soph needs lambda > 0");
    require(eps.sign() > 0, "doubly-vs-soph needs eps > 0");
    require(lambda * eps < b * b - b - eps, "doubly-vs-soph needs lambda*eps < b^2 - b - eps");
    const Rational reward = b * b - lambda * eps;
    GraphBuilder g;
    for (const char* id : {"s", "v", "t"}) g.add_node(id);
    g.add_edge("s", "v", eps);
    g.add_edge("v", "t", b);
    g.set_source("s");
    g.set_target("t");
    return make_instance(g, reward, AgentParams{b, lambda}, "doubly-vs-soph");
}

Instance fan_instance(int n, const Rational& b, const Rational& lambda, const Rational& y0) {
    require(n >= 1, "fan needs n >= 1");
    require(b > Rational(1), "fan needs b > 1");
    require(lambda.sign() > 0, "fan needs lambda > 0");
    require(y0.sign() > 0, "fan needs y0 > 0");
    const Rational growth = b * (b + lambda) / (b * b + lambda);
    const Rational x1 = y0 * b * (b - Rational(1)) / (b * b + lambda);

    GraphBuilder g;
    g.add_node("s");
    for (int i = 1; i <= n; ++i) g.add_node("v" + std::to_string(i));
    g.add_node("t");
    auto chain = [](int i) { return i == 0 ? std::string("s") : "v" + std::to_string(i); };
    for (int i = 0; i <= n; ++i) {
        g.add_edge(chain(i), "t", y0 * growth.pow(i));
        if (i < n) g.add_edge(chain(i), chain(i + 1), x1 * growth.pow(i));
    }
    g.set_source("s");
    g.set_target("t");
    return make_instance(g, b * y0, AgentParams{b, lambda}, "fan-" + std::to_string(n));
}

Rational singly_exp_alpha(const Rational& b, const Rational& lambda) {
    require(lambda.sign() > 0, "alpha needs lambda > 0");
    return std::min(Rational(1) / (Rational(2) * b * lambda), (b - Rational(1)) / (b * b + Rational(2) * lambda));
}

Instance singly_exponential_instance(int n, const Rational& b, const Rational& lambda, const Rational& reward,
                                     const Rational& eps) {
    require(n >= 1, "singly-exp needs n >= 1");
    require(b > Rational(2), "singly-exp needs b > 2");
    require(lambda.sign() > 0, "singly-exp needs lambda > 0");
    require(reward.sign() > 0, "singly-exp needs R > 0");
    require(eps.sign() > 0, "singly-exp needs eps > 0");
    const Rational alpha = singly_exp_alpha(b, lambda);
    std::vector<Rational> rs{reward};
    for (int i = 1; i <= n; ++i) rs.push_back(rs.back() * (Rational(1) + alpha * lambda));

    const auto si = [](const char* prefix, int i) { return prefix + std::to_string(i); };
    GraphBuilder g;
    g.add_node("s");
    for (int i = 1; i <= n; ++i) {
        for (const char* prefix : {"v", "u", "w", "t"}) g.add_node(si(prefix, i));
    }
    g.add_node("t");

    for (int i = 1; i <= n; ++i) {
        const Rational& prev = rs[i - 1];
        const Rational x = alpha * prev;
        const Rational z = prev / (b * b) + eps;
        const Rational y = rs[i] / b - prev / (b * b);
        const std::string stage = "singly-exp stage " + std::to_string(i) + ": ";
        require(b * z < prev, stage + "b*z_i < R_{i-1} fails");
        require(b * y + z < prev, stage + "b*y_i + z_i < R_{i-1} fails");
        require(b * x + y + z < prev, stage + "b*x_i + y_i + z_i < R_{i-1} fails");
        if (i >= 2) require(rs[i - 2] + b * b * eps < prev, stage + "b^2*z_{i-1} < R_{i-1} fails");

        g.add_edge(i == 1 ? std::string("s") : si("v", i - 1), si("v", i), x);
        g.add_edge(si("v", i), si("u", i), y);
        g.add_edge(si("u", i), si("t", i), z);
        g.add_edge(si("u", i), si("w", i), Rational(0));
        g.add_edge(si("w", i), si("t", i), b * z);
        g.add_edge(si("t", i), "t", Rational(0));
    }
    g.set_source("s");
    g.set_target("t");
    return make_instance(g, reward, AgentParams{b, lambda}, "singly-exp-" + std::to_string(n));
}

GadgetSequence gadget_sequence(long x, const Rational& b) {
    require(x >= 1, "gadget needs x >= 1");
    require(b > Rational(1), "gadget needs b > 1");
    const Rational target(x);
    const Rational first = Rational(1) / (Rational(2) * b);
    GadgetSequence seq{first, first};
    Rational total = first + first;
    while (total + seq.back() * Rational(2) < target) {
        seq.push_back(seq.back() * Rational(2));
        total += seq.back();
    }
    seq.push_back(target - total);
    return seq;
}

std::size_t gadget_length_bound(long x) {
    const unsigned long v = 6UL * static_cast<unsigned long>(x) + 1;
    std::size_t log = 0;
    while ((1UL << log) < v) ++log;
    return log + 2;
}

Rational reduction_bias(const Rational& lambda) { return Rational(2) + lambda; }

Rational reduction_default_eps(const Rational& lambda) { return Rational(1) / (Rational(4) * reduction_bias(lambda)); }

Instance reduction_instance(const SubsetSumInstance& ss, const Rational& lambda, const Rational& eps) {
    check_subset_sum(ss);
    require(lambda >= Rational(1, 2) && lambda < Rational(1), "reduction needs 1/2 <= lambda < 1");
    const Rational b = reduction_bias(lambda);
    require(eps.sign() > 0 && eps <= Rational(1) / (Rational(2) * b), "reduction needs 0 < eps <= 1/(2b)");

    const std::size_t n = ss.xs.size();
    const auto v = [](std::size_t i) { return "v" + std::to_string(i); };
    GraphBuilder g;
    g.add_node("s");
    for (std::size_t i = 1; i <= n + 1; ++i) g.add_node(v(i));
    for (std::size_t i = 1; i <= n; ++i) g.add_node("w" + std::to_string(i));
    g.add_node("t");

    g.add_edge("s", v(1), Rational(0));
    for (std::size_t i = 1; i <= n; ++i) {
        const std::string w = "w" + std::to_string(i);
        g.add_edge(v(i), w, Rational(0));
        g.add_edge(w, v(i + 1), Rational(0));
        const auto gadget = gadget_sequence(ss.xs[i - 1], b);
        std::string prev = v(i);
        for (std::size_t k = 0; k < gadget.size(); ++k) {
            std::string next = k + 1 == gadget.size() ? v(i + 1) : "g" + std::to_string(i) + "_" + std::to_string(k + 1);
            if (k + 1 < gadget.size()) g.add_node(next);
            g.add_edge(prev, next, gadget[k]);
            prev = std::move(next);
        }
    }
    g.add_edge(v(n + 1), "t", Rational(ss.target));
    g.set_source("s");
    g.set_target("t");
    const Rational reward = Rational(2 * ss.target) + lambda - eps;
    return make_instance(g, reward, AgentParams{b, lambda}, "reduction");
}

std::string reduction_sidecar_json(const SubsetSumInstance& ss, const Rational& lambda, const Rational& eps) {
    nlohmann::json j;
    j["xs"] = ss.xs;
    j["target"] = ss.target;
    j["bias"] = reduction_bias(lambda).str();
    j["sunk"] = lambda.str();
    j["eps"] = eps.str();
    return j.dump(2) + "\n";
}

Instance random_instance(const RandomOptions& options) {
    require(options.n >= 2, "random instance needs n >= 2");
    require(options.max_cost >= 0, "random instance needs max_cost >= 0");
    require(options.density.sign() >= 0 && options.density <= Rational(1), "density must lie in [0, 1]");
    std::mt19937_64 rng(options.seed);
    auto uniform = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };

    static const Rational kBiases[] = {Rational(1), Rational(3, 2), Rational(2), Rational(5, 2), Rational(3)};
    static const Rational kLambdas[] = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(1), Rational(3, 2)};
    const Rational b = options.b ? *options.b : kBiases[uniform(0, 4)];
    const Rational lambda = options.lambda ? *options.lambda : kLambdas[uniform(0, 4)];

    const int n = options.n;
    const int inner = n - 2;
    const int layers = inner > 0 ? static_cast<int>(uniform(1, inner)) : 0;
    std::vector<int> layer(n, 0);
    for (int i = 1; i <= inner; ++i) layer[i] = static_cast<int>(uniform(1, layers));
    std::sort(layer.begin() + 1, layer.begin() + 1 + inner);
    layer[n - 1] = layers + 1;

    const long num = options.density.numerator().get_si();
    const long den = options.density.denominator().get_si();
    auto coin = [&] { return uniform(1, den) <= num; };
    auto cost = [&] { return Rational(uniform(0, options.max_cost)); };

    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (int u = 0; u < n - 1; ++u) {
        for (int w = u + 1; w < n; ++w) {
            if (layer[w] > layer[u] && coin()) adj[u][w] = true;
        }
    }
    for (int u = 0; u < n - 1; ++u) {
        if (std::find(adj[u].begin(), adj[u].end(), true) != adj[u].end()) continue;
        std::vector<int> later;
        for (int w = u + 1; w < n; ++w) {
            if (layer[w] > layer[u]) later.push_back(w);
        }
        adj[u][later[uniform(0, static_cast<long>(later.size()) - 1)]] = true;
    }
    for (int w = 1; w < n; ++w) {
        bool has_in = false;
        for (int u = 0; u < w; ++u) has_in = has_in || adj[u][w];
        if (has_in) continue;
        std::vector<int> earlier;
        for (int u = 0; u < w; ++u) {
            if (layer[u] < layer[w]) earlier.push_back(u);
        }
        adj[earlier[uniform(0, static_cast<long>(earlier.size()) - 1)]][w] = true;
    }

    GraphBuilder g;
    for (int i = 0; i < n; ++i) g.add_node("n" + std::to_string(i));
    for (int u = 0; u < n; ++u) {
        for (int w = 0; w < n; ++w) {
            if (adj[u][w]) g.add_edge(static_cast<NodeIndex>(u), static_cast<NodeIndex>(w), cost());
        }
    }
    g.set_source("n0");
    g.set_target("n" + std::to_string(n - 1));
    TaskGraph graph = g.build();
    const Rational co = optimal_cost(graph).value();
    const long top = (Rational(4) * b * co).floor().get_si();
    const Rational reward(uniform(0, top), 2);
    Instance instance{std::move(graph), reward, AgentParams{b, lambda}, "random-" + std::to_string(options.seed)};
    require_valid(instance);
    return instance;
}

Instance random_instance(int n, long max_cost, const Rational& density, std::uint64_t seed) {
    RandomOptions options;
    options.n = n;
    options.max_cost = max_cost;
    options.density = density;
    options.seed = seed;
    return random_instance(options);
}

const std::vector<std::string>& generator_names() {
    static const std::vector<std::string> names{"gym",        "deadline",       "deadline-full", "sing-abandons",
                                                "sing-better", "doubly-vs-soph", "fan",           "singly-exp",
                                                "random"};
    return names;
}

}  // namespace biasplan
