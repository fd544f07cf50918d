#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "biasplan/analysis.hpp"
#include "biasplan/doubly_soph.hpp"
#include "biasplan/generators.hpp"
#include "biasplan/graph_io.hpp"

#include <random>

using namespace biasplan;

TEST_CASE("fixtures validate") {
    const Rational b(2), lambda(1, 2), eps(1, 100);
    for (const auto& inst : {gym_fixture(), deadline_fixture(), deadline_fixture(true), sing_abandons_fixture(),
                             sing_better_fixture(b, lambda, eps), doubly_vs_soph_fixture(b, lambda, eps)}) {
        CAPTURE(inst.label);
        CHECK(validate(inst.graph).empty());
    }
    CHECK(optimal_cost(gym_fixture().graph) == ExtRational(13));
    CHECK(gym_fixture().params == AgentParams{Rational(2), Rational(1, 2)});
    CHECK(deadline_fixture().params == AgentParams{Rational(2), Rational(3, 4)});
    CHECK(deadline_fixture().reward == Rational(35, 2));
}

TEST_CASE("deadline variants differ by one deferral edge") {
    const auto part = deadline_fixture().graph;
    const auto full = deadline_fixture(true).graph;
    CHECK(full.edge_count() == part.edge_count() + 1);
    auto has_edge = [](const TaskGraph& g, const char* a, const char* b) {
        for (const auto& e : g.edges()) {
            if (g.node_id(e.tail) == a && g.node_id(e.head) == b) return true;
        }
        return false;
    };
    CHECK(!has_edge(part, "v1_0", "v2_0"));
    CHECK(has_edge(full, "v1_0", "v2_0"));
    CHECK(has_edge(part, "v0_0", "v1_0"));
    CHECK(part.node_id(part.source()) == "v0_0");
    CHECK(part.node_id(part.target()) == "v4_3");
}

TEST_CASE("fixture preconditions are enforced") {
    CHECK_THROWS_AS(sing_better_fixture(Rational(1), Rational(1, 2), Rational(1, 100)), std::invalid_argument);
    CHECK_THROWS_AS(sing_better_fixture(Rational(2), Rational(1, 2), Rational(1)), std::invalid_argument);
    CHECK_THROWS_AS(doubly_vs_soph_fixture(Rational(2), Rational(1, 2), Rational(2)), std::invalid_argument);
    CHECK_THROWS_AS(fan_instance(0, Rational(2), Rational(1, 2), Rational(1)), std::invalid_argument);
    CHECK_THROWS_AS(singly_exponential_instance(3, Rational(2), Rational(1, 2), Rational(1), Rational(1, 100)),
                    std::invalid_argument);
}

TEST_CASE("singly-exp reports the violated stage") {
    try {
        (void)singly_exponential_instance(3, Rational(3), Rational(1, 2), Rational(1), Rational(1, 10));
        FAIL("expected a violated inequality");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("stage") != std::string::npos);
    }
}

TEST_CASE("fan instance costs") {
    const Instance fan = fan_instance(1, Rational(2), Rational(1, 2), Rational(1));
    const auto& g = fan.graph;
    CHECK(fan.reward == Rational(2));
    CHECK(g.edge(0).cost == Rational(1));      // s -> t
    CHECK(g.edge(1).cost == Rational(4, 9));   // x_1
    CHECK(g.edge(2).cost == Rational(10, 9));  // y_1
    CHECK(fan_cost_closed_form(1, Rational(2), Rational(1, 2), Rational(1)) == g.edge(1).cost + g.edge(2).cost);
}

TEST_CASE("singly-exp costs") {
    const Rational b(3), lambda(1, 2), r(1), eps(1, 100);
    const Rational alpha = singly_exp_alpha(b, lambda);
    CHECK(alpha == Rational(1, 5));
    const Instance inst = singly_exponential_instance(12, b, lambda, r, eps);
    CHECK(validate(inst.graph).empty());
    const auto& g = inst.graph;
    const Rational r1 = r * (Rational(1) + alpha * lambda);
    CHECK(g.edge(*g.find_edge("e0")).cost == alpha * r);
    CHECK(g.edge(1).cost == r1 / b - r / (b * b));  // y_1
    CHECK(g.edge(2).cost == r / (b * b) + eps);    // z_1
    CHECK(g.edge(4).cost == b * g.edge(2).cost);   // w_1 -> t_1
    CHECK(g.node_count() == 4 * 12 + 2);
}

TEST_CASE("gadget sequences") {
    CHECK(gadget_sequence(4, Rational(5, 2)) == GadgetSequence{Rational(1, 5), Rational(1, 5), Rational(2, 5),
                                                               Rational(4, 5), Rational(8, 5), Rational(4, 5)});
    const auto one = gadget_sequence(1, Rational(2));
    CHECK(one == GadgetSequence{Rational(1, 4), Rational(1, 4), Rational(1, 2)});
    CHECK(gadget_length_bound(4) == 7);
    CHECK(gadget_length_bound(1) == 5);
}

TEST_CASE("gadget invariants") {
    auto check_one = [](long x, const Rational& b) {
        const auto g = gadget_sequence(x, b);
        const Rational first = Rational(1) / (Rational(2) * b);
        REQUIRE(g.size() >= 3);
        CHECK(g[0] == first);
        CHECK(g[1] == first);
        Rational sum(0);
        for (const auto& c : g) sum += c;
        CHECK(sum == Rational(x));
        for (std::size_t i = 2; i + 1 < g.size(); ++i) CHECK(g[i] == Rational(2) * g[i - 1]);
        CHECK(g.back().sign() > 0);
        CHECK(g.back() <= Rational(2) * g[g.size() - 2]);
        CHECK(g.size() <= gadget_length_bound(x));
    };
    for (const Rational& b : {Rational(5, 2), Rational(11, 4)}) {
        for (long x = 1; x <= 1000; ++x) check_one(x, b);
        std::mt19937_64 rng(3);
        for (int i = 0; i < 500; ++i) check_one(std::uniform_int_distribution<long>(1001, 1000000)(rng), b);
        check_one(1000000, b);
    }
}

TEST_CASE("reduction instance shape") {
    const Rational lambda(1, 2);
    const Instance inst = reduction_instance({{1, 2, 3}, 3}, lambda, Rational(1, 100));
    CHECK(inst.params == AgentParams{Rational(5, 2), lambda});
    CHECK(inst.reward == Rational(6) + lambda - Rational(1, 100));
    const auto& g = inst.graph;
    for (const char* id : {"s", "v1", "v2", "v3", "v4", "w1", "w2", "w3", "t"}) CHECK(g.find_node(id));
    CHECK(g.edge(g.out_edges(*g.find_node("v4"))[0]).cost == Rational(3));
    CHECK(reduction_default_eps(lambda) == Rational(1, 10));
    CHECK(parse_instance(serialize_instance(inst)) == inst);

    CHECK_THROWS_AS(reduction_instance({{1, 2}, 3}, Rational(1, 4), Rational(1, 100)), std::invalid_argument);
    CHECK_THROWS_AS(reduction_instance({{1, 2}, 3}, Rational(1), Rational(1, 100)), std::invalid_argument);
    CHECK_THROWS_AS(reduction_instance({{1, 2}, 3}, lambda, Rational(1, 4)), std::invalid_argument);
    CHECK_THROWS_AS(reduction_instance({{0, 2}, 3}, lambda, Rational(1, 100)), std::invalid_argument);
    CHECK_THROWS_AS(reduction_instance({{1, 2}, 0}, lambda, Rational(1, 100)), std::invalid_argument);
}

TEST_CASE("reduction examples") {
    const Rational lambda(1, 2);
    const auto yes = recursive_states(reduction_instance({{1, 2, 3}, 3}, lambda, Rational(1, 100)));
    CHECK(yes.started);
    CHECK(yes.trace.outcome.kind == OutcomeKind::Reached);
    CHECK(yes.trace.total_cost == Rational(6));
    const auto no = recursive_states(reduction_instance({{2, 4}, 3}, lambda, Rational(1, 100)));
    CHECK(!no.started);
}

TEST_CASE("reduction sidecar") {
    const std::string json = reduction_sidecar_json({{1, 2, 3}, 3}, Rational(1, 2), Rational(1, 10));
    CHECK(json.find("\"bias\": \"5/2\"") != std::string::npos);
    CHECK(json.find("\"eps\": \"1/10\"") != std::string::npos);
    CHECK(json.find("\"target\": 3") != std::string::npos);
}

TEST_CASE("random instances") {
    CHECK(random_instance(8, 12, Rational(1, 2), 42) == random_instance(8, 12, Rational(1, 2), 42));
    CHECK(!(random_instance(8, 12, Rational(1, 2), 42) == random_instance(8, 12, Rational(1, 2), 43)));

    const Instance two = random_instance(2, 12, Rational(1, 2), 5);
    CHECK(two.graph.node_count() == 2);
    CHECK(two.graph.edge_count() == 1);

    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const Instance inst = random_instance(8, 12, Rational(1, 2), seed);
        CHECK(validate(inst.graph).empty());
        const Rational co = optimal_cost(inst.graph).value();
        CHECK(inst.reward.sign() >= 0);
        CHECK(inst.reward <= Rational(2) * inst.params.b * co);
        CHECK((inst.reward * Rational(2)).is_integer());
        const auto reach = reachable_from(inst.graph, inst.graph.source());
        CHECK(std::all_of(reach.begin(), reach.end(), [](bool r) { return r; }));
        for (const auto& e : inst.graph.edges()) {
            CHECK(e.cost.is_integer());
            CHECK(e.cost <= Rational(12));
        }
    }

    RandomOptions fixed;
    fixed.b = Rational(1);
    fixed.lambda = Rational(0);
    const Instance f = random_instance(fixed);
    CHECK(f.params == AgentParams{Rational(1), Rational(0)});
}
