#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "biasplan/analysis.hpp"
#include "biasplan/generators.hpp"

using namespace biasplan;

namespace {

std::vector<std::string> ids(const std::vector<NodeIndex>& nodes, const TaskGraph& g) {
    std::vector<std::string> out;
    for (NodeIndex v : nodes) out.push_back(g.node_id(v));
    return out;
}

using Path = std::vector<std::string>;

}  // namespace

TEST_CASE("agent kind names round trip") {
    for (AgentKind kind : kAllAgentKinds) CHECK(parse_agent_kind(agent_kind_name(kind)) == kind);
    CHECK(agent_kind_name(AgentKind::NaivePresentSophSunk) == "naive-present-soph-sunk");
    CHECK(!parse_agent_kind("doubly_naive"));
}

TEST_CASE("effective lambda") {
    const AgentParams p{Rational(2), Rational(1, 2)};
    CHECK(effective_lambda(AgentKind::Optimal, p) == Rational(0));
    CHECK(effective_lambda(AgentKind::NaivePresentBiased, p) == Rational(0));
    CHECK(effective_lambda(AgentKind::SophisticatedPresentBiased, p) == Rational(0));
    CHECK(effective_lambda(AgentKind::DoublyNaive, p) == Rational(1, 2));
    CHECK(effective_lambda(AgentKind::DoublySophisticated, p) == Rational(1, 2));
}

TEST_CASE("tie-break prefers lower perceived, then cheaper edge, then index") {
    const EdgeOption a{3, Rational(2), ExtRational(5)};
    const EdgeOption b{1, Rational(1), ExtRational(5)};
    const EdgeOption c{0, Rational(1), ExtRational(5)};
    const EdgeOption d{7, Rational(9), ExtRational(4)};
    CHECK(preferred(b, a));
    CHECK(preferred(c, b));
    CHECK(preferred(d, c));
    const std::vector<EdgeOption> all{a, b, c};
    CHECK(best_option(all)->edge == 0);
    const std::vector<EdgeOption> none{{0, Rational(1), ExtRational::infinity()}};
    CHECK(!best_option(none));
}

TEST_CASE("gym fixture traces") {
    const Instance gym = gym_fixture();
    const auto& g = gym.graph;

    const auto opt = simulate(gym, AgentKind::Optimal);
    CHECK(ids(opt.path(), g) == Path{"s", "v", "t"});
    CHECK(opt.payoff == Rational(6));
    CHECK(ids(opt.steps.front().planned_path, g) == Path{"s", "v", "t"});

    const auto dn = simulate(gym, AgentKind::DoublyNaive);
    CHECK(dn.outcome == Outcome{OutcomeKind::AbandonedAt, *g.find_node("v")});
    CHECK(dn.payoff == Rational(-1));
    // Plans the upper path at s, then the plan collapses to {v} on abandoning.
    CHECK(ids(dn.steps[0].planned_path, g) == Path{"s", "v", "t"});
    CHECK(ids(dn.steps[1].planned_path, g) == Path{"v"});
    CHECK(dn.steps[1].perceived_reward == Rational(39, 2));

    const auto npb = simulate(gym, AgentKind::NaivePresentBiased);
    CHECK(npb.outcome == Outcome{OutcomeKind::AbandonedAt, *g.find_node("v")});
    CHECK(npb.steps[1].perceived_reward == Rational(19));

    const auto ds = simulate(gym, AgentKind::DoublySophisticated);
    CHECK(ids(ds.path(), g) == Path{"s", "w", "t"});
    CHECK(ds.payoff == Rational(5));

    for (AgentKind k : {AgentKind::SophisticatedPresentBiased, AgentKind::SinglySophisticated}) {
        const auto t = simulate(gym, k);
        CHECK(t.outcome.kind == OutcomeKind::NeverStarted);
        CHECK(t.payoff == Rational(0));
        CHECK(ids(t.steps.front().planned_path, g) == Path{"s"});
    }

    Instance low = gym;
    low.reward = Rational(10);
    CHECK(simulate(low, AgentKind::Optimal).outcome.kind == OutcomeKind::NeverStarted);
}

TEST_CASE("deadline fixture traces") {
    const Instance dl = deadline_fixture();
    const auto& g = dl.graph;

    const auto soph = simulate(dl, AgentKind::SophisticatedPresentBiased);
    CHECK(ids(soph.path(), g) == Path{"v0_0", "v1_0", "v2_1", "v3_2", "v4_3"});
    CHECK(soph.total_cost == Rational(12));
    CHECK(soph.payoff == Rational(11, 2));

    const auto dn = simulate(dl, AgentKind::DoublyNaive);
    CHECK(ids(dn.path(), g) == Path{"v0_0", "v1_0", "v2_1", "v3_1", "v4_3"});
    CHECK(dn.outcome.kind == OutcomeKind::Reached);
    CHECK(dn.total_cost == Rational(14));

    const auto npb = simulate(dl, AgentKind::NaivePresentBiased);
    CHECK(npb.outcome == Outcome{OutcomeKind::AbandonedAt, *g.find_node("v3_1")});
    CHECK(npb.total_cost == Rational(4));

    CHECK(simulate(dl, AgentKind::DoublySophisticated).outcome.kind == OutcomeKind::NeverStarted);

    const auto singly = simulate(dl, AgentKind::SinglySophisticated);
    CHECK(singly.outcome.kind == OutcomeKind::Reached);
    CHECK(singly.total_cost == Rational(14));
    const auto sw = count_switches(singly);
    CHECK(sw.switches == 1);
    CHECK(sw.switch_steps == std::vector<std::size_t>{2});
    CHECK(sw.segment_costs == std::vector<Rational>{Rational(4), Rational(10)});
}

TEST_CASE("full deadline grid still reproduces the sophisticated narration") {
    const Instance full = deadline_fixture(true);
    const auto soph = simulate(full, AgentKind::SophisticatedPresentBiased);
    CHECK(soph.total_cost == Rational(12));
    CHECK(soph.payoff == Rational(11, 2));
    CHECK(simulate(full, AgentKind::DoublySophisticated).outcome.kind == OutcomeKind::NeverStarted);
}

TEST_CASE("sing-abandons fixture") {
    const Instance sa = sing_abandons_fixture();
    const auto& g = sa.graph;
    const auto singly = simulate(sa, AgentKind::SinglySophisticated);
    CHECK(singly.outcome == Outcome{OutcomeKind::AbandonedAt, *g.find_node("u")});
    CHECK(singly.total_cost == Rational(2));
    CHECK(count_switches(singly).switches == 1);

    // At u with rho = 12 the sophisticated plan values u -> v at 2*4 + 6.
    const PlanTable at_u = sophisticated_plan(g, Rational(2), Rational(12));
    CHECK(at_u.at(*g.find_node("u")).abandons());
    CHECK(at_u.at(*g.find_node("v")).continuation == ExtRational(6));

    const auto soph = simulate(sa, AgentKind::SophisticatedPresentBiased);
    CHECK(ids(soph.path(), g) == Path{"s", "u", "v", "t"});
    CHECK(soph.total_cost == Rational(9));
    CHECK(soph.payoff == Rational(2));
    CHECK(simulate(sa, AgentKind::Optimal).payoff == Rational(2));
}

TEST_CASE("sophisticated plan on gym") {
    const auto g = gym_fixture().graph;
    const PlanTable plan = sophisticated_plan(g, Rational(2), Rational(19));
    CHECK(plan.at(*g.find_node("v")).abandons());  // 2*12 > 19
    CHECK(plan.at(*g.find_node("w")).abandons());  // 2*10 > 19
    CHECK(plan.at(*g.find_node("s")).abandons());
    CHECK(plan.path_from(g, 0) == std::vector<NodeIndex>{0});

    const PlanTable richer = sophisticated_plan(g, Rational(2), Rational(24));
    CHECK(richer.at(*g.find_node("w")).continuation == ExtRational(10));
    CHECK(richer.at(*g.find_node("v")).continuation == ExtRational(12));
    // s: via v 2 + 12 = 14, via w 8 + 10 = 18.
    CHECK(richer.at(0).continuation == ExtRational(13));
    CHECK(ids(richer.path_from(g, 0), g) == Path{"s", "v", "t"});
}

TEST_CASE("fan ties go to the chain edge") {
    const Instance fan = fan_instance(2, Rational(2), Rational(1, 2), Rational(1));
    const auto& g = fan.graph;
    const auto dn = simulate(fan, AgentKind::DoublyNaive);
    CHECK(ids(dn.path(), g) == Path{"s", "v1", "v2", "t"});
    CHECK(dn.total_cost == Rational(176, 81));
    // At v1: perceived cost of going straight to t equals the perceived reward.
    CHECK(Rational(2) * g.edge(2).cost == dn.steps[1].perceived_reward);

    const auto npb = simulate(fan, AgentKind::NaivePresentBiased);
    CHECK(ids(npb.path(), g) == Path{"s", "v1"});
    CHECK(npb.outcome.kind == OutcomeKind::AbandonedAt);
}

TEST_CASE("payoff and trace bookkeeping") {
    const Instance gym = gym_fixture();
    for (AgentKind kind : kAllAgentKinds) {
        const auto t = simulate(gym, kind);
        CHECK(t.kind == kind);
        CHECK(payoff_of(t, gym.reward) == t.payoff);
        Rational sunk(0);
        for (std::size_t i = 0; i < t.steps.size(); ++i) {
            const auto& step = t.steps[i];
            CHECK(step.sunk_cost == sunk);
            CHECK(!step.planned_path.empty());
            CHECK(step.planned_path.front() == step.node);
            if (step.decision.type == Decision::Type::Take) {
                CHECK(i + 1 < t.steps.size());
                sunk += gym.graph.edge(step.decision.edge).cost;
            } else {
                CHECK(i + 1 == t.steps.size());
            }
        }
    }
}

TEST_CASE("naive-present-soph-sunk matches doubly naive") {
    for (const auto& inst : {gym_fixture(), deadline_fixture(), deadline_fixture(true), sing_abandons_fixture(),
                             fan_instance(6, Rational(2), Rational(1, 2), Rational(1))}) {
        CAPTURE(inst.label);
        CHECK(same_behavior(simulate(inst, AgentKind::NaivePresentSophSunk), simulate(inst, AgentKind::DoublyNaive)));
    }
    for (std::size_t i = 0; i < 300; ++i) {
        const Instance inst = sweep_instance(11, i);
        CHECK(same_behavior(simulate(inst, AgentKind::NaivePresentSophSunk), simulate(inst, AgentKind::DoublyNaive)));
    }
}

TEST_CASE("model collapse at lambda = 0 and b = 1") {
    for (std::size_t i = 0; i < 300; ++i) {
        const Instance zero = sweep_instance(5, i, std::nullopt, Rational(0));
        CHECK(same_behavior(simulate(zero, AgentKind::DoublyNaive), simulate(zero, AgentKind::NaivePresentBiased)));
        const auto soph = simulate(zero, AgentKind::SophisticatedPresentBiased);
        CHECK(same_behavior(simulate(zero, AgentKind::SinglySophisticated), soph));
        CHECK(same_behavior(simulate(zero, AgentKind::DoublySophisticated), soph));

        const Instance unit = sweep_instance(5, i, Rational(1), std::nullopt);
        const auto opt = simulate(unit, AgentKind::Optimal);
        for (AgentKind kind : kAllAgentKinds) CHECK(same_outcome(simulate(unit, kind), opt));
    }
}

TEST_CASE("singly sophisticated segment costs obey the perceived reward growth") {
    // c_i <= (1+lambda)^i R and the cost before the last switch is bounded
    // by ((1+lambda)^k - 1)/lambda R.
    for (std::size_t i = 0; i < 500; ++i) {
        const Instance inst = sweep_instance(9, i);
        const auto& lambda = inst.params.lambda;
        const auto t = simulate(inst, AgentKind::SinglySophisticated);
        const auto sw = count_switches(t);
        REQUIRE(sw.segment_costs.size() == sw.switches + 1);
        Rational before_last(0);
        for (std::size_t j = 0; j < sw.segment_costs.size(); ++j) {
            CHECK(sw.segment_costs[j] <= (Rational(1) + lambda).pow(static_cast<long>(j)) * inst.reward);
            if (j < sw.switches) before_last += sw.segment_costs[j];
        }
        Rational total(0);
        for (const auto& c : sw.segment_costs) total += c;
        CHECK(total == t.total_cost);
        if (lambda.sign() > 0) {
            const long k = static_cast<long>(sw.switches);
            CHECK(before_last <= ((Rational(1) + lambda).pow(k) - Rational(1)) / lambda * inst.reward);
        }
    }
}

TEST_CASE("singly sophisticated on the exponential family") {
    const Instance inst = singly_exponential_instance(4, Rational(3), Rational(1, 2), Rational(1), Rational(1, 100));
    const auto t = simulate(inst, AgentKind::SinglySophisticated);
    CHECK(ids(t.path(), inst.graph) == Path{"s", "v1", "v2", "v3", "v4"});
    CHECK(count_switches(t).switches == 4);
    // Each stage plans v_{i-1} -> v_i -> u_i -> t_i -> t.
    CHECK(ids(t.steps[1].planned_path, inst.graph) == Path{"v1", "v2", "u2", "t2", "t"});
}
