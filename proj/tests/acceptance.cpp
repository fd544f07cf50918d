// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "biasplan/analysis.hpp"
#include "biasplan/doubly_soph.hpp"
#include "biasplan/generators.hpp"

#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace biasplan;

namespace {

constexpr std::uint64_t kSeed = 20240601;

using Path = std::vector<std::string>;

// Collects the first few failure messages for the summary line.
struct Tally {
    std::size_t checks = 0;
    std::size_t failed = 0;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (ok) return;
        ++failed;
        if (notes.size() < 3) notes.push_back(what);
    }
};

Path ids(const TraversalTrace& t, const TaskGraph& g) {
    Path out;
    for (NodeIndex v : t.path()) out.push_back(g.node_id(v));
    return out;
}

std::string show(const TraversalTrace& t, const TaskGraph& g) {
    std::string p;
    for (const auto& id : ids(t, g)) p += (p.empty() ? "" : ",") + id;
    return std::string(agent_kind_name(t.kind)) + " [" + p + "] cost " + t.total_cost.str() + " payoff " +
           t.payoff.str();
}

void expect_trace(Tally& tally, const Instance& inst, AgentKind kind, const Path& path, OutcomeKind outcome,
                  const Rational& cost, const Rational& payoff) {
    const auto t = simulate(inst, kind);
    tally.expect(ids(t, inst.graph) == path && t.outcome.kind == outcome && t.total_cost == cost && t.payoff == payoff,
                 inst.label + ": " + show(t, inst.graph));
}

Tally criterion_gym() {
    Tally t;
    const Instance gym = gym_fixture();
    expect_trace(t, gym, AgentKind::Optimal, {"s", "v", "t"}, OutcomeKind::Reached, 13, 6);
    expect_trace(t, gym, AgentKind::DoublyNaive, {"s", "v"}, OutcomeKind::AbandonedAt, 1, -1);
    expect_trace(t, gym, AgentKind::DoublySophisticated, {"s", "w", "t"}, OutcomeKind::Reached, 14, 5);
    expect_trace(t, gym, AgentKind::SophisticatedPresentBiased, {"s"}, OutcomeKind::NeverStarted, 0, 0);
    expect_trace(t, gym, AgentKind::SinglySophisticated, {"s"}, OutcomeKind::NeverStarted, 0, 0);
    const auto naive = simulate(gym, AgentKind::NaivePresentBiased);
    t.expect(naive.outcome == Outcome{OutcomeKind::AbandonedAt, *gym.graph.find_node("v")}, show(naive, gym.graph));
    return t;
}

Tally criterion_deadline() {
    Tally t;
    const Instance dl = deadline_fixture();
    const auto soph = simulate(dl, AgentKind::SophisticatedPresentBiased);
    t.expect(soph.outcome.kind == OutcomeKind::Reached && soph.total_cost == Rational(12) &&
                 soph.payoff == Rational(11, 2),
             show(soph, dl.graph));
    const auto dn = simulate(dl, AgentKind::DoublyNaive);
    t.expect(dn.outcome.kind == OutcomeKind::Reached && dn.total_cost == Rational(14), show(dn, dl.graph));
    const auto naive = simulate(dl, AgentKind::NaivePresentBiased);
    const bool week4 = naive.outcome.kind == OutcomeKind::AbandonedAt &&
                       dl.graph.node_id(naive.outcome.node).rfind("v3_", 0) == 0;  // deciding week 4's work
    t.expect(week4 && naive.total_cost == Rational(4) && naive.steps.back().sunk_cost == Rational(4),
             show(naive, dl.graph));
    expect_trace(t, dl, AgentKind::DoublySophisticated, {"v0_0"}, OutcomeKind::NeverStarted, 0, 0);
    const auto singly = simulate(dl, AgentKind::SinglySophisticated);
    t.expect(singly.outcome.kind == OutcomeKind::Reached && singly.total_cost == Rational(14) &&
                 count_switches(singly).switches == 1,
             show(singly, dl.graph));
    return t;
}

Tally criterion_sing_abandons() {
    Tally t;
    const Instance sa = sing_abandons_fixture();
    expect_trace(t, sa, AgentKind::SinglySophisticated, {"s", "u"}, OutcomeKind::AbandonedAt, 2, -2);
    return t;
}

Tally criterion_planners() {
    Tally t;
    for (std::size_t i = 0; i < 1000; ++i) {
        const Instance inst = sweep_instance(kSeed, i);
        const auto dp = dp_integer(inst);
        const auto rec = recursive_states(inst);
        const auto brute = brute_force(inst);
        const std::string where = "trial " + std::to_string(i);
        t.expect(dp.trace == rec.trace && dp.started == rec.started, where + ": dp vs recursive");
        t.expect(dp.policy.entries() == rec.policy.entries(), where + ": policy tables");
        t.expect(brute.trace == rec.trace && brute.started == rec.started, where + ": brute vs recursive");
    }
    return t;
}

void reduction_case(Tally& t, const SubsetSumInstance& ss, const Rational& lambda) {
    const Instance inst = reduction_instance(ss, lambda, reduction_default_eps(lambda));
    const bool solvable = subset_sum_oracle(ss).has_value();
    const auto result = recursive_states(inst);
    std::ostringstream label;
    label << "xs=";
    for (long x : ss.xs) label << x << ' ';
    label << "T=" << ss.target;
    t.expect(result.started == solvable, label.str() + ": started " + (result.started ? "yes" : "no"));
    if (!result.started) return;
    const NodeIndex last = *inst.graph.find_node("v" + std::to_string(ss.xs.size() + 1));
    std::optional<Rational> sunk;
    for (const auto& step : result.trace.steps) {
        if (step.node == last) sunk = step.sunk_cost;
    }
    t.expect(sunk == Rational(ss.target), label.str() + ": wrong sunk cost at the last chain node");
}

Tally criterion_reduction() {
    Tally t;
    t.expect(gadget_sequence(4, Rational(5, 2)) == GadgetSequence{Rational(1, 5), Rational(1, 5), Rational(2, 5),
                                                                  Rational(4, 5), Rational(8, 5), Rational(4, 5)},
             "gadget x=4 b=5/2");
    for (long x = 1; x <= 1000; ++x) {
        for (const Rational& b : {Rational(5, 2), Rational(11, 4)}) {
            t.expect(gadget_sequence(x, b).size() <= gadget_length_bound(x), "gadget length x=" + std::to_string(x));
        }
    }

    const Rational lambdas[] = {Rational(1, 2), Rational(3, 4)};
    std::size_t k = 0;
    // Every non-decreasing item list of length <= 3 over 1..15, every target 1..40.
    std::vector<long> xs;
    auto extend = [&](auto&& self, long from) -> void {
        if (!xs.empty()) {
            for (long target = 1; target <= 40; ++target) reduction_case(t, {xs, target}, lambdas[k++ % 2]);
        }
        if (xs.size() == 3) return;
        for (long x = from; x <= 15; ++x) {
            xs.push_back(x);
            self(self, x);
            xs.pop_back();
        }
    };
    extend(extend, 1);

    std::mt19937_64 rng(kSeed);
    auto sample = [&](std::size_t n) {
        SubsetSumInstance ss;
        for (std::size_t j = 0; j < n; ++j) ss.xs.push_back(std::uniform_int_distribution<long>(1, 15)(rng));
        ss.target = std::uniform_int_distribution<long>(1, 40)(rng);
        return ss;
    };
    for (std::size_t n = 4; n <= 10; ++n) {
        for (int i = 0; i < 300; ++i) reduction_case(t, sample(n), lambdas[k++ % 2]);
    }
    for (int i = 0; i < 200; ++i) reduction_case(t, sample(12), lambdas[k++ % 2]);
    return t;
}

void bounds_on(Tally& t, const Instance& inst) {
    for (const auto& c : gap_report(inst).checks) {
        t.expect(check_holds(c), inst.label + ": " + c.name + " observed " +
                                     (c.observed ? c.observed->str() : "none") + " limit " + c.bound.str());
    }
}

std::vector<Instance> fixtures() {
    const Rational b(2), lambda(1, 2), eps(1, 100);
    return {gym_fixture(),
            deadline_fixture(),
            deadline_fixture(true),
            sing_abandons_fixture(),
            sing_better_fixture(b, lambda, eps),
            doubly_vs_soph_fixture(b, lambda, eps),
            fan_instance(5, b, lambda, Rational(1)),
            singly_exponential_instance(3, Rational(3), lambda, Rational(1), eps)};
}

Tally criterion_bounds() {
    Tally t;
    for (const auto& inst : fixtures()) bounds_on(t, inst);
    for (std::size_t i = 0; i < 1000; ++i) bounds_on(t, sweep_instance(kSeed + 1, i));
    return t;
}

Tally criterion_families() {
    Tally t;
    const std::array<std::array<Rational, 3>, 4> points{{{Rational(2), Rational(1, 2), Rational(1)},
                                                         {Rational(3, 2), Rational(1, 4), Rational(2)},
                                                         {Rational(3), Rational(1), Rational(1, 2)},
                                                         {Rational(5, 2), Rational(3, 2), Rational(3)}}};
    for (const auto& [b, lambda, y0] : points) {
        for (int n = 1; n <= 20; ++n) {
            const Instance fan = fan_instance(n, b, lambda, y0);
            const auto trace = simulate(fan, AgentKind::DoublyNaive);
            t.expect(trace.outcome.kind == OutcomeKind::Reached &&
                         trace.total_cost == fan_cost_closed_form(n, b, lambda, y0),
                     fan.label + " n=" + std::to_string(n) + ": " + show(trace, fan.graph));
        }
    }
    const Instance fan20 = fan_instance(20, Rational(2), Rational(1, 2), Rational(1));
    const auto cost20 = simulate(fan20, AgentKind::DoublyNaive).total_cost;
    t.expect(cost20 > Rational(10) * fan20.reward, "fan n=20 cost " + cost20.str());

    const Rational b(3), lambda(1, 2), reward(1);
    const Rational alpha = singly_exp_alpha(b, lambda);
    for (int n = 1; n <= 12; ++n) {
        const Instance inst = singly_exponential_instance(n, b, lambda, reward, Rational(1, 100));
        const auto trace = simulate(inst, AgentKind::SinglySophisticated);
        const Rational want = ((Rational(1) + alpha * lambda).pow(n) - Rational(1)) / lambda * reward;
        const bool at_vn = trace.outcome.kind == OutcomeKind::AbandonedAt &&
                           inst.graph.node_id(trace.outcome.node) == "v" + std::to_string(n);
        t.expect(at_vn && trace.total_cost == want && count_switches(trace).switches == static_cast<std::size_t>(n),
                 "singly-exp n=" + std::to_string(n) + ": " + show(trace, inst.graph));
    }
    return t;
}

Tally criterion_collapse() {
    Tally t;
    for (std::size_t i = 0; i < 500; ++i) {
        const Instance zero = sweep_instance(kSeed + 2, i, std::nullopt, Rational(0));
        const auto soph = simulate(zero, AgentKind::SophisticatedPresentBiased);
        t.expect(same_behavior(simulate(zero, AgentKind::DoublyNaive), simulate(zero, AgentKind::NaivePresentBiased)),
                 zero.label + ": lambda=0 doubly-naive");
        t.expect(same_behavior(simulate(zero, AgentKind::SinglySophisticated), soph),
                 zero.label + ": lambda=0 singly-sophisticated");
        t.expect(same_behavior(simulate(zero, AgentKind::DoublySophisticated), soph),
                 zero.label + ": lambda=0 doubly-sophisticated");

        const Instance unit = sweep_instance(kSeed + 3, i, Rational(1), std::nullopt);
        const auto opt = simulate(unit, AgentKind::Optimal);
        for (AgentKind kind : kAllAgentKinds) {
            t.expect(same_outcome(simulate(unit, kind), opt),
                     unit.label + ": b=1 " + std::string(agent_kind_name(kind)));
        }

        const Instance any = sweep_instance(kSeed + 4, i);
        t.expect(same_behavior(simulate(any, AgentKind::NaivePresentSophSunk), simulate(any, AgentKind::DoublyNaive)),
                 any.label + ": naive-present-soph-sunk");
    }
    for (const auto& inst : fixtures()) {
        t.expect(same_behavior(simulate(inst, AgentKind::NaivePresentSophSunk), simulate(inst, AgentKind::DoublyNaive)),
                 inst.label + ": naive-present-soph-sunk");
    }
    return t;
}

Tally criterion_tightness() {
    Tally t;
    const Rational b(2), lambda(1, 2), eps(1, 100);
    const Instance sb = sing_better_fixture(b, lambda, eps);
    expect_trace(t, sb, AgentKind::DoublySophisticated, {"s", "v1", "t"}, OutcomeKind::Reached, b + eps,
                 sb.reward - b - eps);
    const Rational cheap = Rational(1) + (b + Rational(1)) * eps;
    expect_trace(t, sb, AgentKind::SophisticatedPresentBiased, {"s", "v2", "t"}, OutcomeKind::Reached, cheap,
                 sb.reward - cheap);
    const Rational gap = simulate(sb, AgentKind::SophisticatedPresentBiased).payoff -
                         simulate(sb, AgentKind::DoublySophisticated).payoff;
    t.expect(gap == (b - Rational(1)) - b * eps, "sing-better gap " + gap.str());

    const Instance dv = doubly_vs_soph_fixture(b, lambda, eps);
    expect_trace(t, dv, AgentKind::SophisticatedPresentBiased, {"s"}, OutcomeKind::NeverStarted, 0, 0);
    expect_trace(t, dv, AgentKind::DoublySophisticated, {"s", "v", "t"}, OutcomeKind::Reached, b + eps,
                 b * b - lambda * eps - b - eps);
    return t;
}

struct Criterion {
    int number;
    std::string title;
    std::function<Tally()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "gym fixture traces", criterion_gym},
        {2, "deadline fixture traces", criterion_deadline},
        {3, "sing-abandons fixture", criterion_sing_abandons},
        {4, "planner equivalence on 1000 random integer instances", criterion_planners},
        {5,
         "reduction equivalence (exhaustive for n<=3, x<=15, T<=40; 300 random per n=4..10; 200 random at n=12) "
         "and gadgets",
         criterion_reduction},
        {6, "payoff and reward bounds on fixtures and 1000 random instances", criterion_bounds},
        {7, "fan and singly-exp families", criterion_families},
        {8, "model collapse on 500 random instances each", criterion_collapse},
        {9, "tightness fixtures at b=2 lambda=1/2 eps=1/100", criterion_tightness},
    };
    bool all = true;
    for (const auto& c : criteria) {
        Tally tally;
        try {
            tally = c.run();
        } catch (const std::exception& e) {
            tally.expect(false, std::string("exception: ") + e.what());
        }
        const bool ok = tally.failed == 0;
        all = all && ok;
        std::cout << (ok ? "PASS" : "FAIL") << ' ' << c.number << ": " << c.title << " (" << tally.checks
                  << " checks";
        if (!ok) std::cout << ", " << tally.failed << " failed";
        std::cout << ")\n";
        for (const auto& note : tally.notes) std::cout << "    " << note << '\n';
    }
    return all ? 0 : 1;
}
