#include "biasplan/analysis.hpp"

#include "biasplan/doubly_soph.hpp"
#include "biasplan/graph_io.hpp"
#include "biasplan/trace_io.hpp"

#include <algorithm>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

namespace biasplan {

bool check_holds(const BoundCheck& check) { return check.observed && *check.observed <= check.bound; }

bool GapReport::all_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return check_holds(c); });
}

namespace {

BoundCheck make_check(std::string name, Rational bound, std::optional<Rational> observed) {
    BoundCheck check{std::move(name), std::move(bound), std::move(observed), false};
    check.holds = check_holds(check);
    return check;
}

Rational co_of(const Instance& instance) { return optimal_cost(instance.graph).value(); }

Rational slack_bound(const Instance& instance) { return (instance.params.b - Rational(1)) * co_of(instance); }

}  // namespace

BoundCheck gap_doubly_soph_vs_optimal(const Instance& instance) {
    const Rational gap = simulate(instance, AgentKind::Optimal).payoff -
                         simulate(instance, AgentKind::DoublySophisticated).payoff;
    return make_check("optimal-minus-doubly-soph", slack_bound(instance), gap);
}

std::vector<BoundCheck> gap_soph_kinds(const Instance& instance) {
    const Rational doubly = simulate(instance, AgentKind::DoublySophisticated).payoff;
    const Rational soph = simulate(instance, AgentKind::SophisticatedPresentBiased).payoff;
    const Rational singly = simulate(instance, AgentKind::SinglySophisticated).payoff;
    const Rational bound = slack_bound(instance);
    return {make_check("abs-doubly-soph-minus-soph", bound, (doubly - soph).abs()),
            make_check("singly-minus-doubly-soph", bound, singly - doubly)};
}

BoundCheck min_reward_check(const Instance& instance, long denominator_bound) {
    const Rational cap = instance.params.b * co_of(instance);
    std::optional<Rational> observed;
    if (starts(instance.graph, cap, instance.params)) {
        observed = min_reward(instance.graph, instance.params.b, instance.params.lambda, denominator_bound);
    }
    return make_check("min-reward", cap, observed);
}

BoundCheck reward_ratio_check(const Instance& instance) {
    Instance at_cap = instance;
    at_cap.reward = instance.params.b * co_of(instance);
    const auto trace = simulate(at_cap, AgentKind::DoublySophisticated);
    std::optional<Rational> observed;
    if (trace.outcome.kind == OutcomeKind::Reached) observed = trace.total_cost;
    return make_check("cost-at-reward-b-co", at_cap.reward, observed);
}

GapReport gap_report(const Instance& instance, long denominator_bound) {
    GapReport report;
    report.label = instance.label;
    report.optimal_cost = co_of(instance);
    for (AgentKind kind : kAllAgentKinds) report.payoffs[kind] = simulate(instance, kind).payoff;
    report.checks.push_back(gap_doubly_soph_vs_optimal(instance));
    for (auto& c : gap_soph_kinds(instance)) report.checks.push_back(std::move(c));
    report.checks.push_back(min_reward_check(instance, denominator_bound));
    report.checks.push_back(reward_ratio_check(instance));
    return report;
}

std::string format_gap_report(const GapReport& report) {
    std::ostringstream out;
    out << "instance " << (report.label.empty() ? "-" : report.label) << "  C_o " << report.optimal_cost << "\n\n";
    std::size_t kw = 4;
    for (const auto& [kind, _] : report.payoffs) kw = std::max(kw, agent_kind_name(kind).size());
    out << std::left << std::setw(static_cast<int>(kw)) << "kind" << "  payoff\n";
    for (const auto& [kind, payoff] : report.payoffs) {
        out << std::left << std::setw(static_cast<int>(kw)) << agent_kind_name(kind) << "  " << payoff << '\n';
    }
    out << '\n';
    std::vector<std::array<std::string, 4>> rows{{"bound", "limit", "observed", "holds"}};
    for (const auto& c : report.checks) {
        rows.push_back({c.name, c.bound.str(), c.observed ? c.observed->str() : "none", c.holds ? "yes" : "NO"});
    }
    std::array<std::size_t, 3> width{};
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < 3; ++i) width[i] = std::max(width[i], row[i].size());
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < 3; ++i) out << std::left << std::setw(static_cast<int>(width[i])) << row[i] << "  ";
        out << row[3] << '\n';
    }
    return out.str();
}

std::string gap_report_record(const GapReport& report) {
    std::ostringstream out;
    out << "gap_report " << (report.label.empty() ? "-" : report.label) << '\n';
    out << "optimal_cost " << report.optimal_cost << '\n';
    for (const auto& [kind, payoff] : report.payoffs) out << "payoff " << agent_kind_name(kind) << ' ' << payoff << '\n';
    for (const auto& c : report.checks) {
        out << "bound " << c.name << " limit=" << c.bound << " observed=" << (c.observed ? c.observed->str() : "none")
            << " holds=" << (c.holds ? "true" : "false") << '\n';
    }
    return out.str();
}

Rational singly_gap_bound(long k, const Rational& lambda, const Rational& reward) {
    if (k < 0) throw std::invalid_argument("singly_gap_bound needs k >= 0");
    if (lambda.sign() <= 0) throw std::invalid_argument("singly_gap_bound needs lambda > 0");
    return ((Rational(1) + lambda).pow(k) - Rational(1)) / lambda * reward + reward;
}

Rational fan_cost_closed_form(int n, const Rational& b, const Rational& lambda, const Rational& y0) {
    if (lambda.sign() <= 0) throw std::invalid_argument("fan_cost_closed_form needs lambda > 0");
    if (n < 0) throw std::invalid_argument("fan_cost_closed_form needs n >= 0");
    const Rational growth = b * (b + lambda) / (b * b + lambda);
    return y0 / lambda * ((b + lambda) * growth.pow(n) - b);
}

std::optional<std::vector<std::size_t>> subset_sum_oracle(const SubsetSumInstance& ss) {
    const std::size_t n = ss.xs.size();
    if (n > 24) throw std::invalid_argument("subset_sum_oracle supports at most 24 items");
    if (ss.target == 0) return std::vector<std::size_t>{};
    if (ss.target < 0) return std::nullopt;
    // Fewest elements first; within a size, combinations come out in
    // lexicographic order of their index lists.
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            long sum = 0;
            for (std::size_t i : idx) sum += ss.xs[i];
            if (sum == ss.target) return idx;
            std::size_t pos = k;
            while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
            if (pos == 0) break;
            ++idx[pos - 1];
            for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
        }
    }
    return std::nullopt;
}

bool same_behavior(const TraversalTrace& a, const TraversalTrace& b) {
    return a.steps == b.steps && a.outcome == b.outcome && a.total_cost == b.total_cost && a.payoff == b.payoff;
}

bool same_outcome(const TraversalTrace& a, const TraversalTrace& b) {
    return a.path() == b.path() && a.outcome == b.outcome && a.total_cost == b.total_cost && a.payoff == b.payoff;
}

// ---------------------------------------------------------------------------
// Suites

Instance sweep_instance(std::uint64_t seed, std::size_t trial, std::optional<Rational> b,
                        std::optional<Rational> lambda) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + trial);
    static const Rational kDensities[] = {Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(1)};
    RandomOptions options;
    options.n = static_cast<int>(std::uniform_int_distribution<int>(2, 10)(rng));
    options.max_cost = 12;
    options.density = kDensities[std::uniform_int_distribution<int>(0, 3)(rng)];
    options.seed = rng();
    options.b = std::move(b);
    options.lambda = std::move(lambda);
    Instance instance = random_instance(options);
    instance.label = "sweep-" + std::to_string(seed) + "-" + std::to_string(trial);
    return instance;
}

namespace {

class Recorder {
public:
    explicit Recorder(std::string suite) { report_.suite = std::move(suite); }

    bool expect(bool ok, const std::string& check, const std::string& message, const Instance* instance = nullptr) {
        ++report_.checks;
        if (!ok) report_.failures.push_back({check, message, instance ? serialize_instance(*instance) : ""});
        return ok;
    }

    // Runs body and records any exception it throws as a failure.
    template <class Body>
    void guarded(const std::string& check, const Instance* instance, Body&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            expect(false, check, std::string("exception: ") + e.what(), instance);
        }
    }

    VerifyReport take() && { return std::move(report_); }

private:
    VerifyReport report_;
};

std::vector<std::string> path_ids(const TraversalTrace& trace, const TaskGraph& graph) {
    std::vector<std::string> ids;
    for (NodeIndex v : trace.path()) ids.push_back(graph.node_id(v));
    return ids;
}

std::string describe(const TraversalTrace& trace, const TaskGraph& graph) {
    std::string path;
    for (const auto& id : path_ids(trace, graph)) path += (path.empty() ? "" : ">") + id;
    return std::string(agent_kind_name(trace.kind)) + " path " + path + ", " + outcome_name(trace.outcome, graph) +
           ", cost " + trace.total_cost.str() + ", payoff " + trace.payoff.str();
}

struct Expected {
    AgentKind kind;
    std::vector<std::string> path;
    OutcomeKind outcome;
    Rational total_cost;
    Rational payoff;
};

void expect_trace(Recorder& rec, const std::string& check, const Instance& instance, const Expected& want) {
    const auto trace = simulate(instance, want.kind);
    const bool ok = path_ids(trace, instance.graph) == want.path && trace.outcome.kind == want.outcome &&
                    trace.total_cost == want.total_cost && trace.payoff == want.payoff;
    rec.expect(ok, check, "got " + describe(trace, instance.graph), &instance);
}

using Path = std::vector<std::string>;

void fixture_traces(Recorder& rec) {
    const Instance gym = gym_fixture();
    expect_trace(rec, "gym optimal", gym, {AgentKind::Optimal, {"s", "v", "t"}, OutcomeKind::Reached, 13, 6});
    expect_trace(rec, "gym doubly-naive", gym,
                 {AgentKind::DoublyNaive, {"s", "v"}, OutcomeKind::AbandonedAt, 1, -1});
    expect_trace(rec, "gym naive-present-biased", gym,
                 {AgentKind::NaivePresentBiased, {"s", "v"}, OutcomeKind::AbandonedAt, 1, -1});
    expect_trace(rec, "gym doubly-sophisticated", gym,
                 {AgentKind::DoublySophisticated, {"s", "w", "t"}, OutcomeKind::Reached, 14, 5});
    expect_trace(rec, "gym sophisticated-present-biased", gym,
                 {AgentKind::SophisticatedPresentBiased, {"s"}, OutcomeKind::NeverStarted, 0, 0});
    expect_trace(rec, "gym singly-sophisticated", gym,
                 {AgentKind::SinglySophisticated, {"s"}, OutcomeKind::NeverStarted, 0, 0});
    Instance low = gym;
    low.reward = Rational(10);
    expect_trace(rec, "gym optimal R=10", low, {AgentKind::Optimal, {"s"}, OutcomeKind::NeverStarted, 0, 0});

    const Instance dl = deadline_fixture();
    expect_trace(rec, "deadline sophisticated-present-biased", dl,
                 {AgentKind::SophisticatedPresentBiased,
                  {"v0_0", "v1_0", "v2_1", "v3_2", "v4_3"},
                  OutcomeKind::Reached,
                  12,
                  Rational(11, 2)});
    expect_trace(rec, "deadline doubly-naive", dl,
                 {AgentKind::DoublyNaive,
                  {"v0_0", "v1_0", "v2_1", "v3_1", "v4_3"},
                  OutcomeKind::Reached,
                  14,
                  Rational(7, 2)});
    expect_trace(rec, "deadline naive-present-biased", dl,
                 {AgentKind::NaivePresentBiased, {"v0_0", "v1_0", "v2_1", "v3_1"}, OutcomeKind::AbandonedAt, 4, -4});
    expect_trace(rec, "deadline doubly-sophisticated", dl,
                 {AgentKind::DoublySophisticated, {"v0_0"}, OutcomeKind::NeverStarted, 0, 0});
    const auto singly = simulate(dl, AgentKind::SinglySophisticated);
    rec.expect(singly.outcome.kind == OutcomeKind::Reached && singly.total_cost == Rational(14) &&
                   count_switches(singly).switches == 1,
               "deadline singly-sophisticated",
               "got " + describe(singly, dl.graph) + ", switches " + std::to_string(count_switches(singly).switches),
               &dl);

    const Instance sa = sing_abandons_fixture();
    expect_trace(rec, "sing-abandons singly-sophisticated", sa,
                 {AgentKind::SinglySophisticated, {"s", "u"}, OutcomeKind::AbandonedAt, 2, -2});
    expect_trace(rec, "sing-abandons sophisticated-present-biased", sa,
                 {AgentKind::SophisticatedPresentBiased, {"s", "u", "v", "t"}, OutcomeKind::Reached, 9, 2});
    expect_trace(rec, "sing-abandons optimal", sa,
                 {AgentKind::Optimal, {"s", "u", "v", "t"}, OutcomeKind::Reached, 9, 2});

    const Rational b(2), lambda(1, 2), eps(1, 100);
    const Instance sb = sing_better_fixture(b, lambda, eps);
    expect_trace(rec, "sing-better doubly-sophisticated", sb,
                 {AgentKind::DoublySophisticated, {"s", "v1", "t"}, OutcomeKind::Reached, b + eps,
                  sb.reward - b - eps});
    const Rational lower = Rational(1) + (b + Rational(1)) * eps;
    expect_trace(rec, "sing-better sophisticated-present-biased", sb,
                 {AgentKind::SophisticatedPresentBiased, {"s", "v2", "t"}, OutcomeKind::Reached, lower,
                  sb.reward - lower});
    const auto sb_singly = simulate(sb, AgentKind::SinglySophisticated);
    const auto sb_soph = simulate(sb, AgentKind::SophisticatedPresentBiased);
    rec.expect(sb_singly.steps.front().decision == sb_soph.steps.front().decision,
               "sing-better singly-sophisticated", "got " + describe(sb_singly, sb.graph), &sb);

    const Instance dv = doubly_vs_soph_fixture(b, lambda, eps);
    const Rational dv_payoff = b * b - lambda * eps - b - eps;
    expect_trace(rec, "doubly-vs-soph sophisticated-present-biased", dv,
                 {AgentKind::SophisticatedPresentBiased, {"s"}, OutcomeKind::NeverStarted, 0, 0});
    expect_trace(rec, "doubly-vs-soph doubly-sophisticated", dv,
                 {AgentKind::DoublySophisticated, {"s", "v", "t"}, OutcomeKind::Reached, b + eps, dv_payoff});
    expect_trace(rec, "doubly-vs-soph optimal", dv,
                 {AgentKind::Optimal, {"s", "v", "t"}, OutcomeKind::Reached, b + eps, dv.reward - b - eps});
}

void family_checks(Recorder& rec) {
    const std::array<std::array<Rational, 3>, 4> points{{{Rational(2), Rational(1, 2), Rational(1)},
                                                         {Rational(3, 2), Rational(1, 4), Rational(2)},
                                                         {Rational(3), Rational(1), Rational(1, 2)},
                                                         {Rational(5, 2), Rational(3, 2), Rational(3)}}};
    for (const auto& [b, lambda, y0] : points) {
        for (int n = 1; n <= 20; ++n) {
            const Instance fan = fan_instance(n, b, lambda, y0);
            const auto trace = simulate(fan, AgentKind::DoublyNaive);
            const Rational closed = fan_cost_closed_form(n, b, lambda, y0);
            rec.expect(trace.outcome.kind == OutcomeKind::Reached && trace.total_cost == closed &&
                           trace.path().size() == static_cast<std::size_t>(n) + 2,
                       "fan doubly-naive closed form",
                       "expected cost " + closed.str() + ", got " + describe(trace, fan.graph), &fan);
        }
        const Instance fan = fan_instance(3, b, lambda, y0);
        expect_trace(rec, "fan naive-present-biased", fan,
                     {AgentKind::NaivePresentBiased, {"s", "v1"}, OutcomeKind::AbandonedAt, fan.graph.edge(1).cost,
                      -fan.graph.edge(1).cost});
    }
    const Instance fan20 = fan_instance(20, Rational(2), Rational(1, 2), Rational(1));
    const auto fan20_trace = simulate(fan20, AgentKind::DoublyNaive);
    rec.expect(fan20_trace.total_cost > Rational(10) * fan20.reward, "fan n=20 exceeds 10R",
               "cost " + fan20_trace.total_cost.str(), &fan20);

    const Rational b(3), lambda(1, 2), reward(1), eps(1, 100);
    const Rational alpha = singly_exp_alpha(b, lambda);
    for (int n = 1; n <= 12; ++n) {
        const Instance inst = singly_exponential_instance(n, b, lambda, reward, eps);
        const auto trace = simulate(inst, AgentKind::SinglySophisticated);
        Path want{"s"};
        for (int i = 1; i <= n; ++i) want.push_back("v" + std::to_string(i));
        const Rational accumulated = ((Rational(1) + alpha * lambda).pow(n) - Rational(1)) / lambda * reward;
        const auto switches = count_switches(trace);
        rec.expect(path_ids(trace, inst.graph) == want && trace.outcome.kind == OutcomeKind::AbandonedAt &&
                       trace.total_cost == accumulated && switches.switches == static_cast<std::size_t>(n),
                   "singly-exp singly-sophisticated",
                   "n=" + std::to_string(n) + ": got " + describe(trace, inst.graph) + ", switches " +
                       std::to_string(switches.switches),
                   &inst);
        const auto opt = simulate(inst, AgentKind::Optimal);
        rec.expect(opt.payoff <= reward * (Rational(1) - alpha - Rational(1) / b) &&
                       path_ids(opt, inst.graph) == Path{"s", "v1", "u1", "t1", "t"},
                   "singly-exp optimal", "got " + describe(opt, inst.graph), &inst);
        rec.expect(opt.payoff - trace.payoff <= singly_gap_bound(static_cast<long>(switches.switches), lambda, reward),
                   "singly-exp gap bound", "gap " + (opt.payoff - trace.payoff).str(), &inst);
    }
}

std::vector<Instance> all_fixtures() {
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

void bound_checks(Recorder& rec, const Instance& instance, long denominator_bound) {
    rec.guarded("bounds", &instance, [&] {
        const GapReport report = gap_report(instance, denominator_bound);
        for (const auto& c : report.checks) {
            rec.expect(check_holds(c), c.name,
                       (instance.label.empty() ? "" : instance.label + ": ") + "observed " +
                           (c.observed ? c.observed->str() : "none") + " > limit " + c.bound.str(),
                       &instance);
        }
    });
}

void equivalence_checks(Recorder& rec, const Instance& instance) {
    const auto dp = dp_integer(instance);
    const auto rec_states = recursive_states(instance);
    const auto brute = brute_force(instance);
    rec.expect(dp.trace == rec_states.trace && dp.started == rec_states.started, "dp-integer vs recursive-states",
               "dp " + describe(dp.trace, instance.graph) + " / recursive " +
                   describe(rec_states.trace, instance.graph),
               &instance);
    rec.expect(dp.policy.entries() == rec_states.policy.entries(), "dp-integer vs recursive-states policy",
               "policies differ on reachable states", &instance);
    rec.expect(brute.trace == rec_states.trace && brute.started == rec_states.started, "brute-force vs recursive-states",
               "brute " + describe(brute.trace, instance.graph), &instance);
    const auto problems = check_policy(instance.graph, rec_states.policy);
    rec.expect(problems.empty(), "policy invariants", problems.empty() ? "" : problems.front(), &instance);
    rec.expect(same_behavior(simulate(instance, AgentKind::NaivePresentSophSunk),
                             simulate(instance, AgentKind::DoublyNaive)),
               "naive-present-soph-sunk vs doubly-naive", "traces differ", &instance);
}

void collapse_checks(Recorder& rec, const Instance& zero_lambda, const Instance& unit_bias) {
    const auto sim = [](const Instance& inst, AgentKind k) { return simulate(inst, k); };
    rec.expect(same_behavior(sim(zero_lambda, AgentKind::DoublyNaive), sim(zero_lambda, AgentKind::NaivePresentBiased)),
               "lambda=0 doubly-naive vs naive-present-biased", "traces differ", &zero_lambda);
    const auto soph = sim(zero_lambda, AgentKind::SophisticatedPresentBiased);
    rec.expect(same_behavior(sim(zero_lambda, AgentKind::SinglySophisticated), soph),
               "lambda=0 singly-sophisticated vs sophisticated-present-biased", "traces differ", &zero_lambda);
    rec.expect(same_behavior(sim(zero_lambda, AgentKind::DoublySophisticated), soph),
               "lambda=0 doubly-sophisticated vs sophisticated-present-biased", "traces differ", &zero_lambda);
    const auto opt = sim(unit_bias, AgentKind::Optimal);
    for (AgentKind kind : kAllAgentKinds) {
        const auto t = sim(unit_bias, kind);
        rec.expect(same_outcome(t, opt), "b=1 " + std::string(agent_kind_name(kind)) + " vs optimal",
                   "got " + describe(t, unit_bias.graph) + ", optimal " + describe(opt, unit_bias.graph), &unit_bias);
    }
}

std::vector<SubsetSumInstance> small_subset_corpus(long max_x, long max_t, std::size_t max_n) {
    std::vector<SubsetSumInstance> corpus;
    std::vector<long> xs;
    // Non-decreasing item lists of length 1..max_n.
    auto extend = [&](auto&& self, long from) -> void {
        if (!xs.empty()) {
            for (long t = 1; t <= max_t; ++t) corpus.push_back({xs, t});
        }
        if (xs.size() == max_n) return;
        for (long x = from; x <= max_x; ++x) {
            xs.push_back(x);
            self(self, x);
            xs.pop_back();
        }
    };
    extend(extend, 1);
    return corpus;
}

void reduction_check(Recorder& rec, const SubsetSumInstance& ss, const Rational& lambda) {
    const Instance inst = reduction_instance(ss, lambda, reduction_default_eps(lambda));
    const auto witness = subset_sum_oracle(ss);
    const auto result = recursive_states(inst);
    std::string items;
    for (long x : ss.xs) items += (items.empty() ? "" : ",") + std::to_string(x);
    const std::string label = "xs=" + items + " T=" + std::to_string(ss.target) + " lambda=" + lambda.str();
    if (!rec.expect(result.started == witness.has_value(), "reduction started iff solvable",
                    label + ": started " + (result.started ? "true" : "false"), &inst)) {
        return;
    }
    if (!result.started) return;
    const NodeIndex last = *inst.graph.find_node("v" + std::to_string(ss.xs.size() + 1));
    std::optional<Rational> sunk_at_last;
    for (const auto& step : result.trace.steps) {
        if (step.node == last) sunk_at_last = step.sunk_cost;
    }
    rec.expect(sunk_at_last == Rational(ss.target), "reduction sunk cost at v_{n+1}",
               label + ": sunk " + (sunk_at_last ? sunk_at_last->str() : "never reached"), &inst);
}

bool gadget_ok(long x, const Rational& b, std::string& why) {
    const auto g = gadget_sequence(x, b);
    const Rational first = Rational(1) / (Rational(2) * b);
    if (g.size() < 3 || g[0] != first || g[1] != first) {
        why = "bad prefix";
        return false;
    }
    Rational sum(0);
    for (const auto& c : g) sum += c;
    if (sum != Rational(x)) {
        why = "sum " + sum.str();
        return false;
    }
    for (std::size_t i = 2; i + 1 < g.size(); ++i) {
        if (g[i] != g[i - 1] * Rational(2)) {
            why = "entry " + std::to_string(i) + " is not doubled";
            return false;
        }
    }
    if (g.back().sign() <= 0 || g.back() > g[g.size() - 2] * Rational(2)) {
        why = "bad last entry " + g.back().str();
        return false;
    }
    if (g.size() > gadget_length_bound(x)) {
        why = "length " + std::to_string(g.size()) + " exceeds bound";
        return false;
    }
    return true;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"fixtures", "equivalence", "bounds", "reduction", "all"};
    return names;
}

VerifyReport verify_fixtures(const VerifyOptions& options) {
    Recorder rec("fixtures");
    rec.guarded("fixture traces", nullptr, [&] { fixture_traces(rec); });
    rec.guarded("exponential families", nullptr, [&] { family_checks(rec); });
    for (const auto& inst : all_fixtures()) {
        rec.expect(validate(inst.graph).empty(), "fixture validates", inst.label, &inst);
        rec.expect(same_behavior(simulate(inst, AgentKind::NaivePresentSophSunk), simulate(inst, AgentKind::DoublyNaive)),
                   "naive-present-soph-sunk vs doubly-naive", inst.label, &inst);
        bound_checks(rec, inst, options.denominator_bound);
    }
    return std::move(rec).take();
}

VerifyReport verify_equivalence(const VerifyOptions& options) {
    Recorder rec("equivalence");
    for (std::size_t i = 0; i < options.trials; ++i) {
        const Instance inst = sweep_instance(options.seed, i);
        rec.guarded("planner equivalence", &inst, [&] { equivalence_checks(rec, inst); });
        const Instance zero = sweep_instance(options.seed, i, std::nullopt, Rational(0));
        const Instance unit = sweep_instance(options.seed, i, Rational(1), std::nullopt);
        rec.guarded("model collapse", &zero, [&] { collapse_checks(rec, zero, unit); });
    }
    return std::move(rec).take();
}

VerifyReport verify_bounds(const VerifyOptions& options) {
    Recorder rec("bounds");
    for (const auto& inst : all_fixtures()) bound_checks(rec, inst, options.denominator_bound);
    for (std::size_t i = 0; i < options.trials; ++i) {
        const Instance inst = sweep_instance(options.seed, i);
        bound_checks(rec, inst, options.denominator_bound);
        if (inst.params.lambda.sign() > 0) {
            const auto singly = simulate(inst, AgentKind::SinglySophisticated);
            const Rational gap = simulate(inst, AgentKind::Optimal).payoff - singly.payoff;
            const auto k = static_cast<long>(count_switches(singly).switches);
            rec.expect(gap <= singly_gap_bound(k, inst.params.lambda, inst.reward), "optimal-minus-singly",
                       "gap " + gap.str() + " with " + std::to_string(k) + " switches", &inst);
        }
    }
    return std::move(rec).take();
}

VerifyReport verify_reduction(const VerifyOptions& options) {
    Recorder rec("reduction");
    const GadgetSequence sample = gadget_sequence(4, Rational(5, 2));
    const GadgetSequence want{Rational(1, 5), Rational(1, 5), Rational(2, 5),
                              Rational(4, 5), Rational(8, 5), Rational(4, 5)};
    rec.expect(sample == want, "gadget x=4 b=5/2", "unexpected sequence");
    for (const Rational& b : {Rational(5, 2), Rational(11, 4)}) {
        for (long x = 1; x <= 1000; ++x) {
            std::string why;
            if (!rec.expect(gadget_ok(x, b, why), "gadget invariants", "x=" + std::to_string(x) + ": " + why)) break;
        }
    }
    const Rational lambdas[] = {Rational(1, 2), Rational(3, 4)};
    std::size_t k = 0;
    for (const auto& ss : small_subset_corpus(15, 40, 2)) {
        rec.guarded("reduction", nullptr, [&] { reduction_check(rec, ss, lambdas[k++ % 2]); });
    }
    std::mt19937_64 rng(options.seed);
    for (std::size_t i = 0; i < options.trials; ++i) {
        SubsetSumInstance ss;
        const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 10)(rng);
        for (std::size_t j = 0; j < n; ++j) ss.xs.push_back(std::uniform_int_distribution<long>(1, 15)(rng));
        ss.target = std::uniform_int_distribution<long>(1, 40)(rng);
        rec.guarded("reduction", nullptr, [&] { reduction_check(rec, ss, lambdas[i % 2]); });
    }
    return std::move(rec).take();
}

std::vector<VerifyReport> run_suite(const std::string& name, const VerifyOptions& options) {
    if (name == "fixtures") return {verify_fixtures(options)};
    if (name == "equivalence") return {verify_equivalence(options)};
    if (name == "bounds") return {verify_bounds(options)};
    if (name == "reduction") return {verify_reduction(options)};
    if (name == "all") {
        return {verify_fixtures(options), verify_equivalence(options), verify_bounds(options),
                verify_reduction(options)};
    }
    throw std::invalid_argument("unknown suite '" + name + "'");
}

std::string format_verify_report(const VerifyReport& report) {
    std::ostringstream out;
    out << "suite " << report.suite << ": " << report.checks << " checks, " << report.failures.size() << " failed\n";
    for (const auto& f : report.failures) {
        out << "FAIL " << f.check << ": " << f.message << '\n';
        if (!f.replay.empty()) {
            out << "--- replay instance\n" << f.replay << "---\n";
        }
    }
    return out.str();
}

}  // namespace biasplan
