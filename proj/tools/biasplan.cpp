// biasplan command-line front end.
//
// Exit codes: 0 success, 1 verification failure, 2 bad input.

#include "biasplan/analysis.hpp"
#include "biasplan/doubly_soph.hpp"
#include "biasplan/generators.hpp"
#include "biasplan/graph_io.hpp"
#include "biasplan/trace_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace biasplan;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;
constexpr long kDefaultDenominatorBound = 100;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rational number(const std::string& flag, const std::string& text) {
    try {
        return Rational::parse(text);
    } catch (const std::exception& e) {
        throw InputError(flag + ": " + e.what());
    }
}

std::optional<Rational> optional_number(const std::string& flag, const std::string& text) {
    if (text.empty()) return std::nullopt;
    return number(flag, text);
}

struct GraphFlags {
    std::string graph;
    std::string bias;
    std::string sunk;
    std::string reward;

    void add_to(CLI::App* app, bool with_reward = true) {
        app->add_option("--graph", graph, "Instance file")->required();
        app->add_option("--bias", bias, "Present bias b (overrides the file)");
        app->add_option("--sunk", sunk, "Sunk-cost bias lambda (overrides the file)");
        if (with_reward) app->add_option("--reward", reward, "Reward R (overrides the file)");
    }

    Instance load() const {
        ParsedInstance parsed;
        try {
            parsed = read_instance_file(graph);
        } catch (const std::exception& e) {
            throw InputError(graph + ": " + e.what());
        }
        Instance inst = std::move(parsed.instance);
        if (auto b = optional_number("--bias", bias)) {
            inst.params.b = *b;
        } else if (!parsed.has_bias) {
            throw InputError("no present bias: pass --bias or add a 'bias' line");
        }
        if (auto l = optional_number("--sunk", sunk)) {
            inst.params.lambda = *l;
        } else if (!parsed.has_sunk) {
            throw InputError("no sunk-cost bias: pass --sunk or add a 'sunk' line");
        }
        if (auto r = optional_number("--reward", reward)) inst.reward = *r;
        if (inst.reward.sign() < 0) throw InputError("reward must be >= 0");
        try {
            check_params(inst.params);
        } catch (const std::exception& e) {
            throw InputError(e.what());
        }
        return inst;
    }
};

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

std::vector<long> parse_items(const std::string& text) {
    std::vector<long> xs;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const Rational r = number("--xs", item);
        if (!r.is_integer() || r.sign() <= 0 || !r.numerator().fits_slong_p()) {
            throw InputError("--xs: items must be positive integers");
        }
        xs.push_back(r.numerator().get_si());
    }
    if (xs.empty()) throw InputError("--xs: empty list");
    return xs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planning with present bias and sunk-cost bias on task graphs"};
    app.require_subcommand(1);

    GraphFlags sim_flags;
    std::string agent, format = "text";
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate one agent kind");
    sim_flags.add_to(simulate_cmd);
    simulate_cmd->add_option("--agent", agent, "Agent kind, e.g. doubly-naive")->required();
    simulate_cmd->add_option("--format", format, "text, record or json")
        ->check(CLI::IsMember({"text", "record", "json"}));

    GraphFlags cmp_flags;
    bool with_bounds = false;
    auto* compare_cmd = app.add_subcommand("compare", "Outcome table for every agent kind");
    cmp_flags.add_to(compare_cmd);
    compare_cmd->add_flag("--bounds", with_bounds, "Also print the payoff gap bounds");

    std::string gen_name, gen_out, gen_b, gen_lambda, gen_eps, gen_reward, gen_y0, gen_density = "1/2";
    int gen_n = 0;
    long gen_max_cost = 12;
    std::uint64_t gen_seed = kDefaultSeed;
    auto* generate_cmd = app.add_subcommand("generate", "Write a generated instance");
    generate_cmd->add_option("name", gen_name, "Instance family")->required()->check(CLI::IsMember(generator_names()));
    generate_cmd->add_option("-o,--output", gen_out, "Output file (stdout when omitted)");
    generate_cmd->add_option("--n", gen_n, "Size parameter (fan, singly-exp, random)");
    generate_cmd->add_option("--bias", gen_b, "Present bias b");
    generate_cmd->add_option("--sunk", gen_lambda, "Sunk-cost bias lambda");
    generate_cmd->add_option("--eps", gen_eps, "Epsilon (sing-better, doubly-vs-soph, singly-exp)");
    generate_cmd->add_option("--reward", gen_reward, "Base reward R (singly-exp)");
    generate_cmd->add_option("--y0", gen_y0, "Direct edge cost y0 (fan)");
    generate_cmd->add_option("--max-cost", gen_max_cost, "Largest edge cost (random)");
    generate_cmd->add_option("--density", gen_density, "Edge density in [0,1] (random)");
    generate_cmd->add_option("--seed", gen_seed, "Seed (random)");

    std::string red_xs, red_lambda, red_eps, red_out;
    long red_target = 0;
    auto* reduce_cmd = app.add_subcommand("reduce", "Build the Subset Sum reduction instance");
    reduce_cmd->add_option("--xs", red_xs, "Comma-separated positive integers")->required();
    reduce_cmd->add_option("--target", red_target, "Target sum T")->required();
    reduce_cmd->add_option("--sunk", red_lambda, "Sunk-cost bias lambda in [1/2, 1)")->required();
    reduce_cmd->add_option("--eps", red_eps, "Epsilon, default 1/(4b)");
    reduce_cmd->add_option("-o,--output", red_out, "Output file; the sidecar goes to <file>.json")->required();

    GraphFlags mr_flags;
    long denom_bound = kDefaultDenominatorBound;
    bool mr_scan = false;
    auto* min_reward_cmd = app.add_subcommand("min-reward", "Smallest reward at which the doubly sophisticated agent starts");
    mr_flags.add_to(min_reward_cmd, false);
    min_reward_cmd->add_option("--denom-bound", denom_bound, "Largest denominator considered")->check(CLI::PositiveNumber);
    min_reward_cmd->add_flag("--scan", mr_scan, "Use the exhaustive candidate scan");

    std::string suite;
    VerifyOptions verify_options;
    verify_options.seed = kDefaultSeed;
    auto* verify_cmd = app.add_subcommand("verify", "Run property suites");
    verify_cmd->add_option("--suite", suite, "fixtures, equivalence, bounds, reduction or all")
        ->required()
        ->check(CLI::IsMember(suite_names()));
    verify_cmd->add_option("--trials", verify_options.trials, "Random instances per sweep");
    verify_cmd->add_option("--seed", verify_options.seed, "Seed for every sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*simulate_cmd) {
            const Instance inst = sim_flags.load();
            const auto kind = parse_agent_kind(agent);
            if (!kind) throw InputError("unknown agent kind '" + agent + "'");
            const auto trace = simulate(inst, *kind);
            if (format == "record") {
                std::cout << format_trace_record(trace, inst.graph);
            } else if (format == "json") {
                std::cout << format_trace_json(trace, inst.graph);
            } else {
                std::cout << format_trace_text(trace, inst.graph);
            }
            return 0;
        }
        if (*compare_cmd) {
            const Instance inst = cmp_flags.load();
            std::vector<TraversalTrace> traces;
            for (AgentKind kind : kAllAgentKinds) traces.push_back(simulate(inst, kind));
            std::cout << format_compare_table(traces, inst.graph);
            if (with_bounds) {
                const auto report = gap_report(inst, kDefaultDenominatorBound);
                std::cout << '\n' << format_gap_report(report);
                return report.all_hold() ? 0 : 1;
            }
            return 0;
        }
        if (*generate_cmd) {
            const Rational b = optional_number("--bias", gen_b).value_or(Rational(2));
            const Rational lambda = optional_number("--sunk", gen_lambda).value_or(Rational(1, 2));
            const Rational eps = optional_number("--eps", gen_eps).value_or(Rational(1, 100));
            Instance inst;
            try {
                if (gen_name == "gym") {
                    inst = gym_fixture();
                } else if (gen_name == "deadline" || gen_name == "deadline-full") {
                    inst = deadline_fixture(gen_name == "deadline-full");
                } else if (gen_name == "sing-abandons") {
                    inst = sing_abandons_fixture();
                } else if (gen_name == "sing-better") {
                    inst = sing_better_fixture(b, lambda, eps);
                } else if (gen_name == "doubly-vs-soph") {
                    inst = doubly_vs_soph_fixture(b, lambda, eps);
                } else if (gen_name == "fan") {
                    inst = fan_instance(gen_n > 0 ? gen_n : 5, b, lambda,
                                        optional_number("--y0", gen_y0).value_or(Rational(1)));
                } else if (gen_name == "singly-exp") {
                    inst = singly_exponential_instance(gen_n > 0 ? gen_n : 5,
                                                       optional_number("--bias", gen_b).value_or(Rational(3)), lambda,
                                                       optional_number("--reward", gen_reward).value_or(Rational(1)),
                                                       eps);
                } else {
                    RandomOptions options;
                    options.n = gen_n > 0 ? gen_n : 8;
                    options.max_cost = gen_max_cost;
                    options.density = number("--density", gen_density);
                    options.seed = gen_seed;
                    options.b = optional_number("--bias", gen_b);
                    options.lambda = optional_number("--sunk", gen_lambda);
                    inst = random_instance(options);
                }
            } catch (const std::invalid_argument& e) {
                throw InputError(e.what());
            }
            write_output(gen_out, serialize_instance(inst));
            return 0;
        }
        if (*reduce_cmd) {
            SubsetSumInstance ss{parse_items(red_xs), red_target};
            const Rational lambda = number("--sunk", red_lambda);
            const Rational eps = optional_number("--eps", red_eps).value_or(reduction_default_eps(lambda));
            Instance inst;
            try {
                inst = reduction_instance(ss, lambda, eps);
            } catch (const std::invalid_argument& e) {
                throw InputError(e.what());
            }
            write_output(red_out, serialize_instance(inst));
            write_output(red_out + ".json", reduction_sidecar_json(ss, lambda, eps));
            return 0;
        }
        if (*min_reward_cmd) {
            const Instance inst = mr_flags.load();
            if (mr_scan) {
                std::cout << min_reward_scan(inst.graph, inst.params.b, inst.params.lambda, denom_bound) << '\n';
            } else {
                const auto result = min_reward_search(inst.graph, inst.params.b, inst.params.lambda, denom_bound);
                std::cout << result.reward << '\n';
                if (result.used_fallback) std::cerr << "note: binary search boundary check failed, used scan\n";
            }
            return 0;
        }
        if (*verify_cmd) {
            bool ok = true;
            for (const auto& report : run_suite(suite, verify_options)) {
                std::cout << format_verify_report(report);
                ok = ok && report.passed();
            }
            return ok ? 0 : 1;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
