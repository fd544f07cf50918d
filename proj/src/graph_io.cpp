#include "biasplan/graph_io.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace biasplan {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

Rational parse_number(std::size_t line, std::string_view token) {
    try {
        return Rational::parse(token);
    } catch (const std::exception& e) {
        throw ParseError(line, e.what());
    }
}

}  // namespace

ParsedInstance parse_instance_file(std::string_view text) {
    GraphBuilder builder;
    std::optional<Rational> reward, bias, sunk;
    std::optional<std::pair<std::size_t, std::string>> source, target;
    std::string label;
    bool has_label = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto tokens = split_ws(line);
        if (tokens.empty()) {
            if (end == text.size()) break;
            continue;
        }
        const std::string_view directive = tokens[0];

        auto expect_args = [&](std::size_t lo, std::size_t hi) {
            const std::size_t got = tokens.size() - 1;
            if (got < lo || got > hi) {
                throw ParseError(line_no, "'" + std::string(directive) + "' expects " + std::to_string(lo) +
                                              (hi != lo ? "-" + std::to_string(hi) : "") + " argument(s), got " +
                                              std::to_string(got));
            }
        };
        auto set_once = [&](std::optional<Rational>& slot) {
            expect_args(1, 1);
            if (slot) throw ParseError(line_no, "duplicate '" + std::string(directive) + "' line");
            slot = parse_number(line_no, tokens[1]);
        };

        try {
            if (directive == "label") {
                if (has_label) throw ParseError(line_no, "duplicate 'label' line");
                label = std::string(trim(line.substr(line.find("label") + 5)));
                has_label = true;
            } else if (directive == "reward") {
                set_once(reward);
                if (reward->sign() < 0) throw ParseError(line_no, "negative reward " + reward->str());
            } else if (directive == "bias") {
                set_once(bias);
                if (*bias < Rational(1)) throw ParseError(line_no, "bias must be >= 1, got " + bias->str());
            } else if (directive == "sunk") {
                set_once(sunk);
                if (sunk->sign() < 0) throw ParseError(line_no, "sunk must be >= 0, got " + sunk->str());
            } else if (directive == "node") {
                expect_args(1, 1);
                builder.add_node(std::string(tokens[1]));
            } else if (directive == "source" || directive == "target") {
                expect_args(1, 1);
                auto& slot = directive == "source" ? source : target;
                if (slot) throw ParseError(line_no, "duplicate '" + std::string(directive) + "' line");
                slot = std::make_pair(line_no, std::string(tokens[1]));
            } else if (directive == "edge") {
                expect_args(3, 4);
                Rational cost = parse_number(line_no, tokens[3]);
                if (cost.sign() < 0) throw ParseError(line_no, "negative cost " + cost.str());
                builder.add_edge(tokens[1], tokens[2], std::move(cost),
                                 tokens.size() == 5 ? std::string(tokens[4]) : std::string());
            } else {
                throw ParseError(line_no, "unknown directive '" + std::string(directive) + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
        if (end == text.size()) break;
    }

    if (!source) throw ParseError(0, "missing 'source' line");
    if (!target) throw ParseError(0, "missing 'target' line");
    if (!reward) throw ParseError(0, "missing 'reward' line");
    for (const auto* slot : {&*source, &*target}) {
        if (!builder.has_node(slot->second)) throw ParseError(slot->first, "unknown node '" + slot->second + "'");
    }
    builder.set_source(source->second);
    builder.set_target(target->second);

    ParsedInstance parsed;
    parsed.instance.graph = builder.build();
    parsed.instance.reward = *reward;
    parsed.instance.params = AgentParams{bias.value_or(Rational(1)), sunk.value_or(Rational(0))};
    parsed.instance.label = label;
    parsed.has_bias = bias.has_value();
    parsed.has_sunk = sunk.has_value();

    const auto issues = validate(parsed.instance.graph);
    if (!issues.empty()) {
        std::string msg = "invalid graph:";
        for (const auto& issue : issues) msg += " " + issue.message + ";";
        throw ParseError(0, msg);
    }
    return parsed;
}

Instance parse_instance(std::string_view text) { return parse_instance_file(text).instance; }

ParsedInstance read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance_file(buf.str());
}

std::string serialize_instance(const Instance& instance) {
    const auto& g = instance.graph;
    std::ostringstream out;
    if (!instance.label.empty()) {
        if (instance.label.find_first_of("#\n") != std::string::npos) {
            throw std::invalid_argument("label may not contain '#' or newlines");
        }
        out << "label " << instance.label << '\n';
    }
    out << "reward " << instance.reward << '\n';
    out << "bias " << instance.params.b << '\n';
    out << "sunk " << instance.params.lambda << '\n';
    for (const auto& id : g.nodes()) out << "node " << id << '\n';
    out << "source " << g.node_id(g.source()) << '\n';
    out << "target " << g.node_id(g.target()) << '\n';
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
        const auto& edge = g.edge(e);
        out << "edge " << g.node_id(edge.tail) << ' ' << g.node_id(edge.head) << ' ' << edge.cost;
        if (edge.id != default_edge_id(e)) out << ' ' << edge.id;
        out << '\n';
    }
    return out.str();
}

void write_instance_file(const std::string& path, const Instance& instance) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << serialize_instance(instance);
}

}  // namespace biasplan
