#include "biasplan/trace_io.hpp"

#include "biasplan/graph_io.hpp"

#include <nlohmann/json.hpp>

#include <iomanip>
#include <sstream>

namespace biasplan {

namespace {

std::string join_path(const std::vector<NodeIndex>& nodes, const TaskGraph& graph, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i > 0) out += sep;
        out += graph.node_id(nodes[i]);
    }
    return out;
}

std::string decision_name(const Decision& d, const TaskGraph& graph) {
    switch (d.type) {
        case Decision::Type::Take:
            return graph.edge(d.edge).id;
        case Decision::Type::Abandon:
            return "abandon";
        case Decision::Type::Finish:
            break;
    }
    return "finish";
}

std::vector<std::string_view> words(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

std::string outcome_name(const Outcome& outcome, const TaskGraph& graph) {
    switch (outcome.kind) {
        case OutcomeKind::Reached:
            return "reached";
        case OutcomeKind::AbandonedAt:
            return "abandoned " + graph.node_id(outcome.node);
        case OutcomeKind::NeverStarted:
            break;
    }
    return "never-started";
}

std::string format_trace_text(const TraversalTrace& trace, const TaskGraph& graph) {
    std::ostringstream out;
    out << "agent " << agent_kind_name(trace.kind) << '\n';
    for (const auto& step : trace.steps) {
        out << "  at " << graph.node_id(step.node) << "  sunk " << step.sunk_cost << "  perceived reward "
            << step.perceived_reward << "  plan " << join_path(step.planned_path, graph, " -> ") << "  => ";
        switch (step.decision.type) {
            case Decision::Type::Take: {
                const auto& e = graph.edge(step.decision.edge);
                out << "take " << e.id << " to " << graph.node_id(e.head) << " (cost " << e.cost << ")";
                break;
            }
            case Decision::Type::Abandon:
                out << "abandon";
                break;
            case Decision::Type::Finish:
                out << "finish";
                break;
        }
        out << '\n';
    }
    out << "path " << join_path(trace.path(), graph, " -> ") << '\n';
    out << "outcome " << outcome_name(trace.outcome, graph) << '\n';
    out << "total cost " << trace.total_cost << '\n';
    out << "payoff " << trace.payoff << '\n';
    return out.str();
}

std::string format_trace_record(const TraversalTrace& trace, const TaskGraph& graph) {
    std::ostringstream out;
    out << "trace " << agent_kind_name(trace.kind) << '\n';
    for (const auto& step : trace.steps) {
        out << "step " << graph.node_id(step.node) << " sunk=" << step.sunk_cost
            << " perceived=" << step.perceived_reward << " decision=" << decision_name(step.decision, graph)
            << " plan=" << join_path(step.planned_path, graph, ",") << '\n';
    }
    out << "outcome " << outcome_name(trace.outcome, graph) << '\n';
    out << "total_cost " << trace.total_cost << '\n';
    out << "payoff " << trace.payoff << '\n';
    return out.str();
}

std::string format_trace_json(const TraversalTrace& trace, const TaskGraph& graph) {
    nlohmann::json j;
    j["agent"] = std::string(agent_kind_name(trace.kind));
    j["steps"] = nlohmann::json::array();
    for (const auto& step : trace.steps) {
        nlohmann::json s;
        s["node"] = graph.node_id(step.node);
        s["sunk"] = step.sunk_cost.str();
        s["perceived_reward"] = step.perceived_reward.str();
        s["decision"] = decision_name(step.decision, graph);
        std::vector<std::string> plan;
        for (NodeIndex v : step.planned_path) plan.push_back(graph.node_id(v));
        s["plan"] = plan;
        j["steps"].push_back(std::move(s));
    }
    std::vector<std::string> path;
    for (NodeIndex v : trace.path()) path.push_back(graph.node_id(v));
    j["path"] = path;
    switch (trace.outcome.kind) {
        case OutcomeKind::Reached:
            j["outcome"] = "reached";
            break;
        case OutcomeKind::AbandonedAt:
            j["outcome"] = "abandoned";
            j["abandoned_at"] = graph.node_id(trace.outcome.node);
            break;
        case OutcomeKind::NeverStarted:
            j["outcome"] = "never-started";
            break;
    }
    j["total_cost"] = trace.total_cost.str();
    j["payoff"] = trace.payoff.str();
    return j.dump(2) + "\n";
}

TraversalTrace parse_trace_record(std::string_view text, const TaskGraph& graph) {
    TraversalTrace trace;
    bool seen_header = false, seen_outcome = false, seen_cost = false, seen_payoff = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    auto node_of = [&](std::string_view id) {
        auto idx = graph.find_node(id);
        if (!idx) throw ParseError(line_no, "unknown node '" + std::string(id) + "'");
        return *idx;
    };
    auto number = [&](std::string_view token) {
        try {
            return Rational::parse(token);
        } catch (const std::exception& e) {
            throw ParseError(line_no, e.what());
        }
    };
    auto field = [&](std::string_view token, std::string_view key) {
        if (token.substr(0, key.size()) != key || token.size() <= key.size() || token[key.size()] != '=') {
            throw ParseError(line_no, "expected '" + std::string(key) + "=...'");
        }
        return token.substr(key.size() + 1);
    };

    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto tokens = words(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (tokens.empty()) continue;
        const std::string_view key = tokens[0];
        if (key == "trace") {
            if (seen_header || tokens.size() != 2) throw ParseError(line_no, "bad 'trace' line");
            auto kind = parse_agent_kind(tokens[1]);
            if (!kind) throw ParseError(line_no, "unknown agent kind '" + std::string(tokens[1]) + "'");
            trace.kind = *kind;
            seen_header = true;
        } else if (key == "step") {
            if (!seen_header || seen_outcome || tokens.size() != 6) throw ParseError(line_no, "bad 'step' line");
            TraceStep step;
            step.node = node_of(tokens[1]);
            step.sunk_cost = number(field(tokens[2], "sunk"));
            step.perceived_reward = number(field(tokens[3], "perceived"));
            const std::string_view decision = field(tokens[4], "decision");
            if (decision == "abandon") {
                step.decision = Decision::abandon();
            } else if (decision == "finish") {
                step.decision = Decision::finish();
            } else {
                auto e = graph.find_edge(decision);
                if (!e) throw ParseError(line_no, "unknown edge '" + std::string(decision) + "'");
                if (graph.edge(*e).tail != step.node) throw ParseError(line_no, "edge does not leave this node");
                step.decision = Decision::take(*e);
            }
            std::string_view plan = field(tokens[5], "plan");
            while (!plan.empty()) {
                const std::size_t comma = plan.find(',');
                step.planned_path.push_back(node_of(plan.substr(0, comma)));
                if (comma == std::string_view::npos) break;
                plan.remove_prefix(comma + 1);
            }
            trace.steps.push_back(std::move(step));
        } else if (key == "outcome") {
            if (seen_outcome || trace.steps.empty()) throw ParseError(line_no, "bad 'outcome' line");
            if (tokens.size() == 2 && tokens[1] == "reached") {
                trace.outcome = Outcome{OutcomeKind::Reached, graph.target()};
            } else if (tokens.size() == 2 && tokens[1] == "never-started") {
                trace.outcome = Outcome{OutcomeKind::NeverStarted, graph.source()};
            } else if (tokens.size() == 3 && tokens[1] == "abandoned") {
                trace.outcome = Outcome{OutcomeKind::AbandonedAt, node_of(tokens[2])};
            } else {
                throw ParseError(line_no, "bad 'outcome' line");
            }
            seen_outcome = true;
        } else if (key == "total_cost") {
            if (seen_cost || tokens.size() != 2) throw ParseError(line_no, "bad 'total_cost' line");
            trace.total_cost = number(tokens[1]);
            seen_cost = true;
        } else if (key == "payoff") {
            if (seen_payoff || tokens.size() != 2) throw ParseError(line_no, "bad 'payoff' line");
            trace.payoff = number(tokens[1]);
            seen_payoff = true;
        } else {
            throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
        }
    }
    if (!seen_header || !seen_outcome || !seen_cost || !seen_payoff) {
        throw ParseError(0, "incomplete trace record");
    }
    return trace;
}

std::string format_compare_table(const std::vector<TraversalTrace>& traces, const TaskGraph& graph) {
    std::vector<std::array<std::string, 4>> rows{{"kind", "outcome", "total_cost", "payoff"}};
    for (const auto& t : traces) {
        rows.push_back({std::string(agent_kind_name(t.kind)), outcome_name(t.outcome, graph), t.total_cost.str(),
                        t.payoff.str()});
    }
    std::array<std::size_t, 4> width{};
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < 3; ++c) out << std::left << std::setw(static_cast<int>(width[c])) << row[c] << "  ";
        out << row[3] << '\n';
    }
    return out.str();
}

}  // namespace biasplan
