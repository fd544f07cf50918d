#pragma once

// Trace output. The record format is line oriented:
//
//   trace <kind>
//   step <node> sunk=<r> perceived=<r> decision=<edge id|abandon|finish> plan=<node>,<node>,...
//   outcome reached | outcome abandoned <node> | outcome never-started
//   total_cost <r>
//   payoff <r>
//
// Node and edge names are the ids from the instance file, so parsing needs
// the graph.

#include "biasplan/agents.hpp"

#include <string>
#include <string_view>

namespace biasplan {

std::string outcome_name(const Outcome& outcome, const TaskGraph& graph);

std::string format_trace_text(const TraversalTrace& trace, const TaskGraph& graph);
std::string format_trace_record(const TraversalTrace& trace, const TaskGraph& graph);
std::string format_trace_json(const TraversalTrace& trace, const TaskGraph& graph);

/// Throws ParseError on malformed input or names unknown to the graph.
TraversalTrace parse_trace_record(std::string_view text, const TaskGraph& graph);

/// Aligned table of kind, outcome, total cost and payoff.
std::string format_compare_table(const std::vector<TraversalTrace>& traces, const TaskGraph& graph);

}  // namespace biasplan
