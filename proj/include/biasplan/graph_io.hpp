#pragma once

// Line-oriented instance files:
//
//   # comment
//   label <free text>          (optional)
//   reward <number>
//   bias <number>              (optional)
//   sunk <number>              (optional)
//   node <id>
//   source <id>
//   target <id>
//   edge <tail> <head> <cost> [<edge id>]
//
// Numbers are integers, p/q fractions or finite decimals, all converted
// exactly. node/edge order is canonical.

#include "biasplan/graph.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace biasplan {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message);
    /// 1-based; 0 for whole-file problems (e.g. a missing directive or a cycle).
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct ParsedInstance {
    Instance instance;
    bool has_bias = false;
    bool has_sunk = false;
};

/// Missing bias/sunk default to b = 1, lambda = 0 and are reported via the flags.
ParsedInstance parse_instance_file(std::string_view text);
Instance parse_instance(std::string_view text);
ParsedInstance read_instance_file(const std::string& path);

std::string serialize_instance(const Instance& instance);
void write_instance_file(const std::string& path, const Instance& instance);

}  // namespace biasplan
