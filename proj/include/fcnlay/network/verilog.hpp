#ifndef FCNLAY_NETWORK_VERILOG_HPP
#define FCNLAY_NETWORK_VERILOG_HPP

#include "fcnlay/network/logic_network.hpp"

#include <string>
#include <string_view>

namespace fcnlay
{

/**
 * Parse failure with 1-based source position; what() carries "line:col: msg".
 */
class parse_error : public fcn_error
{
  public:
    parse_error(unsigned line, unsigned column, const std::string& message);

    [[nodiscard]] unsigned line() const noexcept { return line_; }
    [[nodiscard]] unsigned column() const noexcept { return column_; }

  private:
    unsigned line_;
    unsigned column_;
};

/**
 * Parses the structural Verilog subset: one module; input/output/wire
 * declarations (classic or ANSI header style); assign statements over
 * identifiers, ~ & | ^, parentheses, and 1'b0/1'b1. Operator precedence is
 * ~ > & > ^ > |. Anything else is rejected with a position-carrying error,
 * as are undeclared identifiers and combinational cycles.
 */
[[nodiscard]] logic_network parse_verilog(std::string_view text);

[[nodiscard]] logic_network parse_verilog_file(const std::string& path);

/**
 * Emits the network back into the same subset. Gate vertices become one
 * assign per operator; FANOUT vertices become pass-through assigns. The
 * output re-parses into a network isomorphic to the input.
 */
[[nodiscard]] std::string write_verilog(const logic_network& net);

}  // namespace fcnlay

#endif  // FCNLAY_NETWORK_VERILOG_HPP
