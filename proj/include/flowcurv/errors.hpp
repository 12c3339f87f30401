#ifndef FLOWCURV_ERRORS_HPP
#define FLOWCURV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace flowcurv {

// Violated precondition or operand contract (mismatched variable
// contexts, unknown variable, bad argument).
struct contract_error : std::runtime_error {
    explicit contract_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Lexical or grammatical error in a text input. Positions are
// 1-based; col == 0 means "whole line".
struct parse_error : std::runtime_error {
    int line;
    int col;
    parse_error(const std::string& msg, int line_, int col_ = 0)
        : std::runtime_error(msg + " (line " + std::to_string(line_) +
                             (col_ > 0 ? ", col " + std::to_string(col_) : "") + ")"),
          line(line_), col(col_) {}
};

// Mathematical failure: division by zero polynomial, degenerate fast
// block, non-finite state during integration, size guard tripped.
struct math_error : std::runtime_error {
    explicit math_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace flowcurv

#endif
