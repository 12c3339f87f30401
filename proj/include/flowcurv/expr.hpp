#ifndef FLOWCURV_EXPR_HPP
#define FLOWCURV_EXPR_HPP

#include <string>

#include "flowcurv/poly.hpp"

namespace flowcurv {

/// Parse a polynomial expression: identifiers, integer and a/b
/// literals, + - * ^ and parentheses. Division is only allowed by a
/// nonzero integer literal. `line` seeds error positions.
Poly parse_expression(const std::string& text, const ContextPtr& ctx, int line = 1);

} // namespace flowcurv

#endif
