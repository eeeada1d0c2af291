#ifndef CAUSALPROBE_PARSER_HPP
#define CAUSALPROBE_PARSER_HPP

#include <string_view>

#include "causalprobe/expr.hpp"

namespace causalprobe {

// Recursive-descent parser for the equation grammar (see expr.hpp).
// Throws ParseError (offset + expected token), UnknownFunctionError, or
// TypeError for mismatches decidable without variable domains.
Expr parse_expression(std::string_view text);

}  // namespace causalprobe

#endif
