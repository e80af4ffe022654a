#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sparkdet/operator.hpp"

namespace sparkdet {

/// Looks up an operator by name. Besides the fixed built-ins this accepts
///   maybe_lift_seq(<name>), maybe_lift_comb(<name>)  Maybe lifting
///   expr:<formula>                                  scalar expression
/// Throws UnknownOperator for anything else.
Operator resolve(std::string_view name);

/// Names of the fixed built-ins, in registration order.
std::vector<std::string> builtin_names();

/// Compiles an arithmetic formula over x and y into a binary Float operator.
///
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := '-' unary | atom
///   atom   := number | 'x' | 'y' | '(' expr ')'
///           | ('min' | 'max') '(' expr ',' expr ')' | 'abs' '(' expr ')'
///
/// The Unicode signs U+2212, U+00D7 and U+00F7 are accepted for '-', '*' and
/// '/'. Evaluation is plain IEEE-754 double arithmetic (x / 0 is +-inf or NaN).
Operator parse_expression(std::string_view formula);

}  // namespace sparkdet
