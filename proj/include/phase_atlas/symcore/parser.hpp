#pragma once

#include <string>
#include <string_view>

#include "phase_atlas/symcore/rational_expr.hpp"

namespace phase_atlas {

/// Parses the expression grammar
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | base ('^' nat)?
///   base   := ident | integer | '(' expr ')'
/// Identifiers must be declared in `ctx`. `line`/`column` offset error
/// positions when the text is a fragment of a larger file.
RationalExpr parse_expression(std::string_view text, const ContextPtr& ctx,
                              std::size_t line = 1, std::size_t column = 1);

std::string to_string(const Monomial& m, const Context& ctx);
std::string to_string(const Polynomial& p);
std::string to_string(const RationalExpr& e);

} // namespace phase_atlas
