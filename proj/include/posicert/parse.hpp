#pragma once

#include "posicert/polynomial.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace posicert {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a polynomial over the given variable names.
///
/// Grammar (whitespace insensitive):
///   expr    := [+|-] term { (+|-) term }
///   term    := power { [*] power | / integer }
///   power   := primary [ ^ integer ]
///   primary := integer | name | ( expr )
///
/// Juxtaposition multiplies, so "2x^2 y" and "(x+1)(x-1)" are accepted.
/// Parenthesized subexpressions are expanded; the result is canonical.
Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& variables);

/// Canonical text: descending graded-lex order, explicit rational
/// coefficients, `^` powers. Round-trips through parse_polynomial.
std::string format_polynomial(const Polynomial& p, const std::vector<std::string>& variables);
/// Same, with variables named x0, x1, ...
std::string format_polynomial(const Polynomial& p);

std::string format_monomial(const Monomial& m, const std::vector<std::string>& variables);
/// Same, with variables named x0, x1, ...
std::string format_monomial(const Monomial& m);

/// Names `[a-zA-Z][a-zA-Z0-9_]*`.
bool is_identifier(std::string_view name);

/// Identifiers appearing in a polynomial text, in order of first appearance.
std::vector<std::string> identifiers_in(std::string_view text);

}  // namespace posicert
