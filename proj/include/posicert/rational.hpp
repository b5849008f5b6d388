#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace posicert {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p" or "p/q" (optional leading sign). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical "p" or "p/q" rendering; never a decimal.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Exact value of a finite double.
Rational exact_rational(double value);

}  // namespace posicert
