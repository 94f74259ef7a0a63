#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ucfg {

using Integer = mpz_class;
using Rational = mpq_class;

/// Accepts "p", "-p", "p/q"; the result is canonicalized.
Rational parse_rational(std::string_view text);

/// Always "p/q", also for integers ("3/1"), so reports have a single shape.
std::string to_string(const Rational& value);
std::string to_string(const Integer& value);

/// Decimal rendering truncated toward zero after `digits` fractional digits.
std::string to_decimal(const Rational& value, int digits = 40);

Integer ipow(const Integer& base, unsigned long exponent);
Rational rpow(const Rational& base, unsigned long exponent);

/// 2^-k as an exact rational.
Rational pow2_neg(unsigned long k);

}  // namespace ucfg
