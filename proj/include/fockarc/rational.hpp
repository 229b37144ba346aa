#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace fockarc {

using Rational = mpq_class;

// Parses "7", "-3/4", "0.125", "1.5e-3". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Exact square root when both numerator and denominator are perfect squares.
std::optional<Rational> exact_sqrt(const Rational& value);

Rational pow(const Rational& base, unsigned long exponent);

// Always "p/q", including q == 1.
std::string to_fraction_string(const Rational& value);

double to_double(const Rational& value);

// Finite decimal expansion if the denominator is 2^a 5^b, otherwise nullopt.
std::optional<std::string> to_decimal_string(const Rational& value);

// sqrt(value) as a double, for values whose magnitude may exceed double range.
double sqrt_to_double(const Rational& value);

}  // namespace fockarc
