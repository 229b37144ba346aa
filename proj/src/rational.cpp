#include "fockarc/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace fockarc {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

Rational parse_decimal(std::string_view text) {
  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    std::string_view exp_text = text.substr(e + 1);
    bool negative = false;
    if (!exp_text.empty() && (exp_text[0] == '+' || exp_text[0] == '-')) {
      negative = exp_text[0] == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6)
      throw std::invalid_argument("bad exponent in '" + std::string(text) + "'");
    exponent = std::stol(std::string(exp_text));
    if (negative) exponent = -exponent;
  }
  std::string digits;
  long scale = 0;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    std::string_view whole = mantissa.substr(0, dot);
    std::string_view frac = mantissa.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty()))
      throw std::invalid_argument("bad number '" + std::string(text) + "'");
    digits = std::string(whole) + std::string(frac);
    scale = static_cast<long>(frac.size());
  } else {
    if (!all_digits(mantissa))
      throw std::invalid_argument("bad number '" + std::string(text) + "'");
    digits = std::string(mantissa);
  }
  mpz_class numerator(digits, 10);
  long power = exponent - scale;
  mpz_class ten_power;
  mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(power)));
  Rational result = power >= 0 ? Rational(numerator * ten_power) : Rational(numerator, ten_power);
  result.canonicalize();
  return result;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) throw std::invalid_argument("empty number");
  Rational result;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash));
    Rational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    result = num / den;
  } else {
    result = parse_decimal(text);
  }
  return negative ? Rational(-result) : result;
}

std::optional<Rational> exact_sqrt(const Rational& value) {
  if (sgn(value) < 0) return std::nullopt;
  const mpz_class& num = value.get_num();
  const mpz_class& den = value.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  Rational root(rn, rd);
  root.canonicalize();
  return root;
}

Rational pow(const Rational& base, unsigned long exponent) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), exponent);
  Rational result(num, den);
  result.canonicalize();
  return result;
}

std::string to_fraction_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double to_double(const Rational& value) { return value.get_d(); }

std::optional<std::string> to_decimal_string(const Rational& value) {
  mpz_class den = value.get_den();
  unsigned long twos = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), mpz_class(2).get_mpz_t());
  unsigned long fives = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), mpz_class(5).get_mpz_t());
  if (den != 1) return std::nullopt;
  unsigned long places = std::max(twos, fives);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
  mpz_class scaled = value.get_num() * (scale / value.get_den());
  bool negative = sgn(scaled) < 0;
  std::string digits = mpz_class(abs(scaled)).get_str();
  if (places > 0) {
    if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
    digits.insert(digits.size() - places, ".");
  }
  return negative ? "-" + digits : digits;
}

double sqrt_to_double(const Rational& value) {
  if (sgn(value) <= 0) return 0.0;
  // mpq_get_d would overflow for huge values; go through exponents instead.
  long num_exp = 0;
  long den_exp = 0;
  double num = mpz_get_d_2exp(&num_exp, value.get_num().get_mpz_t());
  double den = mpz_get_d_2exp(&den_exp, value.get_den().get_mpz_t());
  long exp2 = num_exp - den_exp;
  double mantissa = num / den;
  if (exp2 % 2 != 0) {
    mantissa *= 2.0;
    exp2 -= 1;
  }
  return std::ldexp(std::sqrt(mantissa), static_cast<int>(exp2 / 2));
}

}  // namespace fockarc
