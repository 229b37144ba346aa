#pragma once

#include "fockarc/kernels.hpp"
#include "fockarc/rational.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fockarc {

/// m-th moment of dx/(pi sqrt(2 - x^2)) on (-sqrt2, sqrt2): 0 for odd m,
/// C(m, m/2) / 2^(m/2) for even m.
Rational arcsine_moment(int m);

/// Fourier coefficient a_n(c) of exp(i sqrt2 sin t / c), from the alternating
/// power series (extended precision) when |sqrt2/c| <= 15, otherwise by
/// backward recurrence. Negative n use a_{-n} = (-1)^n a_n. Throws
/// std::invalid_argument for c == 0.
double fourier_coefficient(std::int64_t n, double c, double tol = 1e-14);

/// The same coefficient, always from the power series in 50-digit arithmetic.
double fourier_coefficient_series(std::int64_t n, double c, double tol = 1e-14);

/// Weight of cn from the closed weight formula
/// (1/(2^n c^{2n})) (sum_l (-1)^l / (sqrt2 c)^{2l} / ((n+l)! l!))^2, n >= 0.
double weight_formula(std::int64_t n, double c);

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Discrete arcsine law: weights w_n = a_n(c)^2 at the points cn, |n| <= n_trunc.
class DiscreteArcsineLaw {
 public:
  /// n_trunc is the smallest n >= x + 20 + 10 log10(1/tol) (x = sqrt2/|c|),
  /// raised until the certified tail mass is <= tol. `min_n_trunc` forces a
  /// wider table.
  static DiscreteArcsineLaw build(double c, double tol = 1e-14, std::int64_t min_n_trunc = 0,
                                  kernels::Execution exec = kernels::Execution::Serial);

  double c() const { return c_; }
  double x() const { return x_; }
  std::int64_t n_trunc() const { return n_trunc_; }
  double tail_mass_bound() const { return tail_bound_; }
  double series_tol() const { return tol_; }

  /// Weight at the point c*n; zero beyond the table.
  double weight(std::int64_t n) const;
  /// Weights for n = 0..n_trunc; the table is symmetric.
  const std::vector<double>& half_weights() const { return half_; }
  double total_mass() const;

  /// Certified bound on sum_{|n| > n_trunc} |cn|^m w_n.
  double moment_tail_bound(int m) const;

 private:
  double c_ = 0.0;
  double x_ = 0.0;
  double tol_ = 0.0;
  std::int64_t n_trunc_ = 0;
  double tail_bound_ = 0.0;
  std::vector<double> half_;
};

DiscreteArcsineLaw discrete_arcsine(double c, double tol = 1e-14);

struct DiscreteMoment {
  double value = 0.0;
  double truncation_bound = 0.0;
};

/// sum_n (cn)^m w_n. Throws TruncationError when the tail bound exceeds
/// `moment_tol` * max(1, |value|).
DiscreteMoment discrete_moment(const DiscreteArcsineLaw& law, int m, double moment_tol = 1e-10);

/// Builds a law wide enough that discrete_moment(law, m) passes for all m <= m_max.
DiscreteArcsineLaw discrete_arcsine_for_moments(double c, int m_max, double moment_tol = 1e-10);

struct CZeroRow {
  double c = 0.0;
  int m = 0;
  double discrete = 0.0;
  double arcsine = 0.0;
  double error = 0.0;
  double truncation_bound = 0.0;
};

struct CZeroTable {
  std::vector<CZeroRow> rows;
  /// For each even m, errors do not increase down the c list (within the
  /// reported truncation bounds).
  bool monotone = true;
};

/// Throws std::invalid_argument unless c_list is positive and strictly decreasing.
CZeroTable c_to_zero_check(const std::vector<double>& c_list, int m_max);

struct CarlemanRow {
  int m = 0;
  double abs_coefficient_sum = 0.0;  // sum_n |b_n^(m)|
  double abs_sum_bound = 0.0;        // (sqrt2 + |c| m)^m
  double even_moment = 0.0;          // b_0^(2m)
  double even_moment_bound = 0.0;    // (sqrt2 + 2|c| m)^(2m)
  double discrete = 0.0;             // discrete_moment(mu_c, 2m)
  double relative_gap = 0.0;
  bool ok = true;
};

struct CarlemanReport {
  double c = 0.0;
  std::vector<CarlemanRow> rows;  // m = 1..m_max
  double partial_carleman_sum = 0.0;
  bool ok = true;
};

/// Coefficient arrays b^(m) of (e^{-it}/sqrt2 + e^{it}/sqrt2 + (c/i) d/dt)^m 1,
/// index n in [-m, m] stored at n + m. Long double recursion.
std::vector<std::vector<long double>> carleman_coefficients(double c, int m_max);

/// Runs the recursion to order 2*m_max and checks both Carleman bounds and the
/// match b_0^(2m) = discrete_moment within `rel_tol`. Throws std::overflow_error
/// when the bounds would leave long double range.
CarlemanReport carleman_bound_check(double c, int m_max, double rel_tol = 1e-9);

}  // namespace fockarc
