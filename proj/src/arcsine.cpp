#include "fockarc/arcsine.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fockarc {

namespace {

using HighFloat = boost::multiprecision::cpp_bin_float_50;

constexpr double kSeriesLimit = 15.0;  // largest sqrt2/|c| summed directly
constexpr double kInternalSeriesTol = 1e-30;
const double kSqrt2 = std::sqrt(2.0);

void require_nonzero(double c) {
  if (c == 0.0 || !std::isfinite(c)) throw std::invalid_argument("discrete arcsine parameter c must be finite and nonzero");
}

// sum_l (-1)^l y^{n+2l} / (l! (n+l)!) with y = 1/(sqrt2 c), n >= 0.
HighFloat series_coefficient(std::int64_t n, double c, double tol) {
  const HighFloat y = HighFloat(1) / (boost::multiprecision::sqrt(HighFloat(2)) * HighFloat(c));
  const HighFloat y2 = y * y;
  const HighFloat half_x = boost::multiprecision::abs(y);
  HighFloat term = 1;
  for (std::int64_t i = 1; i <= n; ++i) term *= y / i;
  HighFloat sum = term;
  for (std::int64_t l = 0;; ++l) {
    term *= -y2 / HighFloat((l + 1) * (n + l + 1));
    sum += term;
    if (l + 1 > half_x && boost::multiprecision::abs(term) <= tol * boost::multiprecision::abs(sum)) break;
    if (term == 0) break;
  }
  return sum;
}

// J_0..J_{n_max}(x) by downward recurrence J_{n-1} = (2n/x) J_n - J_{n+1},
// normalized with J_0^2 + 2 sum J_n^2 = 1 and signed by J_0 + 2 sum J_{2k} = 1.
std::vector<long double> backward_table(double x, std::int64_t n_max, double tol) {
  const auto start = static_cast<std::int64_t>(
      std::ceil(std::max<double>(static_cast<double>(n_max), x) + 40.0 + 10.0 * std::log10(1.0 / tol)));
  std::vector<long double> j(static_cast<std::size_t>(start + 2), 0.0L);
  j[start + 1] = 0.0L;
  j[start] = 1e-300L;
  const long double lx = x;
  for (std::int64_t n = start; n >= 1; --n) {
    j[n - 1] = (2.0L * n / lx) * j[n] - j[n + 1];
    if (std::fabs(j[n - 1]) > 1e300L) {
      for (std::int64_t i = n - 1; i <= start; ++i) j[i] *= 1e-300L;
    }
  }
  long double squares = j[0] * j[0];
  long double even_sum = j[0];
  for (std::int64_t n = 1; n <= start; ++n) {
    squares += 2.0L * j[n] * j[n];
    if (n % 2 == 0) even_sum += 2.0L * j[n];
  }
  long double scale = 1.0L / std::sqrt(squares);
  if (even_sum < 0) scale = -scale;
  j.resize(static_cast<std::size_t>(n_max + 1));
  for (auto& v : j) v *= scale;
  return j;
}

// log of the bound (x/2)^n / n! on |a_n|.
double log_coefficient_bound(std::int64_t n, double x) {
  return static_cast<double>(n) * std::log(x / 2.0) - std::lgamma(static_cast<double>(n) + 1.0);
}

// Certified bound on sum_{|n| > n_trunc} |c n|^m a_n^2.
double tail_bound(double c, double x, std::int64_t n_trunc, int m) {
  const double first = static_cast<double>(n_trunc + 1);
  const double ratio = std::pow((first + 1.0) / first, m) * std::pow((x / 2.0) / (first + 1.0), 2);
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  double log_term = 2.0 * log_coefficient_bound(n_trunc + 1, x);
  if (m > 0) log_term += m * std::log(std::fabs(c) * first);
  return 2.0 * std::exp(log_term) / (1.0 - ratio);
}

}  // namespace

Rational arcsine_moment(int m) {
  if (m < 0) throw std::invalid_argument("moment order must be nonnegative");
  if (m % 2 == 1) return 0;
  mpz_class binom;
  mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(m / 2));
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 2, static_cast<unsigned long>(m / 2));
  Rational result(binom, power);
  result.canonicalize();
  return result;
}

double fourier_coefficient_series(std::int64_t n, double c, double tol) {
  require_nonzero(c);
  if (!(tol > 0.0)) throw std::invalid_argument("series tolerance must be positive");
  const std::int64_t k = n < 0 ? -n : n;
  HighFloat value = series_coefficient(k, c, tol);
  if (n < 0 && k % 2 == 1) value = -value;
  return static_cast<double>(value);
}

double fourier_coefficient(std::int64_t n, double c, double tol) {
  require_nonzero(c);
  if (!(tol > 0.0)) throw std::invalid_argument("series tolerance must be positive");
  const double x = kSqrt2 / std::fabs(c);
  if (x <= kSeriesLimit) return fourier_coefficient_series(n, c, tol);
  const std::int64_t k = n < 0 ? -n : n;
  long double value = backward_table(x, k, tol)[static_cast<std::size_t>(k)];
  // a_k(c) = J_k(x) for c > 0; a_k(-c) = (-1)^k a_k(c); a_{-k} = (-1)^k a_k.
  bool flip = (k % 2 == 1) && ((c < 0) != (n < 0));
  return static_cast<double>(flip ? -value : value);
}

double weight_formula(std::int64_t n, double c) {
  require_nonzero(c);
  if (n < 0) n = -n;
  const HighFloat u = HighFloat(1) / (HighFloat(2) * HighFloat(c) * HighFloat(c));
  HighFloat term = 1;
  for (std::int64_t i = 1; i <= n; ++i) term /= i;
  HighFloat sum = term;
  const HighFloat half_x = boost::multiprecision::sqrt(u);
  for (std::int64_t l = 0;; ++l) {
    term *= -u / HighFloat((l + 1) * (n + l + 1));
    sum += term;
    if (l + 1 > half_x && boost::multiprecision::abs(term) <= kInternalSeriesTol * boost::multiprecision::abs(sum)) break;
    if (term == 0) break;
  }
  return static_cast<double>(boost::multiprecision::pow(u, n) * sum * sum);
}

DiscreteArcsineLaw DiscreteArcsineLaw::build(double c, double tol, std::int64_t min_n_trunc, kernels::Execution exec) {
  require_nonzero(c);
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  DiscreteArcsineLaw law;
  law.c_ = c;
  law.x_ = kSqrt2 / std::fabs(c);
  law.tol_ = tol;
  auto n = static_cast<std::int64_t>(std::ceil(law.x_ + 20.0 + 10.0 * std::log10(1.0 / tol)));
  n = std::max(n, min_n_trunc);
  while (tail_bound(c, law.x_, n, 0) > tol) n += 10;
  law.n_trunc_ = n;
  law.tail_bound_ = tail_bound(c, law.x_, n, 0);

  const double abs_c = std::fabs(c);
  if (law.x_ <= kSeriesLimit) {
    law.half_ = kernels::map_indexed(
        static_cast<std::size_t>(n + 1),
        [&](std::size_t i) {
          HighFloat a = series_coefficient(static_cast<std::int64_t>(i), abs_c, kInternalSeriesTol);
          return static_cast<double>(a * a);
        },
        exec);
  } else {
    auto table = backward_table(law.x_, n, std::min(tol, 1e-16));
    law.half_.reserve(table.size());
    for (long double v : table) law.half_.push_back(static_cast<double>(v * v));
  }
  return law;
}

double DiscreteArcsineLaw::weight(std::int64_t n) const {
  if (n < 0) n = -n;
  return n > n_trunc_ ? 0.0 : half_[static_cast<std::size_t>(n)];
}

double DiscreteArcsineLaw::total_mass() const {
  long double sum = 0.0L;
  for (std::size_t n = half_.size(); n-- > 1;) sum += 2.0L * half_[n];
  return static_cast<double>(sum + half_[0]);
}

double DiscreteArcsineLaw::moment_tail_bound(int m) const { return tail_bound(c_, x_, n_trunc_, m); }

DiscreteArcsineLaw discrete_arcsine(double c, double tol) { return DiscreteArcsineLaw::build(c, tol); }

DiscreteMoment discrete_moment(const DiscreteArcsineLaw& law, int m, double moment_tol) {
  if (m < 0) throw std::invalid_argument("moment order must be nonnegative");
  DiscreteMoment out;
  out.truncation_bound = m == 0 ? law.tail_mass_bound() : law.moment_tail_bound(m);
  if (m % 2 == 1) {
    // Weights at cn and -cn are stored once, so odd moments cancel exactly.
    out.value = 0.0;
  } else if (m == 0) {
    out.value = law.total_mass();
  } else {
    const auto& w = law.half_weights();
    long double sum = 0.0L;
    for (std::size_t n = w.size(); n-- > 1;) {
      long double point = static_cast<long double>(law.c()) * static_cast<long double>(n);
      sum += 2.0L * std::pow(point, m) * w[n];
    }
    out.value = static_cast<double>(sum);
  }
  if (!std::isfinite(out.value) || !std::isfinite(out.truncation_bound) ||
      !(out.truncation_bound <= moment_tol * std::max(1.0, std::fabs(out.value))))
    throw TruncationError("weight table too short for moment of order " + std::to_string(m) +
                          "; rebuild the law with a larger truncation");
  return out;
}

DiscreteArcsineLaw discrete_arcsine_for_moments(double c, int m_max, double moment_tol) {
  require_nonzero(c);
  std::int64_t n_min = 0;
  for (;;) {
    DiscreteArcsineLaw law = DiscreteArcsineLaw::build(c, 1e-14, n_min);
    bool ok = true;
    for (int m = 0; m <= m_max && ok; m += 2) ok = law.moment_tail_bound(m) <= moment_tol * 1e-3;
    if (ok) return law;
    n_min = law.n_trunc() + 50;
  }
}

CZeroTable c_to_zero_check(const std::vector<double>& c_list, int m_max) {
  for (std::size_t i = 0; i < c_list.size(); ++i) {
    if (!(c_list[i] > 0.0)) throw std::invalid_argument("c values must be positive");
    if (i > 0 && !(c_list[i] < c_list[i - 1])) throw std::invalid_argument("c values must be strictly decreasing");
  }
  if (m_max < 0) throw std::invalid_argument("m_max must be nonnegative");
  CZeroTable table;
  std::vector<std::vector<CZeroRow>> by_c;
  for (double c : c_list) {
    DiscreteArcsineLaw law = discrete_arcsine_for_moments(c, m_max);
    std::vector<CZeroRow> rows;
    for (int m = 1; m <= m_max; ++m) {
      DiscreteMoment dm = discrete_moment(law, m);
      CZeroRow row;
      row.c = c;
      row.m = m;
      row.discrete = dm.value;
      row.arcsine = to_double(arcsine_moment(m));
      row.error = std::fabs(dm.value - row.arcsine);
      row.truncation_bound = dm.truncation_bound;
      rows.push_back(row);
    }
    by_c.push_back(std::move(rows));
  }
  for (std::size_t i = 1; i < by_c.size(); ++i)
    for (std::size_t j = 0; j < by_c[i].size(); ++j) {
      const CZeroRow& prev = by_c[i - 1][j];
      const CZeroRow& cur = by_c[i][j];
      if (cur.m % 2 != 0) continue;
      // Rounding in the weight sums is ~1e-15 relative to the moment.
      double slack = prev.truncation_bound + cur.truncation_bound + 1e-14 * std::max(1.0, prev.discrete);
      if (cur.error > prev.error + slack) table.monotone = false;
    }
  for (auto& rows : by_c)
    for (auto& row : rows) table.rows.push_back(row);
  return table;
}

std::vector<std::vector<long double>> carleman_coefficients(double c, int m_max) {
  if (m_max < 0) throw std::invalid_argument("m_max must be nonnegative");
  const long double inv_sqrt2 = 1.0L / std::sqrt(2.0L);
  const long double cl = c;
  std::vector<std::vector<long double>> b;
  b.push_back({1.0L});
  for (int m = 0; m < m_max; ++m) {
    const auto& cur = b.back();
    std::vector<long double> next(static_cast<std::size_t>(2 * (m + 1) + 1), 0.0L);
    // cur[i] holds index i - m; next[i] holds index i - (m+1).
    for (int i = 0; i <= 2 * m; ++i) {
      const long double v = cur[static_cast<std::size_t>(i)];
      if (v == 0.0L) continue;
      const int n = i - m;
      next[static_cast<std::size_t>(i)] += v * inv_sqrt2;      // to n-1
      next[static_cast<std::size_t>(i + 2)] += v * inv_sqrt2;  // to n+1
      next[static_cast<std::size_t>(i + 1)] += cl * n * v;     // diagonal c n
    }
    b.push_back(std::move(next));
  }
  return b;
}

CarlemanReport carleman_bound_check(double c, int m_max, double rel_tol) {
  require_nonzero(c);
  if (m_max < 1) throw std::invalid_argument("m_max must be at least 1");
  const double abs_c = std::fabs(c);
  const double log10_bound = 2.0 * m_max * std::log10(std::sqrt(2.0) + 2.0 * abs_c * m_max);
  if (log10_bound > 300.0)
    throw std::overflow_error("moment bound (sqrt2 + 2|c|m)^(2m) leaves double range; reduce m_max");

  const auto b = carleman_coefficients(c, 2 * m_max);
  DiscreteArcsineLaw law = discrete_arcsine_for_moments(c, 2 * m_max, rel_tol * 1e-2);
  CarlemanReport report;
  report.c = c;
  long double carleman = 0.0L;
  for (int m = 1; m <= m_max; ++m) {
    CarlemanRow row;
    row.m = m;
    long double abs_sum = 0.0L;
    for (long double v : b[static_cast<std::size_t>(m)]) abs_sum += std::fabs(v);
    row.abs_coefficient_sum = static_cast<double>(abs_sum);
    row.abs_sum_bound = std::pow(std::sqrt(2.0) + abs_c * m, m);
    const auto& even = b[static_cast<std::size_t>(2 * m)];
    const long double b0 = even[static_cast<std::size_t>(2 * m)];
    row.even_moment = static_cast<double>(b0);
    row.even_moment_bound = std::pow(std::sqrt(2.0) + 2.0 * abs_c * m, 2 * m);
    row.discrete = discrete_moment(law, 2 * m, rel_tol * 1e-2).value;
    row.relative_gap = std::fabs(row.even_moment - row.discrete) / std::max(std::fabs(row.discrete), 1e-300);
    row.ok = row.abs_coefficient_sum <= row.abs_sum_bound && row.even_moment <= row.even_moment_bound &&
             row.relative_gap <= rel_tol;
    report.ok = report.ok && row.ok;
    if (b0 > 0) carleman += std::pow(b0, -1.0L / (2 * m));
    report.rows.push_back(row);
  }
  report.partial_carleman_sum = static_cast<double>(carleman);
  return report;
}

}  // namespace fockarc
