#include "fockarc/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fockarc {

namespace {

Rational int_rational(std::int64_t n) { return Rational(mpz_class(static_cast<long>(n))); }

// Sum over closed walks of length m from `start` that stay at or above `lower`.
// A walk is weighted with 1 per up step, diag(p) per level step at p, and
// gap(p-1) per down step p -> p-1, so each traversed gap contributes omega once
// per up/down pair and the total is a polynomial in the sequence entries.
template <class GapFn, class DiagFn>
Rational closed_walk_sum(std::int64_t start, int m, std::int64_t lower, GapFn&& gap, DiagFn&& diag) {
  if (m < 0) throw std::invalid_argument("moment order must be nonnegative");
  if (m == 0) return 1;
  const std::int64_t reach = m / 2;
  const std::int64_t lo = std::max(lower, start - reach);
  const std::int64_t hi = start + reach;
  const auto width = static_cast<std::size_t>(hi - lo + 1);

  std::vector<Rational> gaps(width > 0 ? width - 1 : 0);
  std::vector<Rational> diags(width);
  for (std::size_t i = 0; i + 1 < width; ++i) gaps[i] = gap(lo + static_cast<std::int64_t>(i));
  // A level step at distance d from the start needs 2d <= m-1.
  for (std::size_t i = 0; i < width; ++i) {
    const std::int64_t p = lo + static_cast<std::int64_t>(i);
    if (2 * std::llabs(p - start) <= m - 1) diags[i] = diag(p);
  }

  std::vector<Rational> cur(width), next(width);
  const auto origin = static_cast<std::size_t>(start - lo);
  cur[origin] = 1;
  for (int t = 0; t < m; ++t) {
    for (auto& v : next) v = 0;
    // After step t+1 only positions within m-t-1 of the start can still close.
    const std::int64_t remaining = m - t - 1;
    auto target_ok = [&](std::size_t i) {
      return std::llabs(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(origin)) <= remaining;
    };
    for (std::size_t i = 0; i < width; ++i) {
      if (sgn(cur[i]) == 0) continue;
      if (i + 1 < width && target_ok(i + 1)) next[i + 1] += cur[i];
      if (sgn(diags[i]) != 0 && target_ok(i)) next[i] += diags[i] * cur[i];
      if (i > 0 && target_ok(i - 1) && sgn(gaps[i - 1]) != 0) next[i - 1] += gaps[i - 1] * cur[i];
    }
    cur.swap(next);
  }
  return cur[origin];
}

// Window k +- m/2: nothing farther out can return to k within m steps.
// Diagonal entries that no closed walk can use are left at zero.
kernels::Band one_sided_band(const JacobiSequence& seq, std::int64_t k, int m, double shift, double scale) {
  kernels::Band band;
  band.first = std::max<std::int64_t>(0, k - m / 2);
  const std::int64_t last = k + m / 2;
  for (std::int64_t n = band.first; n <= last; ++n) {
    band.diag.push_back(2 * std::llabs(n - k) <= m - 1 ? (seq.alpha(n) - shift) / scale : 0.0);
    if (n < last) band.off.push_back(std::sqrt(seq.omega(n)) / scale);
  }
  return band;
}

void check_order(int m) {
  if (m < 0) throw std::invalid_argument("moment order must be nonnegative");
}

void check_level(std::int64_t k) {
  if (k < 0) throw std::invalid_argument("one-sided level must be nonnegative");
}

}  // namespace

TwoSidedJacobiSequence TwoSidedJacobiSequence::with_cutoff(std::int64_t cutoff, Entries entries) {
  return TwoSidedJacobiSequence(Condition::Cutoff, cutoff, std::move(entries));
}

TwoSidedJacobiSequence TwoSidedJacobiSequence::strictly_positive(Entries entries) {
  return TwoSidedJacobiSequence(Condition::StrictlyPositive, std::nullopt, std::move(entries));
}

double TwoSidedJacobiSequence::omega(std::int64_t j) const {
  if (cutoff_ && j < *cutoff_) return 0.0;
  return entries_.omega(j);
}

double TwoSidedJacobiSequence::alpha(std::int64_t n) const {
  if (cutoff_ && n < *cutoff_) return 0.0;
  return entries_.alpha(n);
}

Rational TwoSidedJacobiSequence::omega_exact(std::int64_t j) const {
  if (!supports_exact()) throw NotExactError("two-sided sequence has no exact representation");
  if (cutoff_ && j < *cutoff_) return 0;
  return entries_.omega_exact(j);
}

Rational TwoSidedJacobiSequence::alpha_exact(std::int64_t n) const {
  if (!supports_exact()) throw NotExactError("two-sided sequence has no exact representation");
  if (cutoff_ && n < *cutoff_) return 0;
  return entries_.alpha_exact(n);
}

TwoSidedJacobiSequence drift_chain(const Parameter& c) {
  TwoSidedJacobiSequence::Entries e;
  const double cf = c.value;
  e.omega = [](std::int64_t) { return 0.5; };
  e.alpha = [cf](std::int64_t n) { return cf * static_cast<double>(n); };
  if (c.exact) {
    Rational ce = *c.exact;
    e.omega_exact = [](std::int64_t) { return Rational(1, 2); };
    e.alpha_exact = [ce](std::int64_t n) { return Rational(ce * int_rational(n)); };
  }
  return TwoSidedJacobiSequence::strictly_positive(std::move(e));
}

TwoSidedJacobiSequence free_chain() { return drift_chain(Parameter::of(Rational(0))); }

TwoSidedJacobiSequence shifted_two_sided(const JacobiSequence& seq, std::int64_t k) {
  check_level(k);
  TwoSidedJacobiSequence::Entries e;
  e.omega = [seq, k](std::int64_t j) { return seq.omega(j + k); };
  e.alpha = [seq, k](std::int64_t n) { return seq.alpha(n + k); };
  if (seq.supports_exact()) {
    e.omega_exact = [seq, k](std::int64_t j) { return seq.omega_exact(j + k); };
    e.alpha_exact = [seq, k](std::int64_t n) { return seq.alpha_exact(n + k); };
  }
  return TwoSidedJacobiSequence::with_cutoff(-k, std::move(e));
}

TwoSidedJacobiSequence normalized_shift(const JacobiSequence& seq, std::int64_t k) {
  check_level(k);
  const double var = level_variance(seq, k);
  const double scale = std::sqrt(var);
  const double center = seq.alpha(k);
  TwoSidedJacobiSequence::Entries e;
  e.omega = [seq, k, var](std::int64_t j) { return seq.omega(j + k) / var; };
  e.alpha = [seq, k, center, scale](std::int64_t n) { return (seq.alpha(n + k) - center) / scale; };
  if (seq.supports_exact()) {
    Rational var_exact = level_variance_exact(seq, k);
    Rational center_exact = seq.alpha_exact(k);
    std::optional<Rational> scale_exact = exact_sqrt(var_exact);
    e.omega_exact = [seq, k, var_exact](std::int64_t j) { return Rational(seq.omega_exact(j + k) / var_exact); };
    e.alpha_exact = [seq, k, center_exact, scale_exact](std::int64_t n) {
      Rational delta = seq.alpha_exact(n + k) - center_exact;
      if (sgn(delta) == 0) return Rational(0);
      if (!scale_exact) throw NotExactError("normalized diagonal entry is irrational");
      return Rational(delta / *scale_exact);
    };
  }
  return TwoSidedJacobiSequence::with_cutoff(-k, std::move(e));
}

FockVectorF apply_X(const JacobiSequence& seq, const FockVectorF& v) {
  FockVectorF out;
  for (const auto& [n, coeff] : v.coefficients()) {
    if (n < 0) throw std::out_of_range("one-sided Fock vector has support at index " + std::to_string(n));
    if (n > 0) out.add(n - 1, std::sqrt(seq.omega(n - 1)) * coeff);
    out.add(n, seq.alpha(n) * coeff);
    out.add(n + 1, std::sqrt(seq.omega(n)) * coeff);
  }
  return out;
}

FockVectorF apply_X(const TwoSidedJacobiSequence& seq, const FockVectorF& v) {
  FockVectorF out;
  for (const auto& [n, coeff] : v.coefficients()) {
    out.add(n - 1, std::sqrt(seq.omega(n - 1)) * coeff);
    out.add(n, seq.alpha(n) * coeff);
    out.add(n + 1, std::sqrt(seq.omega(n)) * coeff);
  }
  return out;
}

double ExactMoment::to_double() const {
  if (!has_root) return fockarc::to_double(coefficient);
  return fockarc::to_double(coefficient) / sqrt_to_double(variance);
}

Rational moment_exact(const JacobiSequence& seq, std::int64_t k, int m) {
  check_level(k);
  check_order(m);
  return closed_walk_sum(
      k, m, 0, [&](std::int64_t j) { return seq.omega_exact(j); }, [&](std::int64_t n) { return seq.alpha_exact(n); });
}

double moment_float(const JacobiSequence& seq, std::int64_t k, int m, kernels::Execution exec) {
  check_level(k);
  check_order(m);
  if (m == 0) return 1.0;
  return kernels::band_moment(one_sided_band(seq, k, m, 0.0, 1.0), k, m, exec);
}

seqexpr::Scalar moment(const JacobiSequence& seq, std::int64_t k, int m, Mode mode) {
  if (mode == Mode::Exact) return moment_exact(seq, k, m);
  return moment_float(seq, k, m);
}

Rational level_variance_exact(const JacobiSequence& seq, std::int64_t k) {
  check_level(k);
  Rational var = seq.omega_exact(k);
  if (k > 0) var += seq.omega_exact(k - 1);
  return var;
}

double level_variance(const JacobiSequence& seq, std::int64_t k) {
  check_level(k);
  double var = seq.omega(k);
  if (k > 0) var += seq.omega(k - 1);
  return var;
}

ExactMoment normalized_moment_exact(const JacobiSequence& seq, std::int64_t k, int m) {
  check_level(k);
  check_order(m);
  const Rational center = seq.alpha_exact(k);
  Rational raw = closed_walk_sum(
      k, m, 0, [&](std::int64_t j) { return seq.omega_exact(j); },
      [&](std::int64_t n) { return Rational(seq.alpha_exact(n) - center); });
  ExactMoment result;
  result.order = m;
  result.variance = level_variance_exact(seq, k);
  result.coefficient = raw / pow(result.variance, static_cast<unsigned long>(m / 2));
  if (m % 2 == 1 && sgn(result.coefficient) != 0) {
    if (auto root = exact_sqrt(result.variance))
      result.coefficient /= *root;
    else
      result.has_root = true;
  }
  return result;
}

double normalized_moment_float(const JacobiSequence& seq, std::int64_t k, int m, kernels::Execution exec) {
  check_level(k);
  check_order(m);
  if (m == 0) return 1.0;
  const double scale = std::sqrt(level_variance(seq, k));
  return kernels::band_moment(one_sided_band(seq, k, m, seq.alpha(k), scale), k, m, exec);
}

Rational two_sided_moment_exact(const TwoSidedJacobiSequence& seq, int m) {
  check_order(m);
  const std::int64_t lower = seq.cutoff().value_or(std::numeric_limits<std::int64_t>::min() / 2);
  return closed_walk_sum(
      0, m, lower, [&](std::int64_t j) { return seq.omega_exact(j); }, [&](std::int64_t n) { return seq.alpha_exact(n); });
}

double two_sided_moment_float(const TwoSidedJacobiSequence& seq, int m) {
  check_order(m);
  if (m == 0) return 1.0;
  kernels::Band band;
  const std::int64_t reach = m / 2;
  band.first = -reach;
  for (std::int64_t n = -reach; n <= reach; ++n) {
    band.diag.push_back(2 * std::llabs(n) <= m - 1 ? seq.alpha(n) : 0.0);
    if (n < reach) band.off.push_back(std::sqrt(seq.omega(n)));
  }
  return kernels::band_moment(band, 0, m);
}

MomentSequence moment_sequence(const JacobiSequence& seq, std::int64_t k, int m_max, Mode mode, bool normalized) {
  MomentSequence out;
  out.level = k;
  out.normalized = normalized;
  out.mode = mode;
  for (int m = 1; m <= m_max; ++m) {
    if (mode == Mode::Exact) {
      ExactMoment e;
      if (normalized) {
        e = normalized_moment_exact(seq, k, m);
      } else {
        e.coefficient = moment_exact(seq, k, m);
        e.order = m;
      }
      out.values.push_back(e.to_double());
      out.exact.push_back(std::move(e));
    } else {
      out.values.push_back(normalized ? normalized_moment_float(seq, k, m) : moment_float(seq, k, m));
    }
  }
  return out;
}

std::vector<double> normalized_moments_batch(const JacobiSequence& seq, std::span<const std::int64_t> levels, int m,
                                             kernels::Execution exec) {
  return kernels::map_indexed(
      levels.size(), [&](std::size_t i) { return normalized_moment_float(seq, levels[i], m); }, exec);
}

}  // namespace fockarc
