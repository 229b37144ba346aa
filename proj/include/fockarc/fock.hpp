#pragma once

#include "fockarc/jacobi.hpp"
#include "fockarc/kernels.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace fockarc {

/// Finitely supported element of the span of {Phi_n}. Zero coefficients are
/// never stored.
template <class Scalar>
class FockVector {
 public:
  FockVector() = default;

  static FockVector basis(std::int64_t index) {
    FockVector v;
    v.set(index, Scalar(1));
    return v;
  }

  Scalar operator[](std::int64_t index) const {
    auto it = coeffs_.find(index);
    return it == coeffs_.end() ? Scalar(0) : it->second;
  }

  void set(std::int64_t index, const Scalar& value) {
    if (value == Scalar(0))
      coeffs_.erase(index);
    else
      coeffs_[index] = value;
  }

  void add(std::int64_t index, const Scalar& value) { set(index, (*this)[index] + value); }

  bool empty() const { return coeffs_.empty(); }
  std::size_t size() const { return coeffs_.size(); }
  std::int64_t min_index() const { return coeffs_.begin()->first; }
  std::int64_t max_index() const { return coeffs_.rbegin()->first; }
  const std::map<std::int64_t, Scalar>& coefficients() const { return coeffs_; }

  friend bool operator==(const FockVector& a, const FockVector& b) { return a.coeffs_ == b.coeffs_; }

 private:
  std::map<std::int64_t, Scalar> coeffs_;
};

using FockVectorF = FockVector<double>;

/// Two-sided Jacobi sequence over all integers. omega(j) is the weight of the
/// gap j+1/2, alpha(n) the diagonal entry at n.
class TwoSidedJacobiSequence {
 public:
  enum class Condition { Cutoff, StrictlyPositive };

  struct Entries {
    std::function<double(std::int64_t)> omega;
    std::function<double(std::int64_t)> alpha;
    // Empty when the sequence has no exact representation.
    std::function<Rational(std::int64_t)> omega_exact;
    std::function<Rational(std::int64_t)> alpha_exact;
  };

  /// omega(j) = 0 for j + 1/2 < cutoff and alpha(n) = 0 for n < cutoff; the
  /// entry functions are only consulted at and above the cutoff.
  static TwoSidedJacobiSequence with_cutoff(std::int64_t cutoff, Entries entries);
  static TwoSidedJacobiSequence strictly_positive(Entries entries);

  double omega(std::int64_t j) const;
  double alpha(std::int64_t n) const;
  Rational omega_exact(std::int64_t j) const;
  Rational alpha_exact(std::int64_t n) const;

  bool supports_exact() const { return static_cast<bool>(entries_.omega_exact); }
  Condition condition() const { return condition_; }
  std::optional<std::int64_t> cutoff() const { return cutoff_; }

 private:
  TwoSidedJacobiSequence(Condition c, std::optional<std::int64_t> cutoff, Entries e)
      : condition_(c), cutoff_(cutoff), entries_(std::move(e)) {}

  Condition condition_;
  std::optional<std::int64_t> cutoff_;
  Entries entries_;
};

/// omega = 1/2 everywhere, alpha(n) = c n. With c = 0 this is the free chain
/// whose level-0 moments are those of the arcsine law.
TwoSidedJacobiSequence drift_chain(const Parameter& c);
TwoSidedJacobiSequence free_chain();

/// Re-indexes so that level k becomes index 0; cutoff at -k.
TwoSidedJacobiSequence shifted_two_sided(const JacobiSequence& seq, std::int64_t k);

/// The shifted and normalized matrix of (X - alpha_k)/sqrt(omega_{k+1/2}+omega_{k-1/2}):
/// omega(j) = omega_{j+k+1/2}/s^2, alpha(n) = (alpha_{n+k} - alpha_k)/s.
TwoSidedJacobiSequence normalized_shift(const JacobiSequence& seq, std::int64_t k);

/// (A + B + C) v. Throws std::out_of_range if v has support below 0.
FockVectorF apply_X(const JacobiSequence& seq, const FockVectorF& v);
FockVectorF apply_X(const TwoSidedJacobiSequence& seq, const FockVectorF& v);

/// An exact moment value: coefficient * variance^(-1/2) when `order` is odd
/// and the moment is normalized, otherwise just `coefficient`.
struct ExactMoment {
  Rational coefficient;
  Rational variance = 1;
  int order = 0;
  bool has_root = false;

  bool is_rational() const { return !has_root; }
  double to_double() const;
};

/// <X^m Phi_k, Phi_k>.
Rational moment_exact(const JacobiSequence& seq, std::int64_t k, int m);
double moment_float(const JacobiSequence& seq, std::int64_t k, int m,
                    kernels::Execution exec = kernels::Execution::Serial);
seqexpr::Scalar moment(const JacobiSequence& seq, std::int64_t k, int m, Mode mode);

/// Variance of X in the k-th state, omega_{k+1/2} + omega_{k-1/2} with omega_{-1/2} = 0.
Rational level_variance_exact(const JacobiSequence& seq, std::int64_t k);
double level_variance(const JacobiSequence& seq, std::int64_t k);

/// <((X - alpha_k)/s)^m Phi_k, Phi_k> with s^2 = level_variance(k).
ExactMoment normalized_moment_exact(const JacobiSequence& seq, std::int64_t k, int m);
double normalized_moment_float(const JacobiSequence& seq, std::int64_t k, int m,
                               kernels::Execution exec = kernels::Execution::Serial);

/// <X^m Phi_0, Phi_0> for a two-sided sequence; walks stay inside [-m, m].
Rational two_sided_moment_exact(const TwoSidedJacobiSequence& seq, int m);
double two_sided_moment_float(const TwoSidedJacobiSequence& seq, int m);

struct MomentSequence {
  std::int64_t level = 0;
  bool normalized = false;
  Mode mode = Mode::Float;
  std::vector<double> values;       // M_1 .. M_mmax
  std::vector<ExactMoment> exact;   // same orders, exact mode only
};

MomentSequence moment_sequence(const JacobiSequence& seq, std::int64_t k, int m_max, Mode mode, bool normalized);

/// Float normalized moments for many levels at once, fanned out across threads.
std::vector<double> normalized_moments_batch(const JacobiSequence& seq, std::span<const std::int64_t> levels, int m,
                                             kernels::Execution exec);

}  // namespace fockarc
