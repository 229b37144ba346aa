#pragma once

#include "fockarc/rational.hpp"
#include "fockarc/seqexpr.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fockarc {

class NotExactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Index past the end of a tabulated sequence. Tabulated data is never extrapolated.
class SequenceRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class CatalogError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

class SequenceSource {
 public:
  virtual ~SequenceSource() = default;
  virtual double omega(std::int64_t n) const = 0;
  virtual double alpha(std::int64_t n) const = 0;
  virtual Rational omega_exact(std::int64_t n) const = 0;
  virtual Rational alpha_exact(std::int64_t n) const = 0;
  virtual bool supports_exact() const = 0;
  virtual std::optional<std::int64_t> length() const { return std::nullopt; }
  virtual std::string description() const = 0;
};

}  // namespace detail

/// One-sided Jacobi sequence. omega(n) is the off-diagonal weight between
/// levels n and n+1 (the half-index n+1/2), alpha(n) is the diagonal entry at n.
/// Instances are immutable and cheap to copy.
class JacobiSequence {
 public:
  explicit JacobiSequence(std::shared_ptr<const detail::SequenceSource> source) : source_(std::move(source)) {}

  double omega(std::int64_t n) const { return source_->omega(n); }
  double alpha(std::int64_t n) const { return source_->alpha(n); }
  Rational omega_exact(std::int64_t n) const { return source_->omega_exact(n); }
  Rational alpha_exact(std::int64_t n) const { return source_->alpha_exact(n); }

  template <class Scalar>
  Scalar omega_as(std::int64_t n) const {
    if constexpr (std::is_same_v<Scalar, Rational>)
      return omega_exact(n);
    else
      return omega(n);
  }
  template <class Scalar>
  Scalar alpha_as(std::int64_t n) const {
    if constexpr (std::is_same_v<Scalar, Rational>)
      return alpha_exact(n);
    else
      return alpha(n);
  }

  bool supports_exact() const { return source_->supports_exact(); }
  /// Number of stored (omega, alpha) pairs for tabulated sequences.
  std::optional<std::int64_t> length() const { return source_->length(); }
  std::string description() const { return source_->description(); }

 private:
  std::shared_ptr<const detail::SequenceSource> source_;
};

enum class CatalogName { Gaussian, Uniform, Exponential, QGaussian, FreeShift };

struct CatalogEntry {
  CatalogName id;
  std::string name;
  std::string omega_formula;
  std::string alpha_formula;
  std::vector<std::string> required_params;
  std::string measure;  // reference measure, empty when none is named
};

const std::vector<CatalogEntry>& catalog_entries();
std::optional<CatalogName> catalog_id(std::string_view name);

/// Throws CatalogError on an unknown name, a missing parameter, or q outside (-1, 1].
JacobiSequence catalog_sequence(std::string_view name, const ParamMap& params = {});

JacobiSequence expression_sequence(seqexpr::Expression omega, seqexpr::Expression alpha, ParamMap params);
JacobiSequence tabulated_sequence(std::vector<Rational> omega, std::vector<Rational> alpha);
JacobiSequence tabulated_sequence(std::vector<double> omega, std::vector<double> alpha);

struct Violation {
  std::int64_t index = 0;
  std::string field;  // "omega" or "alpha"
  std::string reason;
};

struct ValidationReport {
  bool ok = true;
  bool exact_capable = true;
  std::int64_t checked_through = -1;
  std::optional<Violation> first_violation;
  std::vector<Violation> violations;  // in index order, at most 100 listed
  std::vector<std::string> notes;
};

/// Checks omega(n) > 0 and alpha(n) finite for 0 <= n <= n_max. Never throws
/// for bad values; they are reported. A tabulated sequence shorter than n_max
/// is reported at its end.
ValidationReport validate(const JacobiSequence& seq, std::int64_t n_max);

class MomentRealizationError : public std::runtime_error {
 public:
  MomentRealizationError(std::int64_t depth, const std::string& message)
      : std::runtime_error(message), depth_(depth) {}
  std::int64_t depth() const { return depth_; }

 private:
  std::int64_t depth_;
};

/// Recovers omega(0..L-1), alpha(0..L-1) from M_1..M_{2L} (M_0 = 1 implied).
/// Throws MomentRealizationError at the first depth whose Hankel determinant
/// is not positive.
JacobiSequence jacobi_from_moments(std::span<const Rational> moments);

}  // namespace fockarc
