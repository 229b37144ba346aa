#pragma once

#include "fockarc/fock.hpp"
#include "fockarc/jacobi.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fockarc {

/// r(n) = w_{n+1/2}/w_{n-1/2} and d(n) = (a_n - a_{n-1})/sqrt(w_{n+1/2} + w_{n-1/2}).
struct ProbeValue {
  std::int64_t n = 0;
  double ratio = 0.0;
  double drift = 0.0;
};

/// Exact rational evaluation when the sequence supports it (so huge or tiny
/// weights do not overflow), double otherwise. Requires n >= 1.
ProbeValue probe(const JacobiSequence& seq, std::int64_t n);

/// Polynomial extrapolation in h = 1/n to h = 0 (Neville's scheme).
/// `residual` is the gap between the full-order estimate and the one that
/// drops the coarsest point; `order` is the polynomial degree used.
struct LimitEstimate {
  double value = 0.0;
  double residual = 0.0;
  int order = 0;
};

LimitEstimate extrapolate_limit(std::span<const std::int64_t> n, std::span<const double> values);

enum class RacClass { RAC1, RAC2, Neither, Undetermined };
enum class LimitKind { Arcsine, DiscreteArcsine, Unknown };

std::string to_string(RacClass c);
std::string to_string(LimitKind k);

struct RacReport {
  RacClass classification = RacClass::Undetermined;
  double c = 0.0;  // drift limit; meaningful for RAC2 (0 for RAC1)
  double tol = 1e-6;
  std::vector<std::int64_t> schedule;
  std::vector<ProbeValue> probes;
  LimitEstimate ratio_limit;
  LimitEstimate drift_limit;
  LimitKind predicted = LimitKind::Unknown;
  std::string reason;
};

std::vector<std::int64_t> default_schedule();

/// RAC1 when r -> 1 and d -> 0, RAC2(c) when r -> 1 and d -> c != 0 (|c| <= tol
/// counts as RAC1), NEITHER when r stays away from 1 at every refinement level,
/// UNDETERMINED otherwise. Throws std::invalid_argument for a bad schedule and
/// SequenceRangeError when a tabulated sequence is too short.
RacReport classify(const JacobiSequence& seq, std::span<const std::int64_t> schedule, double tol = 1e-6);
RacReport classify(const JacobiSequence& seq);

struct LimitRow {
  std::int64_t k = 0;
  int m = 0;
  double computed = 0.0;
  double predicted = 0.0;
  double abs_error = 0.0;
  std::optional<ExactMoment> computed_exact;  // exact mode only
  std::optional<Rational> predicted_exact;    // arcsine predictions
  std::optional<Rational> abs_error_exact;    // when both sides are rational
};

class NoPredictionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rows (k, m) for every level and 1 <= m <= m_max, ordered by (k, m). Exact
/// mode is used when requested and supported. Throws NoPredictionError when
/// the report carries no predicted limit.
std::vector<LimitRow> limit_table(const JacobiSequence& seq, const RacReport& report, std::span<const std::int64_t> levels,
                                  int m_max, Mode mode = Mode::Exact,
                                  kernels::Execution exec = kernels::Execution::Serial);

}  // namespace fockarc
