#include "fockarc/rac.hpp"

#include "fockarc/arcsine.hpp"

#include <cmath>
#include <stdexcept>

namespace fockarc {

namespace {

LimitEstimate neville(std::span<const double> h, std::span<const double> values) {
  const std::size_t count = values.size();
  // table[i] holds the interpolant through points i..i+level evaluated at 0.
  std::vector<double> table(values.begin(), values.end());
  std::vector<double> without_first;
  for (std::size_t level = 1; level < count; ++level) {
    for (std::size_t i = 0; i + level < count; ++i) {
      const double hi = h[i];
      const double hj = h[i + level];
      table[i] = (hi * table[i + 1] - hj * table[i]) / (hi - hj);
    }
    if (level == count - 2) without_first.assign(table.begin(), table.begin() + 2);
  }
  LimitEstimate est;
  est.value = table[0];
  est.order = static_cast<int>(count) - 1;
  // Estimate from points 1..count-1 only.
  est.residual = count >= 2 ? std::fabs(table[0] - (count == 2 ? values[1] : without_first[1])) : 0.0;
  return est;
}

}  // namespace

ProbeValue probe(const JacobiSequence& seq, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("probe index must be at least 1");
  ProbeValue p;
  p.n = n;
  if (seq.supports_exact()) {
    try {
      const Rational upper = seq.omega_exact(n);
      const Rational lower = seq.omega_exact(n - 1);
      const Rational delta = seq.alpha_exact(n) - seq.alpha_exact(n - 1);
      p.ratio = to_double(Rational(upper / lower));
      const Rational drift_sq = delta * delta / (upper + lower);
      p.drift = sqrt_to_double(drift_sq) * sgn(delta);
      return p;
    } catch (const NotExactError&) {
      // fall through to double evaluation
    }
  }
  const double upper = seq.omega(n);
  const double lower = seq.omega(n - 1);
  p.ratio = upper / lower;
  p.drift = (seq.alpha(n) - seq.alpha(n - 1)) / std::sqrt(upper + lower);
  return p;
}

LimitEstimate extrapolate_limit(std::span<const std::int64_t> n, std::span<const double> values) {
  if (n.size() != values.size() || n.empty()) throw std::invalid_argument("extrapolate_limit: size mismatch");
  std::vector<double> h;
  for (auto v : n) h.push_back(1.0 / static_cast<double>(v));
  return neville(h, values);
}

std::string to_string(RacClass c) {
  switch (c) {
    case RacClass::RAC1: return "RAC1";
    case RacClass::RAC2: return "RAC2";
    case RacClass::Neither: return "NEITHER";
    case RacClass::Undetermined: return "UNDETERMINED";
  }
  return "?";
}

std::string to_string(LimitKind k) {
  switch (k) {
    case LimitKind::Arcsine: return "arcsine";
    case LimitKind::DiscreteArcsine: return "discrete_arcsine";
    case LimitKind::Unknown: return "unknown";
  }
  return "?";
}

std::vector<std::int64_t> default_schedule() { return {100, 1000, 10000, 100000}; }

RacReport classify(const JacobiSequence& seq) {
  auto schedule = default_schedule();
  return classify(seq, schedule, 1e-6);
}

RacReport classify(const JacobiSequence& seq, std::span<const std::int64_t> schedule, double tol) {
  if (schedule.size() < 4) throw std::invalid_argument("probe schedule needs at least 4 indices");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1) throw std::invalid_argument("probe indices must be >= 1");
    if (i > 0 && schedule[i] <= schedule[i - 1]) throw std::invalid_argument("probe schedule must be strictly increasing");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (auto len = seq.length(); len && schedule.back() >= *len)
    throw SequenceRangeError("probe schedule reaches n=" + std::to_string(schedule.back()) +
                             " but the tabulated sequence has " + std::to_string(*len) + " entries");

  RacReport report;
  report.tol = tol;
  report.schedule.assign(schedule.begin(), schedule.end());
  std::vector<double> ratios, drifts;
  for (auto n : schedule) {
    report.probes.push_back(probe(seq, n));
    ratios.push_back(report.probes.back().ratio);
    drifts.push_back(report.probes.back().drift);
  }
  const bool finite = [&] {
    for (std::size_t i = 0; i < ratios.size(); ++i)
      if (!std::isfinite(ratios[i]) || !std::isfinite(drifts[i])) return false;
    return true;
  }();
  if (!finite) {
    report.reason = "non-finite probe values";
    return report;
  }
  report.ratio_limit = extrapolate_limit(schedule, ratios);
  report.drift_limit = extrapolate_limit(schedule, drifts);

  // NEITHER: every prefix of the schedule (each refinement level) shows a ratio
  // limit separated from 1 by more than tol plus its own residual.
  bool ratio_fails_everywhere = true;
  for (std::size_t len = 2; len <= schedule.size() && ratio_fails_everywhere; ++len) {
    LimitEstimate est = extrapolate_limit(schedule.first(len), std::span<const double>(ratios).first(len));
    if (!(std::fabs(est.value - 1.0) > tol + est.residual)) ratio_fails_everywhere = false;
  }
  for (double r : ratios)
    if (!(std::fabs(r - 1.0) > tol)) ratio_fails_everywhere = false;
  if (ratio_fails_everywhere) {
    report.classification = RacClass::Neither;
    report.reason = "omega ratio converges away from 1";
    return report;
  }

  const bool ratio_ok = report.ratio_limit.residual <= tol && std::fabs(report.ratio_limit.value - 1.0) <= tol;
  const bool drift_converged = report.drift_limit.residual <= tol;
  if (!ratio_ok || !drift_converged) {
    report.reason = !ratio_ok ? "omega ratio limit not resolved within tolerance"
                              : "normalized alpha increments not resolved within tolerance";
    return report;
  }
  if (std::fabs(report.drift_limit.value) <= tol) {
    report.classification = RacClass::RAC1;
    report.c = 0.0;
    report.predicted = LimitKind::Arcsine;
  } else {
    report.classification = RacClass::RAC2;
    report.c = report.drift_limit.value;
    report.predicted = LimitKind::DiscreteArcsine;
  }
  return report;
}

std::vector<LimitRow> limit_table(const JacobiSequence& seq, const RacReport& report, std::span<const std::int64_t> levels,
                                  int m_max, Mode mode, kernels::Execution exec) {
  if (report.predicted == LimitKind::Unknown)
    throw NoPredictionError("no predicted limit for classification " + to_string(report.classification));
  if (m_max < 1 || m_max > 20) throw std::invalid_argument("m_max must be in 1..20");
  const bool exact = mode == Mode::Exact && seq.supports_exact();

  std::optional<DiscreteArcsineLaw> law;
  if (report.predicted == LimitKind::DiscreteArcsine) law = discrete_arcsine_for_moments(report.c, m_max);

  const std::size_t cols = static_cast<std::size_t>(m_max);
  return kernels::map_indexed(
      levels.size() * cols,
      [&](std::size_t idx) {
        LimitRow row;
        row.k = levels[idx / cols];
        row.m = static_cast<int>(idx % cols) + 1;
        if (law) {
          row.predicted = discrete_moment(*law, row.m).value;
        } else {
          row.predicted_exact = arcsine_moment(row.m);
          row.predicted = to_double(*row.predicted_exact);
        }
        if (exact) {
          row.computed_exact = normalized_moment_exact(seq, row.k, row.m);
          row.computed = row.computed_exact->to_double();
          if (row.predicted_exact && row.computed_exact->is_rational()) {
            row.abs_error_exact = abs(row.computed_exact->coefficient - *row.predicted_exact);
            row.abs_error = to_double(*row.abs_error_exact);
            return row;
          }
        } else {
          row.computed = normalized_moment_float(seq, row.k, row.m);
        }
        row.abs_error = std::fabs(row.computed - row.predicted);
        return row;
      },
      exec);
}

}  // namespace fockarc
