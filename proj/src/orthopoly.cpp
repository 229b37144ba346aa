#include "fockarc/orthopoly.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <limits>

namespace fockarc {

namespace {

using boost::multiprecision::exp;
using boost::multiprecision::sqrt;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kNodes = 30;
constexpr double kTailDecades = 40.0;

struct Coefficients {
  std::vector<HighFloat> sqrt_omega;  // sqrt(w_{n+1/2}), n = 0..n_max
  std::vector<HighFloat> alpha;       // a_n, n = 0..n_max
};

Coefficients recurrence_coefficients(const JacobiSequence& seq, int n_max) {
  Coefficients c;
  const bool exact = seq.supports_exact();
  for (int n = 0; n <= n_max; ++n) {
    if (exact) {
      c.sqrt_omega.push_back(sqrt(to_high(seq.omega_exact(n))));
      c.alpha.push_back(to_high(seq.alpha_exact(n)));
    } else {
      c.sqrt_omega.push_back(sqrt(HighFloat(seq.omega(n))));
      c.alpha.push_back(HighFloat(seq.alpha(n)));
    }
  }
  return c;
}

// Fills p[0..n_max] with P_n(x).
void poly_values(const Coefficients& c, const HighFloat& x, std::vector<HighFloat>& p) {
  const std::size_t count = p.size();
  p[0] = 1;
  if (count == 1) return;
  p[1] = (x - c.alpha[0]) / c.sqrt_omega[0];
  for (std::size_t n = 1; n + 1 < count; ++n) p[n + 1] = ((x - c.alpha[n]) * p[n] - c.sqrt_omega[n - 1] * p[n - 1]) / c.sqrt_omega[n];
}

// Error-free transformations used by the compensated double recurrence.
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

double log_density(MeasureKind kind, double x) {
  switch (kind) {
    case MeasureKind::Gaussian: return -0.5 * x * x - 0.5 * std::log(2.0 * boost::math::constants::pi<double>());
    case MeasureKind::Uniform: return std::log(0.5);
    case MeasureKind::Exponential: return -x;
  }
  return 0.0;
}

// Far edge of the integration range: past the peak of (1+|x|)^degree * density,
// where it has dropped by kTailDecades orders of magnitude.
double tail_cutoff(MeasureKind kind, int degree) {
  const double step = 0.25;
  double best = -kInf;
  double best_x = 0.0;
  for (double x = 0.0;; x += step) {
    double log_env = degree * std::log1p(x) + log_density(kind, x);
    if (log_env > best) {
      best = log_env;
      best_x = x;
    }
    if (x > best_x && log_env < best - kTailDecades * std::log(10.0)) return std::ceil(x);
  }
}

using Table = std::vector<std::vector<HighFloat>>;

Table zero_table(int n_max, int m_max) {
  return Table(static_cast<std::size_t>(n_max + 1), std::vector<HighFloat>(static_cast<std::size_t>(m_max + 1)));
}

Table integrate_panels(const MeasureSpec& measure, const Coefficients& coeffs, int n_max, int m_max, double lower,
                       double upper, int panel_count, kernels::Execution exec) {
  using Rule = boost::math::quadrature::gauss<HighFloat, kNodes>;
  const auto& abscissa = Rule::abscissa();
  const auto& weights = Rule::weights();
  const HighFloat a = lower;
  const HighFloat width = (HighFloat(upper) - a) / panel_count;

  auto panel = [&](std::size_t index) {
    Table local = zero_table(n_max, m_max);
    const HighFloat left = a + width * static_cast<long>(index);
    const HighFloat half = width / 2;
    const HighFloat mid = left + half;
    std::vector<HighFloat> p(static_cast<std::size_t>(n_max + 1));
    auto accumulate = [&](const HighFloat& x, const HighFloat& w) {
      poly_values(coeffs, x, p);
      const HighFloat base = w * half * measure.density_at(x);
      for (int n = 0; n <= n_max; ++n) {
        HighFloat term = base * p[static_cast<std::size_t>(n)] * p[static_cast<std::size_t>(n)];
        for (int m = 0; m <= m_max; ++m) {
          local[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] += term;
          term *= x;
        }
      }
    };
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      if (abscissa[i] == 0) {
        accumulate(mid, weights[i]);
      } else {
        accumulate(mid - half * abscissa[i], weights[i]);
        accumulate(mid + half * abscissa[i], weights[i]);
      }
    }
    return local;
  };

  auto partials = kernels::map_indexed(static_cast<std::size_t>(panel_count), panel, exec);
  Table total = zero_table(n_max, m_max);
  for (const auto& part : partials)
    for (int n = 0; n <= n_max; ++n)
      for (int m = 0; m <= m_max; ++m)
        total[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] +=
            part[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)];
  return total;
}

}  // namespace

HighFloat MeasureSpec::density_at(const HighFloat& x) const {
  switch (kind) {
    case MeasureKind::Gaussian: {
      static const HighFloat norm = 1 / sqrt(2 * boost::math::constants::pi<HighFloat>());
      return norm * exp(-x * x / 2);
    }
    case MeasureKind::Uniform: return (x >= -1 && x <= 1) ? HighFloat(0.5) : HighFloat(0);
    case MeasureKind::Exponential: return x >= 0 ? HighFloat(exp(-x)) : HighFloat(0);
  }
  return 0;
}

MeasureSpec measure_spec(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Gaussian: return {kind, "gaussian", "exp(-x^2/2)/sqrt(2*pi)", -kInf, kInf};
    case MeasureKind::Uniform: return {kind, "uniform", "1/2 on [-1,1]", -1.0, 1.0};
    case MeasureKind::Exponential: return {kind, "exponential", "exp(-x) on [0,inf)", 0.0, kInf};
  }
  throw std::invalid_argument("unknown measure");
}

std::optional<MeasureSpec> measure_for_catalog(std::string_view name) {
  if (name == "gaussian") return measure_spec(MeasureKind::Gaussian);
  if (name == "uniform") return measure_spec(MeasureKind::Uniform);
  if (name == "exponential") return measure_spec(MeasureKind::Exponential);
  return std::nullopt;
}

double eval_normalized_poly(const JacobiSequence& seq, int n, double x) {
  if (n < 0) throw std::invalid_argument("polynomial degree must be nonnegative");
  double prev = 0.0;
  double cur = 1.0;
  double prev_root = 0.0;  // sqrt(w_{j-1/2})
  for (int j = 0; j < n; ++j) {
    const double shift = x - seq.alpha(j);
    const double root = std::sqrt(seq.omega(j));
    const double p1 = shift * cur;
    const double e1 = std::fma(shift, cur, -p1);
    const double p2 = prev_root * prev;
    const double e2 = std::fma(prev_root, prev, -p2);
    double s = 0.0;
    double e3 = 0.0;
    two_sum(p1, -p2, s, e3);
    const double next = (s + ((e1 - e2) + e3)) / root;
    prev = cur;
    cur = next;
    prev_root = root;
  }
  return cur;
}

HighFloat eval_normalized_poly_hp(const JacobiSequence& seq, int n, const HighFloat& x) {
  if (n < 0) throw std::invalid_argument("polynomial degree must be nonnegative");
  Coefficients c = recurrence_coefficients(seq, n);
  std::vector<HighFloat> p(static_cast<std::size_t>(n + 1));
  poly_values(c, x, p);
  return p.back();
}

QuadratureTable quadrature_moment_table(const MeasureSpec& measure, const JacobiSequence& seq, int n_max, int m_max,
                                        const QuadratureOptions& options) {
  if (n_max < 0 || m_max < 0) throw std::invalid_argument("degree and order must be nonnegative");
  const Coefficients coeffs = recurrence_coefficients(seq, n_max);
  const int degree = m_max + 2 * n_max;

  double lower = measure.lower;
  double upper = measure.upper;
  double base_width = 0.5;
  switch (measure.kind) {
    case MeasureKind::Gaussian: {
      double r = tail_cutoff(measure.kind, degree);
      lower = -r;
      upper = r;
      base_width = 1.0;
      break;
    }
    case MeasureKind::Exponential:
      upper = tail_cutoff(measure.kind, degree);
      base_width = 2.0;
      break;
    case MeasureKind::Uniform: break;
  }
  int panels = std::max(1, static_cast<int>(std::ceil((upper - lower) / base_width)));

  QuadratureTable result;
  result.n_max = n_max;
  result.m_max = m_max;
  result.lower = lower;
  result.upper = upper;
  Table previous = integrate_panels(measure, coeffs, n_max, m_max, lower, upper, panels, options.exec);
  double achieved = kInf;
  for (int d = 0; d < options.max_doublings; ++d) {
    panels *= 2;
    Table refined = integrate_panels(measure, coeffs, n_max, m_max, lower, upper, panels, options.exec);
    HighFloat worst = 0;
    for (int n = 0; n <= n_max; ++n)
      for (int m = 0; m <= m_max; ++m) {
        HighFloat diff = boost::multiprecision::abs(refined[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] -
                                                    previous[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)]);
        if (diff > worst) worst = diff;
      }
    achieved = static_cast<double>(worst);
    previous = std::move(refined);
    if (achieved <= options.abs_tol) {
      result.values = std::move(previous);
      result.error_estimate = achieved;
      result.panels = panels;
      return result;
    }
  }
  throw QuadratureError(achieved, "quadrature did not converge; achieved error " + std::to_string(achieved));
}

QuadratureResult quadrature_moment(const MeasureSpec& measure, const JacobiSequence& seq, int n, int m,
                                   const QuadratureOptions& options) {
  QuadratureTable table = quadrature_moment_table(measure, seq, n, m, options);
  return {table.at(n, m), table.error_estimate, table.panels};
}

std::vector<double> rescaled_density_moments(const MeasureSpec& measure, const JacobiSequence& seq, int n, int m_max,
                                             bool centered, const QuadratureOptions& options) {
  QuadratureTable table = quadrature_moment_table(measure, seq, n, m_max, options);
  const bool exact = seq.supports_exact();
  HighFloat variance = exact ? to_high(seq.omega_exact(n)) : HighFloat(seq.omega(n));
  if (n > 0) variance += exact ? to_high(seq.omega_exact(n - 1)) : HighFloat(seq.omega(n - 1));
  const HighFloat scale = sqrt(variance);
  const HighFloat center = centered ? (exact ? to_high(seq.alpha_exact(n)) : HighFloat(seq.alpha(n))) : HighFloat(0);

  std::vector<double> out;
  for (int m = 0; m <= m_max; ++m) {
    // integral of (x - center)^m P_n^2 dmu by binomial expansion of the raw table.
    HighFloat sum = 0;
    HighFloat binom = 1;
    for (int j = m; j >= 0; --j) {
      sum += binom * boost::multiprecision::pow(-center, m - j) * table.at(n, j);
      binom = binom * j / (m - j + 1);
    }
    out.push_back(static_cast<double>(sum / boost::multiprecision::pow(scale, m)));
  }
  return out;
}

}  // namespace fockarc
