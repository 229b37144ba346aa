#pragma once

#include "fockarc/highfloat.hpp"
#include "fockarc/jacobi.hpp"
#include "fockarc/kernels.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fockarc {

enum class MeasureKind { Gaussian, Uniform, Exponential };

/// Reference probability measure of a catalog sequence. The uniform law is
/// normalized to mass 1 (density 1/2 on [-1, 1]).
struct MeasureSpec {
  MeasureKind kind;
  std::string name;
  std::string density;
  double lower;  // -inf / +inf for unbounded supports
  double upper;

  HighFloat density_at(const HighFloat& x) const;
};

MeasureSpec measure_spec(MeasureKind kind);
/// Measure paired with a catalog sequence name, if the catalog names one.
std::optional<MeasureSpec> measure_for_catalog(std::string_view name);

/// P_n(x) from sqrt(w_{n+1/2}) P_{n+1} = (x - a_n) P_n - sqrt(w_{n-1/2}) P_{n-1},
/// P_{-1} = 0, P_0 = 1, with error-free product/sum compensation per step.
double eval_normalized_poly(const JacobiSequence& seq, int n, double x);
HighFloat eval_normalized_poly_hp(const JacobiSequence& seq, int n, const HighFloat& x);

struct QuadratureOptions {
  double abs_tol = 1e-10;
  int max_doublings = 6;
  kernels::Execution exec = kernels::Execution::Serial;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(double achieved, const std::string& message) : std::runtime_error(message), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

/// values[n][m] = integral of x^m P_n(x)^2 dmu for n <= n_max, m <= m_max.
struct QuadratureTable {
  int n_max = 0;
  int m_max = 0;
  std::vector<std::vector<HighFloat>> values;
  double error_estimate = 0.0;
  int panels = 0;
  double lower = 0.0;  // integration range actually used
  double upper = 0.0;

  const HighFloat& at(int n, int m) const { return values[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)]; }
};

/// Gauss-Legendre (30 nodes) on equal panels, panel count doubled until two
/// successive tables agree within abs_tol. Unbounded supports are cut where the
/// integrand envelope falls below 1e-40 of its peak. Per-panel partial tables
/// are summed in panel order, so serial and parallel runs agree bitwise.
QuadratureTable quadrature_moment_table(const MeasureSpec& measure, const JacobiSequence& seq, int n_max, int m_max,
                                        const QuadratureOptions& options = {});

struct QuadratureResult {
  HighFloat value;
  double error_estimate = 0.0;
  int panels = 0;

  double to_double() const { return static_cast<double>(value); }
};

QuadratureResult quadrature_moment(const MeasureSpec& measure, const JacobiSequence& seq, int n, int m,
                                   const QuadratureOptions& options = {});

/// Moments of |P_n(s x)|^2 mu(s dx), s = sqrt(w_{n+1/2} + w_{n-1/2}), orders
/// 0..m_max. `centered` shifts by alpha_n first, i.e. integrates ((x - a_n)/s)^m.
std::vector<double> rescaled_density_moments(const MeasureSpec& measure, const JacobiSequence& seq, int n, int m_max,
                                             bool centered = false, const QuadratureOptions& options = {});

}  // namespace fockarc
