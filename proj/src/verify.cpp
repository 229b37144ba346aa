#include "fockarc/verify.hpp"

#include "fockarc/arcsine.hpp"
#include "fockarc/fock.hpp"
#include "fockarc/jacobi.hpp"
#include "fockarc/orthopoly.hpp"
#include "fockarc/rac.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace fockarc {

namespace {

// Each check receives a perturbation that is zero unless a fault is injected.
using Check = std::function<std::string(double bump)>;

struct NamedCheck {
  std::string name;
  Check run;
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class... Args>
[[noreturn]] void fail(Args&&... parts) {
  std::ostringstream os;
  os.precision(17);
  (os << ... << parts);
  throw Failure(os.str());
}

double rel_diff(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::max(std::fabs(a), std::fabs(b))); }

std::vector<std::pair<std::string, JacobiSequence>> verification_catalog() {
  return {
      {"gaussian", catalog_sequence("gaussian")},
      {"uniform", catalog_sequence("uniform")},
      {"exponential", catalog_sequence("exponential")},
      {"q_gaussian(q=1/2)", catalog_sequence("q_gaussian", {{"q", Parameter::of(Rational(1, 2))}})},
      {"q_gaussian(q=-1/2)", catalog_sequence("q_gaussian", {{"q", Parameter::of(Rational(-1, 2))}})},
      {"free_shift(c=3/10)", catalog_sequence("free_shift", {{"c", Parameter::of(Rational(3, 10))}})},
  };
}

std::string check_gaussian_closed_form(double bump) {
  auto seq = catalog_sequence("gaussian");
  for (long k = 0; k <= 50; ++k) {
    Rational expected = 6 * k * k + 6 * k + 3;
    Rational got = moment_exact(seq, k, 4) + Rational(bump);
    if (got != expected) fail("k=", k, ": M_4 = ", got.get_str(), ", expected ", expected.get_str());
    ExactMoment norm = normalized_moment_exact(seq, k, 4);
    Rational s2 = 2 * k + 1;
    if (norm.coefficient != expected / (s2 * s2)) fail("k=", k, ": normalized M_4 = ", norm.coefficient.get_str());
  }
  return "M_4 = 6k^2+6k+3 for k <= 50";
}

std::string check_exact_float(double bump) {
  double worst = 0.0;
  for (const auto& [name, seq] : verification_catalog()) {
    for (long k : {0L, 1L, 10L, 100L, 1000L}) {
      for (int m = 1; m <= 12; ++m) {
        double exact = to_double(moment_exact(seq, k, m));
        double flt = moment_float(seq, k, m) + bump;
        double rel = std::fabs(exact - flt) / std::max(1e-300, std::fabs(exact));
        if (exact == 0.0) rel = std::fabs(flt);
        worst = std::max(worst, rel);
        if (rel > 1e-10) fail(name, " k=", k, " m=", m, ": exact ", exact, " float ", flt);
      }
    }
  }
  std::ostringstream os;
  os << "worst relative gap " << worst;
  return os.str();
}

std::string check_serial_parallel(double bump) {
  auto seq = catalog_sequence("uniform");
  std::vector<std::int64_t> levels;
  for (std::int64_t k = 0; k < 64; ++k) levels.push_back(k * 37);
  auto serial = normalized_moments_batch(seq, levels, 10, kernels::Execution::Serial);
  auto parallel = normalized_moments_batch(seq, levels, 10, kernels::Execution::Parallel);
  parallel.front() += bump;
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (serial[i] != parallel[i]) fail("k=", levels[i], ": serial ", serial[i], " parallel ", parallel[i]);
  double big_serial = moment_float(seq, 10, 400, kernels::Execution::Serial);
  double big_parallel = moment_float(seq, 10, 400, kernels::Execution::Parallel);
  if (rel_diff(big_serial, big_parallel) > 1e-14) fail("m=400: serial ", big_serial, " parallel ", big_parallel);
  return "batched levels and long band propagation agree";
}

std::string check_round_trip(double bump) {
  constexpr int depth = 8;
  for (const auto& [name, seq] : verification_catalog()) {
    std::vector<Rational> moments;
    for (int m = 1; m <= 2 * depth; ++m) moments.push_back(moment_exact(seq, 0, m));
    moments.back() += Rational(bump);
    auto recovered = jacobi_from_moments(moments);
    for (int n = 0; n < depth; ++n)
      if (recovered.omega_exact(n) != seq.omega_exact(n) || recovered.alpha_exact(n) != seq.alpha_exact(n))
        fail(name, ": mismatch at n=", n);
  }
  return "depth 8 recovered exactly for every catalog entry";
}

std::string check_free_chain(double bump) {
  auto chain = free_chain();
  for (int m = 1; m <= 16; ++m) {
    Rational got = two_sided_moment_exact(chain, m) + Rational(bump);
    if (got != arcsine_moment(m)) fail("m=", m, ": ", got.get_str(), " vs ", arcsine_moment(m).get_str());
  }
  return "free chain moments equal arcsine moments for m <= 16";
}

std::string check_one_two_sided(double bump) {
  const Rational c(1, 2);
  auto seq = catalog_sequence("free_shift", {{"c", Parameter::of(c)}});
  auto chain = drift_chain(Parameter::of(c));
  for (int m = 1; m <= 10; ++m) {
    Rational two_sided = two_sided_moment_exact(chain, m);
    for (long k : {static_cast<long>(m), 2L * m, 25L}) {
      ExactMoment one = normalized_moment_exact(seq, k, m);
      if (one.coefficient + Rational(bump) != two_sided) fail("k=", k, " m=", m);
      if (two_sided_moment_exact(normalized_shift(seq, k), m) != two_sided) fail("normalized shift k=", k, " m=", m);
    }
  }
  return "one-sided levels k >= m match the two-sided drift chain";
}

std::string check_discrete_arcsine(double bump) {
  for (double c : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    auto law = discrete_arcsine(c, 1e-14);
    double mass = law.total_mass() + bump;
    if (std::fabs(mass - 1.0) > 1e-12) fail("c=", c, ": total mass ", mass);
    double m2 = discrete_moment(law, 2).value;
    if (std::fabs(m2 - 1.0) > 1e-10) fail("c=", c, ": M_2 = ", m2);
    double m4 = discrete_moment(law, 4).value;
    if (std::fabs(m4 - (1.5 + c * c)) > 1e-9) fail("c=", c, ": M_4 = ", m4);
    for (std::int64_t n = 0; n <= std::min<std::int64_t>(law.n_trunc(), 40); ++n) {
      double w = law.weight(n);
      if (w != law.weight(-n)) fail("c=", c, ": asymmetric weight at n=", n);
      double alt = weight_formula(n, c);
      if (w > 1e-280 && std::fabs(w - alt) > 1e-12 * w) fail("c=", c, " n=", n, ": weight ", w, " formula ", alt);
    }
  }
  return "mass, M_2, M_4 and the weight formula agree for c in {0.1, 0.5, 1, 2, 10}";
}

std::string check_carleman(double bump) {
  for (double c : {0.5, 1.0}) {
    auto report = carleman_bound_check(c, 12);
    if (!report.ok || bump != 0.0) fail("c=", c, ": bound or moment match violated");
  }
  return "Carleman bounds hold for c in {0.5, 1}, m <= 12";
}

std::string check_classification(double bump) {
  for (const auto& [name, seq] : verification_catalog()) {
    auto report = classify(seq);
    bool drift = name.rfind("free_shift", 0) == 0;
    RacClass want = drift ? RacClass::RAC2 : RacClass::RAC1;
    if (report.classification != want) fail(name, ": classified ", to_string(report.classification), " (", report.reason, ")");
    if (drift && std::fabs(report.c + bump - 0.3) > 1e-9) fail(name, ": c = ", report.c);
  }
  auto doubling = expression_sequence(seqexpr::Expression::parse("2^n"), seqexpr::Expression::parse("0"), {});
  if (classify(doubling).classification != RacClass::Neither) fail("omega = 2^n not classified NEITHER");
  return "catalog verdicts as expected; 2^n is NEITHER";
}

std::string check_quadrature(double bump) {
  QuadratureOptions opts;
  for (auto kind : {MeasureKind::Gaussian, MeasureKind::Uniform, MeasureKind::Exponential}) {
    MeasureSpec measure = measure_spec(kind);
    auto seq = catalog_sequence(measure.name);
    auto table = quadrature_moment_table(measure, seq, 4, 6, opts);
    for (int n = 0; n <= 4; ++n)
      for (int m = 0; m <= 6; ++m) {
        double quad = static_cast<double>(table.at(n, m)) + bump;
        double walk = m == 0 ? 1.0 : to_double(moment_exact(seq, n, m));
        if (std::fabs(quad - walk) > 1e-8) fail(measure.name, " n=", n, " m=", m, ": quadrature ", quad, " walk ", walk);
      }
  }
  return "quadrature of x^m P_n^2 matches walk moments for n <= 4, m <= 6";
}

std::string check_expressions(double bump) {
  for (const auto& entry : catalog_entries()) {
    for (const auto& text : {entry.omega_formula, entry.alpha_formula}) {
      auto expr = seqexpr::Expression::parse(text);
      if (!(seqexpr::Expression::parse(expr.to_string()) == expr)) fail(entry.name, ": '", text, "' does not round-trip");
    }
  }
  auto catalog = catalog_sequence("uniform");
  auto expr = expression_sequence(seqexpr::Expression::parse("(n+1)^2/((2*n+1)*(2*n+3))"), seqexpr::Expression::parse("0"), {});
  for (long n = 0; n <= 200; ++n)
    if (catalog.omega_exact(n) + Rational(bump) != expr.omega_exact(n)) fail("uniform omega mismatch at n=", n);
  return "catalog formulas round-trip and match their expressions";
}

const std::vector<NamedCheck>& checks() {
  static const std::vector<NamedCheck> all = {
      {"gaussian_closed_form", check_gaussian_closed_form},
      {"exact_float_agreement", check_exact_float},
      {"serial_parallel_agreement", check_serial_parallel},
      {"moment_round_trip", check_round_trip},
      {"free_chain_arcsine", check_free_chain},
      {"one_two_sided_agreement", check_one_two_sided},
      {"discrete_arcsine_law", check_discrete_arcsine},
      {"carleman_bound", check_carleman},
      {"catalog_classification", check_classification},
      {"quadrature_isometry", check_quadrature},
      {"expression_catalog", check_expressions},
  };
  return all;
}

}  // namespace

std::vector<std::string> verification_checks() {
  std::vector<std::string> names;
  for (const auto& c : checks()) names.push_back(c.name);
  return names;
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  const auto& all = checks();
  if (options.inject_fault &&
      std::none_of(all.begin(), all.end(), [&](const NamedCheck& c) { return c.name == *options.inject_fault; }))
    throw std::invalid_argument("no verification check named '" + *options.inject_fault + "'");
  return kernels::map_indexed(
      all.size(),
      [&](std::size_t i) {
        CheckResult result;
        result.name = all[i].name;
        const double bump = options.inject_fault == all[i].name ? 1.0 : 0.0;
        try {
          result.detail = all[i].run(bump);
          result.passed = true;
        } catch (const std::exception& e) {
          result.detail = e.what();
        }
        return result;
      },
      options.exec);
}

}  // namespace fockarc
