// Runs the nine acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is nonzero when any criterion fails.

#include "fockarc/arcsine.hpp"
#include "fockarc/fock.hpp"
#include "fockarc/orthopoly.hpp"
#include "fockarc/rac.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace fockarc;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

std::string str(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

JacobiSequence q_gaussian(const Rational& q) { return catalog_sequence("q_gaussian", {{"q", Parameter::of(q)}}); }
JacobiSequence free_shift(const Rational& c) { return catalog_sequence("free_shift", {{"c", Parameter::of(c)}}); }

std::vector<std::pair<std::string, JacobiSequence>> rac1_catalog() {
  return {{"gaussian", catalog_sequence("gaussian")},
          {"uniform", catalog_sequence("uniform")},
          {"exponential", catalog_sequence("exponential")},
          {"q_gaussian(-1/2)", q_gaussian(Rational(-1, 2))},
          {"q_gaussian(0)", q_gaussian(Rational(0))},
          {"q_gaussian(1/2)", q_gaussian(Rational(1, 2))},
          {"q_gaussian(1)", q_gaussian(Rational(1))}};
}

// 1. Harmonic oscillator: normalized moments approach the arcsine moments.
void criterion1(Outcome& o) {
  auto start = std::chrono::steady_clock::now();
  auto seq = catalog_sequence("gaussian");
  const std::int64_t levels[] = {10, 100, 1000};
  for (int m = 1; m <= 8; ++m) {
    Rational target = arcsine_moment(m);
    Rational prev_err = -1;
    for (std::int64_t k : levels) {
      ExactMoment v = normalized_moment_exact(seq, k, m);
      o.require(v.is_rational(), "normalized moment irrational for gaussian");
      Rational err = abs(v.coefficient - target);
      if (m % 2 == 1) o.require(err == 0, "odd moment nonzero at k=" + std::to_string(k));
      if (prev_err >= 0) o.require(err <= prev_err, "error not shrinking for m=" + std::to_string(m));
      prev_err = err;
      if (m == 4) {
        Rational kk(k);
        Rational closed = (6 * kk * kk + 6 * kk + 3) / ((2 * kk + 1) * (2 * kk + 1));
        o.require(v.coefficient == closed, "m=4 closed form at k=" + std::to_string(k));
        if (k == 1000) {
          double gap = std::fabs(v.to_double() - 1.5);
          o.require(gap <= 4e-7, "|M_4 - 1.5| at k=1000 is " + str(gap));
          o.detail << "k=1000 m=4 error " << str(gap) << "; ";
        }
      }
    }
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(seconds < 1.0, "runtime " + str(seconds) + "s");
  o.detail << "runtime " << str(seconds) << "s";
}

// 2. Classification of the catalog.
void criterion2(Outcome& o) {
  for (const auto& [name, seq] : rac1_catalog()) {
    if (name == "gaussian" || name == "q_gaussian(1)") continue;
    auto r = classify(seq);
    o.require(r.classification == RacClass::RAC1, name + " classified " + to_string(r.classification));
  }
  double worst = 0.0;
  for (const char* text : {"0.1", "-0.1", "0.5", "-0.5", "2", "-2"}) {
    Rational c = parse_rational(text);
    auto r = classify(free_shift(c));
    o.require(r.classification == RacClass::RAC2, std::string("free_shift(") + text + ") classified " + to_string(r.classification));
    double gap = std::fabs(r.c - to_double(c));
    worst = std::max(worst, gap);
    o.require(gap <= 1e-9, std::string("c estimate for ") + text);
  }
  auto doubling = expression_sequence(seqexpr::Expression::parse("2^n"), seqexpr::Expression::parse("0"), {});
  o.require(classify(doubling).classification == RacClass::Neither, "2^n not NEITHER");
  o.detail << "max |c_hat - c| " << str(worst);
}

// 3. Limit tables converge for the RAC1 catalog.
void criterion3(Outcome& o) {
  const std::vector<std::int64_t> levels{100, 1000, 10000};
  double worst_end = 0.0;
  for (const auto& [name, seq] : rac1_catalog()) {
    auto report = classify(seq);
    if (report.predicted != LimitKind::Arcsine) {
      o.require(false, name + " has no arcsine prediction");
      continue;
    }
    auto rows = limit_table(seq, report, levels, 8, Mode::Exact);
    for (int m : {4, 6, 8}) {
      std::vector<Rational> errs;
      double end = 0.0;
      for (const auto& row : rows) {
        if (row.m != m) continue;
        o.require(static_cast<bool>(row.abs_error_exact), name + ": error not exact");
        if (row.abs_error_exact) errs.push_back(*row.abs_error_exact);
        if (row.k == 10000) end = row.abs_error;
      }
      for (std::size_t i = 1; i < errs.size(); ++i)
        o.require(errs[i] <= errs[i - 1], name + ": error grows in k for m=" + std::to_string(m));
      o.require(end <= 1e-3, name + ": error at k=1e4 is " + str(end));
      worst_end = std::max(worst_end, end);
    }
  }
  o.detail << "largest error at k=1e4: " << str(worst_end);
}

// 4. The discrete arcsine law.
void criterion4(Outcome& o) {
  double worst_mass = 0.0, worst_ratio = 0.0;
  for (const char* text : {"0.1", "0.5", "1", "2", "10"}) {
    const Rational cq = parse_rational(text);
    const double c = to_double(cq);
    auto law = discrete_arcsine(c, 1e-14);
    double mass = law.total_mass();
    worst_mass = std::max(worst_mass, std::fabs(mass - 1.0));
    o.require(std::fabs(mass - 1.0) <= 1e-12, std::string("mass for c=") + text);
    for (std::int64_t n = 1; n <= law.n_trunc(); ++n)
      o.require(law.weight(n) == law.weight(-n), std::string("asymmetric weight for c=") + text);
    o.require(std::fabs(discrete_moment(law, 2).value - 1.0) <= 1e-10, std::string("M_2 for c=") + text);
    auto half = [](std::int64_t) { return Rational(1, 2); };
    auto drift = [&](std::int64_t n) -> Rational { return cq * n; };
    Rational walk4 = oracle::walk_moment(half, drift, 0, 4, -10);
    o.require(walk4 == Rational(3, 2) + cq * cq, "walk oracle M_4");
    o.require(std::fabs(discrete_moment(law, 4).value - to_double(walk4)) <= 1e-9, std::string("M_4 for c=") + text);
    for (std::int64_t n = 0; n <= law.n_trunc(); ++n) {
      double w = law.weight(n);
      if (w < 1e-280) continue;
      double rel = std::fabs(weight_formula(n, c) - w) / w;
      worst_ratio = std::max(worst_ratio, rel);
      o.require(rel <= 1e-12, std::string("weight formula for c=") + text + " n=" + std::to_string(n));
    }
  }
  o.detail << "max |mass-1| " << str(worst_mass) << ", max weight-route gap " << str(worst_ratio);
}

// 5. One-sided drift chains reproduce the discrete law at finite k >= m.
void criterion5(Outcome& o) {
  double worst = 0.0;
  for (const char* text : {"0.3", "1"}) {
    Rational cq = parse_rational(text);
    auto seq = free_shift(cq);
    auto law = discrete_arcsine_for_moments(to_double(cq), 10);
    for (int m = 1; m <= 10; ++m) {
      DiscreteMoment dm = discrete_moment(law, m);
      for (std::int64_t k : {static_cast<std::int64_t>(m), std::int64_t{2} * m, std::int64_t{50}}) {
        double v = normalized_moment_exact(seq, k, m).to_double();
        double gap = std::fabs(v - dm.value);
        worst = std::max(worst, gap);
        o.require(gap <= 1e-10, std::string("c=") + text + " k=" + std::to_string(k) + " m=" + std::to_string(m) +
                                    " gap " + str(gap));
      }
    }
  }
  o.detail << "max gap " << str(worst);
}

// 6. c -> 0 recovers the arcsine law.
void criterion6(Outcome& o) {
  auto table = c_to_zero_check({1.0, 0.5, 0.25, 0.125}, 8);
  o.require(table.monotone, "errors not non-increasing in c");
  double worst = 0.0;
  for (const auto& row : table.rows)
    if (row.m == 4) {
      double gap = std::fabs(row.error - row.c * row.c);
      worst = std::max(worst, gap);
      o.require(gap <= 1e-9, "m=4 error differs from c^2 at c=" + str(row.c));
    }
  o.detail << "max |err_4 - c^2| " << str(worst);
}

// 7. Carleman bounds.
void criterion7(Outcome& o) {
  double worst = 0.0;
  for (double c : {0.5, 1.0}) {
    auto report = carleman_bound_check(c, 15, 1e-9);
    for (const auto& row : report.rows) {
      worst = std::max(worst, row.relative_gap);
      o.require(row.relative_gap <= 1e-9, "b_0 vs discrete moment at c=" + str(c) + " m=" + std::to_string(row.m));
      o.require(row.even_moment <= row.even_moment_bound, "even moment bound");
      o.require(row.abs_coefficient_sum <= row.abs_sum_bound, "coefficient sum bound");
    }
    o.require(report.ok, "report not ok at c=" + str(c));
  }
  o.detail << "max relative gap " << str(worst);
}

// 8. Quadrature against the Fock-space moments.
void criterion8(Outcome& o) {
  auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  QuadratureOptions opts;
  opts.exec = kernels::Execution::Parallel;
  for (auto kind : {MeasureKind::Gaussian, MeasureKind::Uniform, MeasureKind::Exponential}) {
    MeasureSpec measure = measure_spec(kind);
    auto seq = catalog_sequence(measure.name);
    auto table = quadrature_moment_table(measure, seq, 10, 10, opts);
    for (int n = 0; n <= 10; ++n)
      for (int m = 0; m <= 10; ++m) {
        HighFloat walk = m == 0 ? HighFloat(1) : to_high(moment_exact(seq, n, m));
        double gap = static_cast<double>(boost::multiprecision::abs(table.at(n, m) - walk));
        worst = std::max(worst, gap);
        o.require(gap <= 1e-8, measure.name + " n=" + std::to_string(n) + " m=" + std::to_string(m) + " gap " + str(gap));
      }
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.detail << "max gap " << str(worst) << ", runtime " << str(seconds) << "s";
}

// 9. Exact and float engines agree; moment lists round-trip.
void criterion9(Outcome& o) {
  auto catalog = rac1_catalog();
  catalog.emplace_back("free_shift(3/10)", free_shift(Rational(3, 10)));
  catalog.emplace_back("free_shift(-2)", free_shift(Rational(-2)));
  double worst = 0.0;
  for (const auto& [name, seq] : catalog) {
    for (std::int64_t k : {0, 1, 2, 5, 10, 100, 1000, 10000}) {
      for (int m = 1; m <= 12; ++m) {
        double exact = to_double(moment_exact(seq, k, m));
        double flt = moment_float(seq, k, m);
        double exact_n = normalized_moment_exact(seq, k, m).to_double();
        double flt_n = normalized_moment_float(seq, k, m);
        for (auto [a, b] : {std::pair{exact, flt}, std::pair{exact_n, flt_n}}) {
          double rel = a == 0.0 ? std::fabs(b) : std::fabs(a - b) / std::fabs(a);
          worst = std::max(worst, rel);
          o.require(rel <= 1e-10, name + " k=" + std::to_string(k) + " m=" + std::to_string(m) + " rel " + str(rel));
        }
      }
    }
    std::vector<Rational> moments;
    for (int m = 1; m <= 16; ++m) moments.push_back(moment_exact(seq, 0, m));
    auto back = jacobi_from_moments(moments);
    for (int n = 0; n < 8; ++n)
      o.require(back.omega_exact(n) == seq.omega_exact(n) && back.alpha_exact(n) == seq.alpha_exact(n),
                name + " round trip at n=" + std::to_string(n));
  }
  o.detail << "max relative gap " << str(worst) << ", round trips exact to depth 8";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"harmonic oscillator arcsine convergence", criterion1},
      {"RAC catalog classification", criterion2},
      {"limit-table convergence", criterion3},
      {"discrete arcsine law", criterion4},
      {"finite-k moment equality for drift chains", criterion5},
      {"c -> 0 limit", criterion6},
      {"Carleman bound", criterion7},
      {"quadrature isometry oracle", criterion8},
      {"exact/float agreement and round trip", criterion9},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
