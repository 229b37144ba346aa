#include "fockarc/fock.hpp"
#include "fockarc/jacobi.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace fockarc;

TEST_CASE("catalog entries match their closed forms") {
  auto uniform = catalog_sequence("uniform");
  CHECK(uniform.omega_exact(0) == Rational(1, 3));
  auto gaussian = catalog_sequence("gaussian");
  CHECK(gaussian.alpha_exact(7) == 0);
  auto semicircle = catalog_sequence("q_gaussian", {{"q", Parameter::of(Rational(0))}});
  for (std::int64_t n = 0; n < 50; ++n) CHECK(semicircle.omega_exact(n) == 1);
  auto exponential = catalog_sequence("exponential");
  auto half = catalog_sequence("q_gaussian", {{"q", Parameter::of(Rational(1, 2))}});
  auto shift = catalog_sequence("free_shift", {{"c", Parameter::of(Rational(3, 10))}});

  for (std::int64_t n = 0; n <= 10000; n += (n < 100 ? 1 : 97)) {
    Rational r(n);
    CHECK(gaussian.omega_exact(n) == r + 1);
    CHECK(uniform.omega_exact(n) == (r + 1) * (r + 1) / ((2 * r + 1) * (2 * r + 3)));
    CHECK(exponential.omega_exact(n) == (r + 1) * (r + 1));
    CHECK(exponential.alpha_exact(n) == 2 * r + 1);
    CHECK(shift.omega_exact(n) == Rational(1, 2));
    CHECK(shift.alpha_exact(n) == Rational(3, 10) * r);
    if (n < 200) CHECK(half.omega_exact(n) == 2 - pow(Rational(1, 2), static_cast<unsigned long>(n)));
    CHECK(gaussian.omega(n) == static_cast<double>(n + 1));
  }
}

TEST_CASE("catalog errors") {
  CHECK_THROWS_AS(catalog_sequence("poisson"), CatalogError);
  CHECK_THROWS_AS(catalog_sequence("q_gaussian"), CatalogError);
  CHECK_THROWS_AS(catalog_sequence("q_gaussian", {{"q", Parameter::of(Rational(2))}}), CatalogError);
  CHECK_THROWS_AS(catalog_sequence("q_gaussian", {{"q", Parameter::of(Rational(-1))}}), CatalogError);
  CHECK_THROWS_AS(catalog_sequence("gaussian", {{"q", Parameter::of(Rational(1, 2))}}), CatalogError);
  CHECK_NOTHROW(catalog_sequence("q_gaussian", {{"q", Parameter::of(Rational(1))}}));
}

TEST_CASE("irrational q is float-only") {
  auto seq = catalog_sequence("q_gaussian", {{"q", parse_parameter("sqrt(2)/2")}});
  CHECK(!seq.supports_exact());
  CHECK_THROWS_AS(seq.omega_exact(1), NotExactError);
  CHECK(seq.omega(1) == doctest::Approx(1 + std::sqrt(2.0) / 2));
  auto report = validate(seq, 100);
  CHECK(report.ok);
  CHECK(!report.exact_capable);
  CHECK(!report.notes.empty());
}

TEST_CASE("validate reports the first violation") {
  CHECK(validate(catalog_sequence("gaussian"), 1000).ok);

  auto tab = tabulated_sequence(std::vector<Rational>{1, 2, 0, 4, 5, 6, 7, 8, 9, 10, 11},
                                std::vector<Rational>(11, Rational(0)));
  auto report = validate(tab, 10);
  REQUIRE(!report.ok);
  CHECK(report.first_violation->index == 2);
  CHECK(report.first_violation->field == "omega");

  auto expr = expression_sequence(seqexpr::Expression::parse("n-3"), seqexpr::Expression::parse("0"), {});
  auto r2 = validate(expr, 10);
  REQUIRE(!r2.ok);
  // n-3 is already negative at n=0; the zero at n=3 is listed too.
  CHECK(r2.first_violation->index == 0);
  REQUIRE(r2.violations.size() == 4);
  CHECK(r2.violations[3].index == 3);
  CHECK(r2.violations[3].reason.find("omega = 0") != std::string::npos);
  CHECK(r2.checked_through == 10);

  auto pole = expression_sequence(seqexpr::Expression::parse("1"), seqexpr::Expression::parse("1/(n-4)"), {});
  auto r3 = validate(pole, 10);
  REQUIRE(!r3.ok);
  CHECK(r3.first_violation->index == 4);
  CHECK(r3.first_violation->field == "alpha");
}

TEST_CASE("evaluation is pure and tabulated sequences do not extrapolate") {
  auto tab = tabulated_sequence(std::vector<double>{1.0, 2.0}, std::vector<double>{0.5, 0.25});
  CHECK(tab.omega(1) == 2.0);
  CHECK(tab.omega(1) == tab.omega(1));
  CHECK_THROWS_AS(tab.omega(2), SequenceRangeError);
  CHECK_THROWS_AS(tab.omega_exact(0), NotExactError);
  CHECK_THROWS_AS(catalog_sequence("gaussian").omega(-1), std::out_of_range);
  CHECK(tab.length() == 2);
}

TEST_CASE("jacobi_from_moments on reference measures") {
  auto g = jacobi_from_moments(oracle::gaussian_moments(6));
  for (int n = 0; n < 3; ++n) {
    CHECK(g.omega_exact(n) == n + 1);
    CHECK(g.alpha_exact(n) == 0);
  }
  auto e = jacobi_from_moments(oracle::exponential_moments(4));
  CHECK(e.omega_exact(0) == 1);
  CHECK(e.omega_exact(1) == 4);
  CHECK(e.alpha_exact(0) == 1);
  CHECK(e.alpha_exact(1) == 3);
  auto u = jacobi_from_moments(oracle::uniform_moments(16));
  auto uniform = catalog_sequence("uniform");
  for (int n = 0; n < 8; ++n) CHECK(u.omega_exact(n) == uniform.omega_exact(n));
}

TEST_CASE("jacobi_from_moments rejects unrealizable lists") {
  std::vector<Rational> zeros(6, Rational(0));
  try {
    jacobi_from_moments(zeros);
    FAIL("expected MomentRealizationError");
  } catch (const MomentRealizationError& e) {
    CHECK(e.depth() == 1);
  }
  // Two-point measure: realizable to depth 2 only.
  std::vector<Rational> two_point{0, 1, 0, 1, 0, 1};
  try {
    jacobi_from_moments(two_point);
    FAIL("expected MomentRealizationError");
  } catch (const MomentRealizationError& e) {
    CHECK(e.depth() == 2);
  }
  CHECK_THROWS_AS(jacobi_from_moments(std::vector<Rational>{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("round trip through the fock moments, depth 8") {
  std::vector<JacobiSequence> catalog = {
      catalog_sequence("gaussian"),
      catalog_sequence("uniform"),
      catalog_sequence("exponential"),
      catalog_sequence("q_gaussian", {{"q", Parameter::of(Rational(-1, 2))}}),
      catalog_sequence("q_gaussian", {{"q", Parameter::of(Rational(1, 2))}}),
      catalog_sequence("q_gaussian", {{"q", Parameter::of(Rational(1))}}),
      catalog_sequence("free_shift", {{"c", Parameter::of(Rational(-7, 3))}}),
  };
  for (const auto& seq : catalog) {
    std::vector<Rational> moments;
    for (int m = 1; m <= 16; ++m) moments.push_back(moment_exact(seq, 0, m));
    auto back = jacobi_from_moments(moments);
    CHECK(back.length() == 8);
    for (int n = 0; n < 8; ++n) {
      CHECK(back.omega_exact(n) == seq.omega_exact(n));
      CHECK(back.alpha_exact(n) == seq.alpha_exact(n));
    }
  }
}
