#include "fockarc/arcsine.hpp"
#include "oracles.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <doctest.h>

#include <cmath>

using namespace fockarc;

TEST_CASE("arcsine moments") {
  CHECK(arcsine_moment(0) == 1);
  CHECK(arcsine_moment(1) == 0);
  CHECK(arcsine_moment(2) == 1);
  CHECK(arcsine_moment(4) == Rational(3, 2));
  CHECK(arcsine_moment(6) == Rational(5, 2));
  for (int m = 0; m <= 20; ++m) {
    double expected = oracle::arcsine_moment_numeric(m);
    CHECK(to_double(arcsine_moment(m)) == doctest::Approx(expected).epsilon(1e-12));
    if (m % 2 == 0)
      CHECK(arcsine_moment(m) == Rational(oracle::binomial(m, m / 2)) / pow(Rational(2), static_cast<unsigned long>(m / 2)));
  }
  CHECK_THROWS(arcsine_moment(-1));
}

TEST_CASE("fourier coefficients against the integral and boost") {
  CHECK(fourier_coefficient(0, 1.0) == doctest::Approx(oracle::fourier_coefficient_numeric(0, std::sqrt(2.0))).epsilon(1e-13));
  for (double c : {0.05, 0.1, 0.3, 1.0, 2.0, 10.0}) {
    double x = std::sqrt(2.0) / c;
    for (int n : {0, 1, 2, 5, 13, 30}) {
      double expected = boost::math::cyl_bessel_j(n, x);
      double got = fourier_coefficient(n, c);
      INFO("c=" << c << " n=" << n);
      CHECK(std::fabs(got - expected) <= 1e-13 * std::max(1e-3, std::fabs(expected)));
      if (x < 40) CHECK(std::fabs(got - oracle::fourier_coefficient_numeric(n, x)) <= 1e-12);
      CHECK(fourier_coefficient(-n, c) == doctest::Approx((n % 2 ? -1 : 1) * got));
      CHECK(fourier_coefficient(n, -c) == doctest::Approx((n % 2 ? -1 : 1) * got));
    }
  }
  CHECK_THROWS_AS(fourier_coefficient(1, 0.0), std::invalid_argument);
}

TEST_CASE("series and backward recurrence agree where both apply") {
  for (double c : {0.1, 0.12, 0.2}) {
    for (int n = 0; n <= 40; n += 3) {
      double s = fourier_coefficient_series(n, c);
      double b = boost::math::cyl_bessel_j(n, std::sqrt(2.0) / c);
      CHECK(std::fabs(s - b) <= 1e-13 * std::max(1e-3, std::fabs(b)));
    }
  }
}

TEST_CASE("weight formula equals squared coefficient") {
  for (double c : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    for (int n = 0; n <= 25; ++n) {
      double a = fourier_coefficient_series(n, c);
      double w = weight_formula(n, c);
      if (a * a < 1e-280) continue;
      CHECK(std::fabs(w - a * a) <= 1e-12 * a * a);
    }
  }
}

TEST_CASE("discrete arcsine law basics") {
  for (double c : {0.1, 0.5, 1.0, 2.0, 10.0, -0.5}) {
    auto law = discrete_arcsine(c, 1e-14);
    INFO("c=" << c);
    CHECK(std::fabs(law.total_mass() - 1.0) <= 1e-12);
    CHECK(law.tail_mass_bound() <= 1e-14);
    CHECK(law.n_trunc() >= static_cast<std::int64_t>(std::ceil(law.x() + 20 + 140)));
    for (std::int64_t n = 0; n <= law.n_trunc(); ++n) CHECK(law.weight(n) == law.weight(-n));
    CHECK(law.weight(law.n_trunc() + 1) == 0.0);
    CHECK(discrete_moment(law, 1).value == 0.0);
    CHECK(discrete_moment(law, 3).value == 0.0);
    CHECK(std::fabs(discrete_moment(law, 2).value - 1.0) <= 1e-10);
    CHECK(std::fabs(discrete_moment(law, 4).value - (1.5 + c * c)) <= 1e-9);
    for (int m : {2, 4, 6}) {
      long double oracle_value = oracle::discrete_moment_bessel(c, m, static_cast<int>(law.n_trunc()));
      CHECK(std::fabs(discrete_moment(law, m).value - static_cast<double>(oracle_value)) <= 1e-11 * std::max(1.0, std::fabs(static_cast<double>(oracle_value))));
    }
  }
  CHECK_THROWS_AS(discrete_arcsine(0.0), std::invalid_argument);
}

TEST_CASE("moments of the law match the drift chain") {
  for (double c : {0.3, 1.0}) {
    auto law = discrete_arcsine_for_moments(c, 10);
    auto omega = [](std::int64_t) { return Rational(1, 2); };
    Rational cq = parse_rational(c == 0.3 ? "0.3" : "1");
    auto alpha = [&](std::int64_t n) -> Rational { return cq * n; };
    for (int m = 1; m <= 10; ++m) {
      double walk = to_double(oracle::walk_moment(omega, alpha, 0, m, -100));
      CHECK(std::fabs(discrete_moment(law, m).value - walk) <= 1e-10 * std::max(1.0, std::fabs(walk)));
    }
  }
}

TEST_CASE("truncation errors are raised, not hidden") {
  auto narrow = DiscreteArcsineLaw::build(0.5, 1e-3);
  CHECK_NOTHROW(discrete_moment(narrow, 120));
  // Past this order the tail bound of the table diverges.
  CHECK_THROWS_AS(discrete_moment(narrow, 600), TruncationError);
}

TEST_CASE("c to zero") {
  auto table = c_to_zero_check({1.0, 0.5, 0.25, 0.125}, 8);
  CHECK(table.monotone);
  for (const auto& row : table.rows)
    if (row.m == 4) CHECK(std::fabs(row.error - row.c * row.c) <= 1e-9);
  CHECK_THROWS(c_to_zero_check({0.5, 1.0}, 4));
}

TEST_CASE("Carleman recursion") {
  auto b = carleman_coefficients(0.0, 4);
  CHECK(b[4][4] == doctest::Approx(1.5));  // free chain M_4
  for (double c : {0.5, 1.0}) {
    auto report = carleman_bound_check(c, 15);
    CHECK(report.ok);
    CHECK(report.rows.size() == 15);
    for (const auto& row : report.rows) {
      CHECK(row.even_moment <= row.even_moment_bound);
      CHECK(row.abs_coefficient_sum <= row.abs_sum_bound * (1 + 1e-12));
      CHECK(row.relative_gap <= 1e-9);
    }
    CHECK(report.partial_carleman_sum > 0.0);
  }
  CHECK_THROWS_AS(carleman_bound_check(1.0, 400), std::overflow_error);
}
