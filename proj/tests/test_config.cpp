#include "fockarc/config.hpp"

#include <doctest.h>

using namespace fockarc;

TEST_CASE("expression definitions") {
  auto def = parse_sequence_definition(R"(# drift chain
omega = "1/2"
alpha = "c*n"   # linear drift
params = {c=0.3}
)");
  REQUIRE(def.omega);
  CHECK(*def.omega == "1/2");
  CHECK(*def.alpha == "c*n");
  REQUIRE(def.params.size() == 1);
  CHECK(def.params[0].first == "c");
  auto seq = build_sequence(def);
  CHECK(seq.alpha_exact(10) == 3);
  CHECK(seq.omega_exact(4) == Rational(1, 2));
}

TEST_CASE("catalog definitions and defaults") {
  auto def = parse_sequence_definition("catalog = \"q_gaussian\"\nparams = {q=1/2}\n");
  CHECK(build_sequence(def).omega_exact(1) == Rational(3, 2));
  auto only_omega = parse_sequence_definition("omega = \"n+1\"");
  CHECK(*only_omega.alpha == "0");
  auto qsum = parse_sequence_definition("omega = \"qsum(q, n)\"\nparams = {q=qsum(1/2, 1)/3}");
  CHECK(build_sequence(qsum).omega_exact(1) == Rational(3, 2));
  CHECK(parse_sequence_definition("omega = \"1\"\nparams = {}").params.empty());
}

TEST_CASE("malformed definitions are rejected") {
  CHECK_THROWS_AS(parse_sequence_definition("omega = \"1\"\ncolour = \"red\""), ConfigError);
  CHECK_THROWS_AS(parse_sequence_definition("omega = \"1\"\nomega = \"2\""), ConfigError);
  CHECK_THROWS_AS(parse_sequence_definition("catalog = \"gaussian\"\nomega = \"1\""), ConfigError);
  CHECK_THROWS_AS(parse_sequence_definition("alpha = \"1\""), ConfigError);
  CHECK_THROWS_AS(parse_sequence_definition(""), ConfigError);
  CHECK_THROWS_AS(parse_sequence_definition("omega = 1"), ConfigError);
  CHECK_THROWS_AS(parse_sequence_definition("omega \"1\""), ConfigError);
  CHECK_THROWS_AS(parse_sequence_definition("omega = \"1\"\nparams = c=1"), ConfigError);
  CHECK_THROWS_AS(parse_sequence_definition("omega = \"1\"\nparams = {c}"), ConfigError);
  try {
    parse_sequence_definition("omega = \"1\"\n\nbogus = 1");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("building reports expression and catalog problems as config errors") {
  CHECK_THROWS_AS(build_sequence(parse_sequence_definition("omega = \"2*+n\"")), ConfigError);
  CHECK_THROWS_AS(build_sequence(parse_sequence_definition("omega = \"c\"")), ConfigError);
  CHECK_THROWS_AS(build_sequence(parse_sequence_definition("omega = \"1\"\nparams = {c=1}")), ConfigError);
  CHECK_THROWS_AS(build_sequence(parse_sequence_definition("catalog = \"q_gaussian\"\nparams = {q=2}")), ConfigError);
  CHECK_THROWS_AS(build_sequence(parse_sequence_definition("catalog = \"nope\"")), ConfigError);
  CHECK_THROWS_AS(build_sequence(parse_sequence_definition("omega = \"c\"\nparams = {c=1, c=2}")), ConfigError);
  CHECK_THROWS_AS(build_sequence(parse_sequence_definition("omega = \"c\"\nparams = {c=n}")), ConfigError);
  CHECK_THROWS_AS(load_sequence_definition("/nonexistent/seq.toml"), ConfigError);
}

TEST_CASE("parameter assignments") {
  auto [name, value] = parse_param_assignment(" q = 1/2 ");
  CHECK(name == "q");
  CHECK(value == "1/2");
  CHECK_THROWS_AS(parse_param_assignment("q"), ConfigError);
  CHECK_THROWS_AS(parse_param_assignment("=1"), ConfigError);
  CHECK_THROWS_AS(parse_param_assignment("1q=1"), ConfigError);
}
