#include "fockarc/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace fockarc;
using Json = nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fockarc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("moments csv") {
  auto r = run({"moments", "--catalog", "gaussian", "--levels", "0,10", "--mmax", "4"});
  REQUIRE(r.code == 0);
  auto rows = lines(r.out);
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == "k,m,raw_moment,normalized_moment,mode");
  CHECK(rows[8].rfind("10,4,663,", 0) == 0);
  CHECK(rows[8].find(",exact") != std::string::npos);

  auto u = run({"moments", "--catalog", "uniform", "--levels", "0", "--mmax", "2"});
  REQUIRE(u.code == 0);
  CHECK(lines(u.out)[2] == "0,2,0.33333333333333331,1,exact");
}

TEST_CASE("moments json renders fractions") {
  auto r = run({"moments", "--catalog", "gaussian", "--levels", "1", "--mmax", "4", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["rows"][3]["raw_moment"] == "15/1");
  CHECK(j["rows"][3]["normalized_moment"] == "5/3");
  auto f = run({"moments", "--catalog", "gaussian", "--levels", "1", "--mmax", "4", "--format", "json", "--mode", "float"});
  auto jf = Json::parse(f.out);
  CHECK(jf["rows"][3]["raw_moment"].get<double>() == doctest::Approx(15.0));
  CHECK(jf["rows"][3]["mode"] == "float");
}

TEST_CASE("csv and json carry the same numbers") {
  std::vector<std::string> base{"moments", "--catalog", "exponential", "--levels", "3", "--mmax", "3", "--mode", "float"};
  auto csv = run(base);
  base.insert(base.end(), {"--format", "json"});
  auto json = Json::parse(run(base).out);
  auto rows = lines(csv.out);
  for (int i = 0; i < 3; ++i) {
    std::istringstream cells(rows[i + 1]);
    std::string k, m, raw, norm;
    std::getline(cells, k, ',');
    std::getline(cells, m, ',');
    std::getline(cells, raw, ',');
    std::getline(cells, norm, ',');
    CHECK(std::stod(raw) == json["rows"][i]["raw_moment"].get<double>());
    CHECK(std::stod(norm) == json["rows"][i]["normalized_moment"].get<double>());
  }
}

TEST_CASE("output is deterministic") {
  std::vector<std::string> args{"limit-table", "--catalog", "uniform", "--levels", "10,100", "--mmax", "6", "--format", "json"};
  CHECK(run(args).out == run(args).out);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"moments", "--catalog", "gaussian", "--levels", "0"}).code == 2);
  CHECK(run({"moments", "--levels", "0", "--mmax", "2"}).code == 2);
  CHECK(run({"moments", "--catalog", "gaussian", "--file", "x", "--levels", "0", "--mmax", "2"}).code == 2);
  CHECK(run({"classify", "--catalog", "q_gaussian", "--param", "q=2"}).code == 2);
  CHECK(run({"classify", "--catalog", "gaussian", "--format", "xml"}).code == 2);
  CHECK(run({"discrete-arcsine", "--c", "0"}).code == 2);
  CHECK(run({"classify", "--catalog", "gaussian", "--schedule", "10,20"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"moments", "--file", "/nonexistent.toml", "--levels", "0", "--mmax", "2"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("classify") {
  auto e = run({"classify", "--catalog", "exponential", "--format", "json"});
  REQUIRE(e.code == 0);
  CHECK(Json::parse(e.out)["report"]["classification"] == "RAC1");

  auto path = temp_file("fockarc_chain.toml", "omega = \"1/2\"\nalpha = \"0.3*n\"\n");
  auto f = run({"classify", "--file", path.string(), "--format", "json"});
  REQUIRE(f.code == 0);
  auto report = Json::parse(f.out)["report"];
  CHECK(report["classification"] == "RAC2");
  CHECK(report["c"].get<double>() == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(report["predicted_limit"] == "discrete_arcsine");

  auto csv = run({"classify", "--catalog", "free_shift", "--param", "c=-2"});
  REQUIRE(csv.code == 0);
  CHECK(lines(csv.out)[0] == "n,ratio,drift,classification,c,predicted_limit");
  CHECK(lines(csv.out).size() == 5);

  auto neither = run({"classify", "--file", temp_file("fockarc_doubling.toml", "omega = \"2^n\"").string()});
  CHECK(neither.code == 0);
  CHECK(neither.out.find("NEITHER") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("limit-table") {
  auto g = run({"limit-table", "--catalog", "gaussian", "--levels", "10,100,1000", "--mmax", "8"});
  REQUIRE(g.code == 0);
  auto rows = lines(g.out);
  REQUIRE(rows.size() == 25);
  CHECK(rows[0] == "k,m,computed,predicted,abs_error");

  auto f = run({"limit-table", "--catalog", "free_shift", "--param", "c=0.5", "--levels", "12", "--mmax", "10", "--format", "json"});
  REQUIRE(f.code == 0);
  for (const auto& row : Json::parse(f.out)["rows"]) CHECK(row["abs_error"].get<double>() <= 1e-9);

  auto path = temp_file("fockarc_doubling2.toml", "omega = \"2^n\"\n");
  auto n = run({"limit-table", "--file", path.string(), "--levels", "5", "--mmax", "4"});
  CHECK(n.code == 3);
  CHECK(n.err.find("no predicted limit") != std::string::npos);
}

TEST_CASE("discrete-arcsine") {
  auto r = run({"discrete-arcsine", "--c", "1", "--tol", "1e-12", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = Json::parse(r.out);
  double sum = 0.0;
  for (const auto& w : j["weights"]) sum += w["weight"].get<double>();
  CHECK(std::fabs(sum - 1.0) <= 1e-12);

  auto m = run({"discrete-arcsine", "--c", "0.5", "--moments", "6"});
  REQUIRE(m.code == 0);
  bool found = false;
  for (const auto& line : lines(m.out))
    if (line.rfind("moment,4,,", 0) == 0) {
      found = true;
      CHECK(std::stod(line.substr(10)) == doctest::Approx(1.75).epsilon(1e-12));
    }
  CHECK(found);
}

TEST_CASE("verify and --out") {
  auto path = std::filesystem::temp_directory_path() / "fockarc_verify.json";
  auto r = run({"verify", "--json", "--out", path.string()});
  CHECK(r.code == 0);
  std::ifstream in(path);
  auto j = Json::parse(in);
  CHECK(j["passed"] == true);
  CHECK(j["checks"].size() >= 10);
  std::filesystem::remove(path);

  auto fault = run({"verify", "--inject-fault", "gaussian_closed_form"});
  CHECK(fault.code != 0);
  CHECK(fault.out.find("FAIL gaussian_closed_form") != std::string::npos);
  CHECK(run({"verify", "--inject-fault", "nope"}).code == 2);
}
