#include "fockarc/cli.hpp"

#include "fockarc/arcsine.hpp"
#include "fockarc/config.hpp"
#include "fockarc/fock.hpp"
#include "fockarc/orthopoly.hpp"
#include "fockarc/rac.hpp"
#include "fockarc/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#ifndef FOCKARC_VERSION
#define FOCKARC_VERSION "0.0.0"
#endif

namespace fockarc {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NoPrediction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SourceOptions {
  std::string catalog;
  std::string file;
  std::vector<std::string> params;
};

struct CommonOptions {
  SourceOptions source;
  std::string format = "csv";
  std::string out;
  std::string mode = "exact";
  std::optional<double> tol;
};

std::string fmt17(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_exact(const Rational& r) {
  if (auto d = to_decimal_string(r)) return *d;
  return fmt17(to_double(r));
}

std::string render_exact(const ExactMoment& m) {
  std::string s = to_fraction_string(m.coefficient);
  if (m.has_root) s += "/sqrt(" + to_fraction_string(m.variance) + ")";
  return s;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line + '\n';
}

Json header(const std::string& command) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["version"] = FOCKARC_VERSION;
  j["command"] = command;
  return j;
}

Mode parse_mode(const std::string& mode) { return mode == "float" ? Mode::Float : Mode::Exact; }

struct LoadedSequence {
  JacobiSequence seq;
  Json description;
  bool exact = true;
};

LoadedSequence load_sequence(const SourceOptions& src) {
  const bool has_catalog = !src.catalog.empty();
  const bool has_file = !src.file.empty();
  if (has_catalog == has_file) throw UsageError("exactly one of --catalog or --file is required");
  SequenceDefinition def;
  if (has_file) {
    def = load_sequence_definition(src.file);
    // Command-line parameters extend those in the file; repeats are rejected.
    for (const auto& p : src.params) def.params.push_back(parse_param_assignment(p));
  } else {
    def.catalog = src.catalog;
    for (const auto& p : src.params) def.params.push_back(parse_param_assignment(p));
  }
  LoadedSequence loaded{build_sequence(def), Json::object(), true};
  Json& d = loaded.description;
  if (def.catalog) {
    d["source"] = "catalog";
    d["name"] = *def.catalog;
  } else {
    d["source"] = "expression";
    d["omega"] = *def.omega;
    d["alpha"] = *def.alpha;
  }
  Json params = Json::object();
  for (const auto& [k, v] : def.params) params[k] = v;
  d["params"] = params;
  loaded.exact = loaded.seq.supports_exact();
  d["exact_capable"] = loaded.exact;
  return loaded;
}

void validate_levels(const std::vector<std::int64_t>& levels) {
  if (levels.empty()) throw UsageError("--levels must list at least one level");
  for (auto k : levels)
    if (k < 0) throw UsageError("levels must be nonnegative");
}

// moments -----------------------------------------------------------------

struct MomentRow {
  std::int64_t k = 0;
  int m = 0;
  bool exact = false;
  double raw = 0.0;
  double normalized = 0.0;
  Rational raw_exact;
  ExactMoment normalized_exact;
};

void cmd_moments(const CommonOptions& opt, const std::vector<std::int64_t>& levels, int m_max, std::ostream& out) {
  validate_levels(levels);
  if (m_max < 1) throw UsageError("--mmax must be at least 1");
  LoadedSequence loaded = load_sequence(opt.source);
  const bool want_exact = parse_mode(opt.mode) == Mode::Exact && loaded.exact;
  const std::size_t cols = static_cast<std::size_t>(m_max);
  auto rows = kernels::map_indexed(
      levels.size() * cols,
      [&](std::size_t i) {
        MomentRow row;
        row.k = levels[i / cols];
        row.m = static_cast<int>(i % cols) + 1;
        if (want_exact) {
          try {
            row.raw_exact = moment_exact(loaded.seq, row.k, row.m);
            row.normalized_exact = normalized_moment_exact(loaded.seq, row.k, row.m);
            row.raw = to_double(row.raw_exact);
            row.normalized = row.normalized_exact.to_double();
            row.exact = true;
            return row;
          } catch (const NotExactError&) {
          } catch (const seqexpr::EvalError& e) {
            if (e.kind() != seqexpr::EvalErrorKind::Irrational) throw;
          }
        }
        row.raw = moment_float(loaded.seq, row.k, row.m);
        row.normalized = normalized_moment_float(loaded.seq, row.k, row.m);
        return row;
      },
      kernels::Execution::Parallel);

  if (opt.format == "json") {
    Json j = header("moments");
    j["sequence"] = loaded.description;
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json row;
      row["k"] = r.k;
      row["m"] = r.m;
      if (r.exact) {
        row["raw_moment"] = to_fraction_string(r.raw_exact);
        row["normalized_moment"] = render_exact(r.normalized_exact);
      } else {
        row["raw_moment"] = r.raw;
        row["normalized_moment"] = r.normalized;
      }
      row["mode"] = r.exact ? "exact" : "float";
      arr.push_back(row);
    }
    j["rows"] = arr;
    out << j.dump(2) << '\n';
  } else {
    out << csv_row({"k", "m", "raw_moment", "normalized_moment", "mode"});
    for (const auto& r : rows) {
      std::string raw = r.exact ? csv_exact(r.raw_exact) : fmt17(r.raw);
      std::string norm = r.exact && r.normalized_exact.is_rational() ? csv_exact(r.normalized_exact.coefficient)
                                                                      : fmt17(r.normalized);
      out << csv_row({std::to_string(r.k), std::to_string(r.m), raw, norm, r.exact ? "exact" : "float"});
    }
  }
}

// classify ----------------------------------------------------------------

Json limit_json(const LimitEstimate& e) {
  Json j;
  j["value"] = e.value;
  j["residual"] = e.residual;
  j["order"] = e.order;
  return j;
}

RacReport run_classify(const LoadedSequence& loaded, const std::vector<std::int64_t>& schedule, double tol) {
  try {
    return classify(loaded.seq, schedule, tol);
  } catch (const SequenceRangeError& e) {
    throw UsageError(e.what());
  } catch (const seqexpr::EvalError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

Json report_json(const RacReport& r) {
  Json j;
  j["classification"] = to_string(r.classification);
  j["c"] = r.c;
  j["tol"] = r.tol;
  j["predicted_limit"] = to_string(r.predicted);
  j["ratio_limit"] = limit_json(r.ratio_limit);
  j["drift_limit"] = limit_json(r.drift_limit);
  j["reason"] = r.reason;
  Json probes = Json::array();
  for (const auto& p : r.probes) probes.push_back(Json{{"n", p.n}, {"ratio", p.ratio}, {"drift", p.drift}});
  j["probes"] = probes;
  return j;
}

void cmd_classify(const CommonOptions& opt, const std::vector<std::int64_t>& schedule, std::ostream& out) {
  LoadedSequence loaded = load_sequence(opt.source);
  RacReport report = run_classify(loaded, schedule, opt.tol.value_or(1e-6));
  if (opt.format == "json") {
    Json j = header("classify");
    j["sequence"] = loaded.description;
    j["report"] = report_json(report);
    out << j.dump(2) << '\n';
  } else {
    out << csv_row({"n", "ratio", "drift", "classification", "c", "predicted_limit"});
    for (const auto& p : report.probes)
      out << csv_row({std::to_string(p.n), fmt17(p.ratio), fmt17(p.drift), to_string(report.classification),
                      fmt17(report.c), to_string(report.predicted)});
  }
}

// limit-table -------------------------------------------------------------

void cmd_limit_table(const CommonOptions& opt, const std::vector<std::int64_t>& levels, int m_max,
                     const std::vector<std::int64_t>& schedule, std::ostream& out) {
  validate_levels(levels);
  if (m_max < 1 || m_max > 20) throw UsageError("--mmax must be in 1..20");
  LoadedSequence loaded = load_sequence(opt.source);
  RacReport report = run_classify(loaded, schedule, opt.tol.value_or(1e-6));
  if (report.predicted == LimitKind::Unknown)
    throw NoPrediction("no predicted limit: classification " + to_string(report.classification) +
                       (report.reason.empty() ? "" : " (" + report.reason + ")"));
  auto rows = limit_table(loaded.seq, report, levels, m_max, parse_mode(opt.mode), kernels::Execution::Parallel);
  if (opt.format == "json") {
    Json j = header("limit-table");
    j["sequence"] = loaded.description;
    j["classification"] = to_string(report.classification);
    j["c"] = report.c;
    j["predicted_limit"] = to_string(report.predicted);
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json row;
      row["k"] = r.k;
      row["m"] = r.m;
      row["computed"] = r.computed;
      row["predicted"] = r.predicted;
      row["abs_error"] = r.abs_error;
      if (r.computed_exact) row["computed_exact"] = render_exact(*r.computed_exact);
      arr.push_back(row);
    }
    j["rows"] = arr;
    out << j.dump(2) << '\n';
  } else {
    out << csv_row({"k", "m", "computed", "predicted", "abs_error"});
    for (const auto& r : rows)
      out << csv_row({std::to_string(r.k), std::to_string(r.m), fmt17(r.computed), fmt17(r.predicted), fmt17(r.abs_error)});
  }
}

// discrete-arcsine --------------------------------------------------------

void cmd_discrete_arcsine(const CommonOptions& opt, double c, int moments, std::ostream& out) {
  if (c == 0.0 || !std::isfinite(c)) throw UsageError("--c must be a nonzero finite number");
  if (moments < 0) throw UsageError("--moments must be nonnegative");
  const double tol = opt.tol.value_or(1e-14);
  if (!(tol > 0.0 && tol < 1.0)) throw UsageError("--tol must be in (0, 1)");
  const std::int64_t wide = discrete_arcsine_for_moments(c, moments).n_trunc();
  auto law = DiscreteArcsineLaw::build(c, tol, wide, kernels::Execution::Parallel);
  std::vector<DiscreteMoment> values;
  for (int m = 1; m <= moments; ++m) values.push_back(discrete_moment(law, m));

  const std::int64_t nt = law.n_trunc();
  if (opt.format == "json") {
    Json j = header("discrete-arcsine");
    j["c"] = c;
    j["x"] = law.x();
    j["n_trunc"] = nt;
    j["tail_mass_bound"] = law.tail_mass_bound();
    j["series_tol"] = law.series_tol();
    j["total_mass"] = law.total_mass();
    Json weights = Json::array();
    for (std::int64_t n = -nt; n <= nt; ++n)
      weights.push_back(Json{{"n", n}, {"point", c * static_cast<double>(n)}, {"weight", law.weight(n)}});
    j["weights"] = weights;
    Json ms = Json::array();
    for (int m = 1; m <= moments; ++m)
      ms.push_back(Json{{"m", m}, {"value", values[m - 1].value}, {"truncation_bound", values[m - 1].truncation_bound}});
    j["moments"] = ms;
    out << j.dump(2) << '\n';
  } else {
    out << csv_row({"record", "index", "point", "value", "bound"});
    for (std::int64_t n = -nt; n <= nt; ++n)
      out << csv_row({"weight", std::to_string(n), fmt17(c * static_cast<double>(n)), fmt17(law.weight(n)), ""});
    for (int m = 1; m <= moments; ++m)
      out << csv_row({"moment", std::to_string(m), "", fmt17(values[m - 1].value), fmt17(values[m - 1].truncation_bound)});
  }
}

// verify ------------------------------------------------------------------

bool cmd_verify(const CommonOptions& opt, const std::string& fault, std::ostream& out) {
  VerifyOptions vo;
  vo.exec = kernels::Execution::Parallel;
  if (!fault.empty()) vo.inject_fault = fault;
  std::vector<CheckResult> results;
  try {
    results = run_verification(vo);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  if (opt.format == "json") {
    Json j = header("verify");
    Json arr = Json::array();
    for (const auto& r : results) arr.push_back(Json{{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    j["checks"] = arr;
    j["passed"] = all;
    out << j.dump(2) << '\n';
  } else {
    for (const auto& r : results) out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    out << (all ? "all checks passed" : "verification FAILED") << '\n';
  }
  return all;
}

void add_source(CLI::App* cmd, CommonOptions& opt) {
  auto* cat = cmd->add_option("--catalog", opt.source.catalog, "Catalog sequence name");
  auto* file = cmd->add_option("--file", opt.source.file, "Sequence definition file");
  cat->excludes(file);
  cmd->add_option("--param", opt.source.params, "Parameter name=value (repeatable)")->allow_extra_args(false);
}

void add_output(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", opt.out, "Output path (default: standard output)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interacting Fock space moments, RAC classification and arcsine limits", "fockarc"};
  app.set_version_flag("--version", FOCKARC_VERSION);
  app.require_subcommand(1);

  CommonOptions opt;
  std::vector<std::int64_t> levels;
  int m_max = 0;
  std::vector<std::int64_t> schedule = default_schedule();
  double c = 0.0;
  int moments = 4;
  bool json_flag = false;
  std::string fault;

  auto* moments_cmd = app.add_subcommand("moments", "Raw and normalized moments <X^m Phi_k, Phi_k>");
  add_source(moments_cmd, opt);
  add_output(moments_cmd, opt);
  moments_cmd->add_option("--levels", levels, "Comma-separated levels k")->delimiter(',')->required();
  moments_cmd->add_option("--mmax", m_max, "Largest moment order")->required();
  moments_cmd->add_option("--mode", opt.mode, "Arithmetic")->check(CLI::IsMember({"exact", "float"}));

  auto* classify_cmd = app.add_subcommand("classify", "RAC1/RAC2 classification");
  add_source(classify_cmd, opt);
  add_output(classify_cmd, opt);
  classify_cmd->add_option("--schedule", schedule, "Comma-separated probe indices")->delimiter(',');
  classify_cmd->add_option("--tol", opt.tol, "Classification tolerance (default 1e-6)");

  auto* limit_cmd = app.add_subcommand("limit-table", "Normalized moments against the predicted limit law");
  add_source(limit_cmd, opt);
  add_output(limit_cmd, opt);
  limit_cmd->add_option("--levels", levels, "Comma-separated levels k")->delimiter(',')->required();
  limit_cmd->add_option("--mmax", m_max, "Largest moment order (<= 20)")->required();
  limit_cmd->add_option("--schedule", schedule, "Comma-separated probe indices")->delimiter(',');
  limit_cmd->add_option("--tol", opt.tol, "Classification tolerance (default 1e-6)");
  limit_cmd->add_option("--mode", opt.mode, "Arithmetic")->check(CLI::IsMember({"exact", "float"}));

  auto* discrete_cmd = app.add_subcommand("discrete-arcsine", "Weights and moments of the discrete arcsine law");
  add_output(discrete_cmd, opt);
  discrete_cmd->add_option("--c", c, "Lattice spacing c (nonzero)")->required();
  discrete_cmd->add_option("--moments", moments, "Largest moment order");
  discrete_cmd->add_option("--tol", opt.tol, "Tail mass tolerance (default 1e-14)");

  auto* verify_cmd = app.add_subcommand("verify", "Run the property suite");
  add_output(verify_cmd, opt);
  verify_cmd->add_flag("--json", json_flag, "Same as --format json");
  verify_cmd->add_option("--inject-fault", fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }
  if (json_flag) opt.format = "json";

  std::ostringstream buffer;
  try {
    bool verified = true;
    if (moments_cmd->parsed())
      cmd_moments(opt, levels, m_max, buffer);
    else if (classify_cmd->parsed())
      cmd_classify(opt, schedule, buffer);
    else if (limit_cmd->parsed())
      cmd_limit_table(opt, levels, m_max, schedule, buffer);
    else if (discrete_cmd->parsed())
      cmd_discrete_arcsine(opt, c, moments, buffer);
    else if (verify_cmd->parsed())
      verified = cmd_verify(opt, fault, buffer);

    if (opt.out.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(opt.out, std::ios::binary);
      if (!file) throw UsageError("cannot open output file '" + opt.out + "'");
      file << buffer.str();
    }
    return verified ? kExitOk : kExitComputation;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CatalogError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NoPrediction& e) {
    err << "error: " << e.what() << '\n';
    return kExitNoPrediction;
  } catch (const std::exception& e) {
    err << "computation failed: " << e.what() << '\n';
    return kExitComputation;
  }
}

}  // namespace fockarc
