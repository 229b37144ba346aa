#include "fockarc/config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace fockarc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ConfigError("line " + std::to_string(line) + ": " + message);
}

// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string unquote(std::string_view value, int line) {
  if (value.size() < 2 || value.front() != '"' || value.back() != '"')
    fail(line, "expected a double-quoted string");
  std::string_view inner = value.substr(1, value.size() - 2);
  if (inner.find('"') != std::string_view::npos) fail(line, "unexpected quote inside string");
  return std::string(inner);
}

std::vector<std::pair<std::string, std::string>> parse_param_block(std::string_view value, int line) {
  if (value.size() < 2 || value.front() != '{' || value.back() != '}') fail(line, "params must be written {name=value, ...}");
  std::vector<std::pair<std::string, std::string>> out;
  std::string_view body = trim(value.substr(1, value.size() - 2));
  if (body.empty()) return out;
  // Values are constant expressions; qsum(a, b) has a comma inside parentheses.
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i < body.size()) {
      if (body[i] == '(') ++depth;
      if (body[i] == ')') --depth;
      if (body[i] != ',' || depth > 0) continue;
    }
    try {
      out.push_back(parse_param_assignment(body.substr(start, i - start)));
    } catch (const ConfigError& e) {
      fail(line, e.what());
    }
    start = i + 1;
  }
  return out;
}

}  // namespace

std::pair<std::string, std::string> parse_param_assignment(std::string_view text) {
  auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ConfigError("parameter '" + std::string(text) + "' is not of the form name=value");
  std::string name(trim(text.substr(0, eq)));
  std::string value(trim(text.substr(eq + 1)));
  if (name.empty() || value.empty()) throw ConfigError("parameter '" + std::string(text) + "' is not of the form name=value");
  if (!std::isalpha(static_cast<unsigned char>(name.front())) && name.front() != '_')
    throw ConfigError("invalid parameter name '" + name + "'");
  for (char ch : name)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') throw ConfigError("invalid parameter name '" + name + "'");
  return {name, value};
}

SequenceDefinition parse_sequence_definition(std::string_view text) {
  SequenceDefinition def;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view content = trim(strip_comment(raw));
    if (content.empty()) continue;
    auto eq = content.find('=');
    if (eq == std::string_view::npos) fail(line, "expected key = value");
    std::string key(trim(content.substr(0, eq)));
    std::string_view value = trim(content.substr(eq + 1));
    if (!seen.insert(key).second) fail(line, "duplicate key '" + key + "'");
    if (key == "omega")
      def.omega = unquote(value, line);
    else if (key == "alpha")
      def.alpha = unquote(value, line);
    else if (key == "catalog")
      def.catalog = unquote(value, line);
    else if (key == "params")
      def.params = parse_param_block(value, line);
    else
      fail(line, "unknown key '" + key + "'");
  }
  if (def.catalog && (def.omega || def.alpha)) throw ConfigError("give either catalog or omega/alpha, not both");
  if (!def.catalog && !def.omega) throw ConfigError("no sequence source: need catalog or omega");
  if (def.omega && !def.alpha) def.alpha = "0";
  return def;
}

SequenceDefinition load_sequence_definition(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open sequence file '" + path.string() + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  try {
    return parse_sequence_definition(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

ParamMap build_params(const std::vector<std::pair<std::string, std::string>>& params) {
  ParamMap out;
  for (const auto& [name, value] : params) {
    if (out.count(name)) throw ConfigError("parameter '" + name + "' given twice");
    try {
      out.emplace(name, parse_parameter(value));
    } catch (const std::exception& e) {
      throw ConfigError("parameter '" + name + "': " + e.what());
    }
  }
  return out;
}

JacobiSequence build_sequence(const SequenceDefinition& def) {
  ParamMap params = build_params(def.params);
  try {
    if (def.catalog) return catalog_sequence(*def.catalog, params);
    auto omega = seqexpr::Expression::parse(*def.omega);
    auto alpha = seqexpr::Expression::parse(def.alpha.value_or("0"));
    std::set<std::string> used = omega.parameters();
    for (const auto& p : alpha.parameters()) used.insert(p);
    for (const auto& p : used)
      if (!params.count(p)) throw ConfigError("expression uses unbound parameter '" + p + "'");
    for (const auto& [name, value] : params)
      if (!used.count(name)) throw ConfigError("parameter '" + name + "' is not used by omega or alpha");
    return expression_sequence(std::move(omega), std::move(alpha), std::move(params));
  } catch (const ConfigError&) {
    throw;
  } catch (const seqexpr::ParseError& e) {
    throw ConfigError(std::string("expression: ") + e.what());
  } catch (const CatalogError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace fockarc
