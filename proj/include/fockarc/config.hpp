#pragma once

#include "fockarc/jacobi.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fockarc {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A sequence source: either a catalog name or an (omega, alpha) expression
/// pair, plus named parameters in the order they were given.
struct SequenceDefinition {
  std::optional<std::string> catalog;
  std::optional<std::string> omega;
  std::optional<std::string> alpha;
  std::vector<std::pair<std::string, std::string>> params;
};

/// Parses the sequence-definition file format:
///
///   # comment
///   omega  = "<expr>"
///   alpha  = "<expr>"
///   params = {name=value, ...}
///   catalog = "<name>"
///
/// Unknown or repeated keys are rejected, as is a file that names both a
/// catalog entry and expressions, or neither. Missing alpha defaults to "0".
SequenceDefinition parse_sequence_definition(std::string_view text);
SequenceDefinition load_sequence_definition(const std::filesystem::path& path);

/// Splits "name=value"; throws ConfigError when malformed.
std::pair<std::string, std::string> parse_param_assignment(std::string_view text);

ParamMap build_params(const std::vector<std::pair<std::string, std::string>>& params);

/// Builds the sequence; parse and catalog failures become ConfigError.
JacobiSequence build_sequence(const SequenceDefinition& def);

}  // namespace fockarc
