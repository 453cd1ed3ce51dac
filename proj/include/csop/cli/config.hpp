#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csop/types.hpp"

/// `key = value` run configuration with `#` comments. Every subcommand has a
/// fixed key schema; unknown keys, malformed values and missing required keys
/// are rejected with the offending line number.
namespace csop::cli {

enum class ValueType { integer, real, complex_number, real_list, text };

struct KeySpec {
  std::string name;
  ValueType type;
  std::optional<std::string> fallback;  // default; required when empty
  std::string help;
};

struct Schema {
  std::string subcommand;
  std::string summary;
  std::vector<KeySpec> keys;

  const KeySpec* find(std::string_view key) const;
};

const std::vector<Schema>& schemas();
/// Errc::invalid_argument for an unknown subcommand.
const Schema& schema_for(std::string_view subcommand);
std::string usage();

class RunConfig {
 public:
  std::string subcommand;
  std::map<std::string, std::string> values;  // validated text, defaults filled in
  std::vector<std::string> order;             // schema order, for serialization

  bool has(const std::string& key) const { return values.count(key) > 0; }
  long long integer(const std::string& key) const;
  double real(const std::string& key) const;
  cplx complex(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  const std::string& text(const std::string& key) const;
};

/// Errc::unknown_key, Errc::type_mismatch, Errc::missing_required.
RunConfig parse_config(std::string_view subcommand, std::string_view text);
std::string serialize(const RunConfig& cfg);

/// Range checks that can be made before any numerical work, e.g. q >= 0.
/// Errc::precondition_violated.
void validate(const RunConfig& cfg);

std::optional<double> parse_real(std::string_view s);
std::optional<cplx> parse_complex(std::string_view s);
std::optional<std::vector<double>> parse_real_list(std::string_view s);

}  // namespace csop::cli
