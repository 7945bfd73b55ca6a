#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace orbitlets {

enum class ValueType { integer, real, text, reals, integers };

struct KeySpec {
  std::string key;
  ValueType type;
  std::string fallback;
  std::string help;
};

/// Flat typed key = value configuration. Lines are `key = value`, `#` starts a comment.
/// Keys must belong to the schema; `input.<n>` keys are lists of reals describing one
/// frequency bump each. Values are type-checked when set.
class Config {
 public:
  Config();

  static const std::vector<KeySpec>& schema();
  static Config parse(std::istream& in, const std::string& origin = "<config>");
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  /// "key=value"
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  long integer(const std::string& key) const;
  double real(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<long> integers(const std::string& key) const;
  /// Keys with the given prefix, in natural order (input.2 before input.10).
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  /// Every schema key with its resolved value plus the input keys.
  nlohmann::json resolved() const;

 private:
  const KeySpec& spec_of(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

double parse_real(const std::string& text, const std::string& key);
long parse_integer(const std::string& text, const std::string& key);

}  // namespace orbitlets
