#include "orbitlets/config.hpp"

#include "orbitlets/linalg.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace orbitlets {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool is_input_key(const std::string& key) {
  if (key.rfind("input.", 0) != 0 || key.size() == 6) return false;
  return std::all_of(key.begin() + 6, key.end(), [](char c) { return c >= '0' && c <= '9'; });
}

const KeySpec kInputSpec{"input.<n>", ValueType::reals, "",
                         "bump term: center (d values), radius, coefficient re, im, optional shift (d values)"};

}  // namespace

double parse_real(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity") return kInf;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
    throw std::invalid_argument("key '" + key + "': '" + text + "' is not a real number");
  return v;
}

long parse_integer(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
    throw std::invalid_argument("key '" + key + "': '" + text + "' is not an integer");
  return v;
}

const std::vector<KeySpec>& Config::schema() {
  static const std::vector<KeySpec> keys = {
      {"group", ValueType::text, "shearlet2d", "dyadic1d | similitude2d | shearlet2d"},
      {"seed", ValueType::integer, "20240601", "seed of the test-function family"},
      {"functions", ValueType::integer, "10", "size of the random test-function family"},
      {"grid.n", ValueType::integer, "512", "samples per axis of frequency grids"},
      {"grid.extent", ValueType::real, "0", "half width of the frequency grid; 0 picks it from the support"},
      {"slice.n", ValueType::integer, "128", "minimum samples per axis of slice grids"},
      {"quad.nodes0", ValueType::integer, "0", "nodes per cell along the scale coordinate; 0 = chart default"},
      {"quad.nodes1", ValueType::integer, "0", "nodes per cell along the second coordinate; 0 = chart default"},
      {"index.scale_lo", ValueType::integer, "-3", "lowest lattice scale"},
      {"index.scale_hi", ValueType::integer, "3", "highest lattice scale"},
      {"index.shear", ValueType::integer, "3", "largest |shear| index"},
      {"window.kind", ValueType::text, "default", "default | bump | plateau"},
      {"window.center", ValueType::reals, "", "window center; empty = chart default"},
      {"window.radius", ValueType::real, "0.5", "outer radius of the window"},
      {"window.inner", ValueType::real, "0.5", "plateau radius relative to the outer radius"},
      {"weight.det_exponent", ValueType::real, "0", "s in v(h) = |det h|^s (...)"},
      {"weight.norm_exponents", ValueType::reals, "0,0", "t1, t2 in v(h) = |det h|^s ||h||^t1 ||h^-1||^t2"},
      {"p", ValueType::real, "2", "integrability exponent; inf allowed"},
      {"q", ValueType::real, "2", "summability exponent; inf allowed"},
      {"probes", ValueType::integer, "1000", "number of orbit probes"},
      {"covering.base", ValueType::text, "auto", "auto | classic | bapu: base set Q of the induced covering"},
      {"coorbit.grid", ValueType::text, "support", "support | window: group cells used by coorbit-norm"},
      {"freq_extent", ValueType::real, "8", "half width of the frequency box examined by covering-stats"},
      {"epsilons", ValueType::reals, "0.125,0.0625,0.03125,0.015625,0.0078125,0.00390625",
       "decreasing band cutoffs of the shear-rotation experiment"},
      {"g", ValueType::reals, "", "dilation matrix, row major (one value on the line)"},
      {"cell", ValueType::integers, "0,0,1", "lattice cell: scale, shear, branch"},
      {"points", ValueType::integer, "100", "random (x, h) pairs for covariance-check"},
      {"cauchy.n", ValueType::integer, "8", "upper partial sum index"},
      {"cauchy.m", ValueType::integer, "3", "lower partial sum index"},
  };
  return keys;
}

Config::Config() {
  for (const auto& k : schema()) values_[k.key] = k.fallback;
}

const KeySpec& Config::spec_of(const std::string& key) const {
  if (is_input_key(key)) return kInputSpec;
  for (const auto& k : schema())
    if (k.key == key) return k;
  throw std::invalid_argument("unknown configuration key '" + key + "'");
}

void Config::set(const std::string& key, const std::string& value) {
  const KeySpec& spec = spec_of(key);
  const std::string v = trim(value);
  switch (spec.type) {
    case ValueType::integer: parse_integer(v, key); break;
    case ValueType::real: parse_real(v, key); break;
    case ValueType::reals:
      for (const auto& item : split_list(v)) parse_real(item, key);
      break;
    case ValueType::integers:
      for (const auto& item : split_list(v)) parse_integer(item, key);
      break;
    case ValueType::text: break;
  }
  values_[key] = v;
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("override '" + assignment + "' is not key=value");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

Config Config::parse(std::istream& in, const std::string& origin) {
  Config c;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(origin + ":" + std::to_string(number) + ": expected key = value");
    try {
      c.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(origin + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  return parse(in, path);
}

long Config::integer(const std::string& key) const {
  if (spec_of(key).type != ValueType::integer) throw std::logic_error("key '" + key + "' is not an integer");
  return parse_integer(values_.at(key), key);
}

double Config::real(const std::string& key) const {
  if (spec_of(key).type != ValueType::real) throw std::logic_error("key '" + key + "' is not a real");
  return parse_real(values_.at(key), key);
}

std::string Config::text(const std::string& key) const {
  spec_of(key);
  return values_.at(key);
}

std::vector<double> Config::reals(const std::string& key) const {
  if (spec_of(key).type != ValueType::reals) throw std::logic_error("key '" + key + "' is not a list of reals");
  const auto it = values_.find(key);
  std::vector<double> out;
  if (it == values_.end()) return out;
  for (const auto& item : split_list(it->second)) out.push_back(parse_real(item, key));
  return out;
}

std::vector<long> Config::integers(const std::string& key) const {
  if (spec_of(key).type != ValueType::integers) throw std::logic_error("key '" + key + "' is not a list of integers");
  std::vector<long> out;
  for (const auto& item : split_list(values_.at(key))) out.push_back(parse_integer(item, key));
  return out;
}

std::vector<std::string> Config::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (k.rfind(prefix, 0) == 0) out.push_back(k);
  std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

nlohmann::json Config::resolved() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

}  // namespace orbitlets
