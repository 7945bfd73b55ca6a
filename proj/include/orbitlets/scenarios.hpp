#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "orbitlets/bapu.hpp"
#include "orbitlets/config.hpp"
#include "orbitlets/covering.hpp"
#include "orbitlets/grid.hpp"
#include "orbitlets/weights.hpp"
#include "orbitlets/window.hpp"

namespace orbitlets {

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct RawGrid {
  std::string name;
  SampledSignal signal;
};

struct ScenarioResult {
  std::string scenario;
  nlohmann::json report = nlohmann::json::object();
  std::vector<Table> tables;
  std::vector<Assertion> assertions;
  std::vector<RawGrid> grids;

  bool passed() const;
  bool check(const std::string& name, bool ok, const std::string& detail);
  Table& table(const std::string& name, std::vector<std::string> header);
  /// Report with the assertions folded in.
  nlohmann::json to_json() const;
};

/// Everything derived from a configuration that several scenarios share.
struct Setup {
  GroupChart chart;
  WellSpreadFamily family;
  AnalyticWindow window;
  IndexWindow index;
  WeightSpec weight;
  double p = 2.0;
  double q = 2.0;

  /// Chart from `group`, analyzing window from `window.*`, and so on. The window must
  /// lie inside the orbit unless `allow_off_orbit`.
  static Setup from(const Config& c, bool allow_off_orbit = false);
  /// quad.nodes*, with zeros replaced by `fallback`.
  static QuadratureSpec quadrature(const Config& c, const QuadratureSpec& fallback);
};

/// Signal from the `input.<n>` keys; each is center, radius, coefficient (re, im) and an
/// optional spatial shift.
FrequencySignal signal_from_config(const Config& c, int dim);

/// Random bump sums inside the orbit at varied scales, directions and positions.
std::vector<FrequencySignal> random_family(const GroupChart& chart, int count, std::mt19937_64& rng);

/// Orbit points whose every possibly-nonzero phi_i belongs to the index window.
std::vector<Vec> safe_probes(const Bapu& bapu, const IndexWindow& w, int count, std::mt19937_64& rng);

using Scenario = std::function<ScenarioResult(const Config&)>;

ScenarioResult run_covering_stats(const Config& c);
ScenarioResult run_bapu_check(const Config& c);
ScenarioResult run_decomp_norm(const Config& c);
ScenarioResult run_coorbit_norm(const Config& c);
ScenarioResult run_parseval_check(const Config& c);
ScenarioResult run_localization_check(const Config& c);
ScenarioResult run_covariance_check(const Config& c);
ScenarioResult run_equivalence(const Config& c);
ScenarioResult run_shear_rotation(const Config& c);
ScenarioResult run_dilation_invariance(const Config& c);
ScenarioResult run_cauchy_example(const Config& c);

/// Scenario names in CLI order.
std::vector<std::string> scenario_names();
/// Throws std::invalid_argument for unknown names.
ScenarioResult run_scenario(const std::string& name, const Config& c);

void write_csv(const Table& t, const std::string& dir);
/// <name>.bin holds (re, im) pairs as little-endian float64 in DFT order; <name>.txt
/// records dimension, N, extent, center and domain.
void write_raw_grid(const RawGrid& g, const std::string& dir);

/// Least-squares line y = a + b x with its coefficient of determination.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace orbitlets
