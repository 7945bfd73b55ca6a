#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orbitlets/config.hpp"
#include "orbitlets/scenarios.hpp"

using namespace orbitlets;

int main(int argc, char** argv) {
  CLI::App app{"Coorbit and decomposition norms on dilation groups"};
  std::string scenario, config_path, csv_dir, json_path;
  std::vector<std::string> overrides;
  std::string group;

  std::string names;
  for (const auto& n : scenario_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("scenario", scenario, "one of: " + names)->required();
  app.add_option("--config", config_path, "flat key = value configuration file");
  app.add_option("--override", overrides, "key=value, applied after the file")->take_all();
  app.add_option("--group", group, "shortcut for --override group=...");
  app.add_option("--emit-csv", csv_dir, "directory for CSV tables and raw grids");
  app.add_option("--json", json_path, "write the JSON report here instead of stdout");
  app.add_flag_callback(
      "--list-keys",
      [] {
        for (const auto& k : Config::schema())
          std::cout << k.key << " (default '" << k.fallback << "'): " << k.help << '\n';
        std::cout << "input.<n>: center, radius, coefficient re, im, optional shift\n";
        std::exit(0);
      },
      "print configuration keys and exit");
  CLI11_PARSE(app, argc, argv);

  try {
    Config config = config_path.empty() ? Config() : Config::load(config_path);
    if (!group.empty()) config.set("group", group);
    for (const auto& o : overrides) config.apply_override(o);

    const ScenarioResult result = run_scenario(scenario, config);
    const std::string text = result.to_json().dump(2);
    if (json_path.empty()) {
      std::cout << text << '\n';
    } else {
      std::ofstream out(json_path);
      if (!out) throw std::runtime_error("cannot write " + json_path);
      out << text << '\n';
    }
    if (!csv_dir.empty()) {
      for (const auto& t : result.tables) write_csv(t, csv_dir);
      for (const auto& g : result.grids) write_raw_grid(g, csv_dir);
    }
    for (const auto& a : result.assertions)
      std::cerr << (a.passed ? "ok   " : "FAIL ") << a.name << ": " << a.detail << '\n';
    return result.passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
