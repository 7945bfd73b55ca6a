// Acceptance suite: one PASS/FAIL line per criterion. `--only N` runs a single one.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "orbitlets/config.hpp"
#include "orbitlets/covering.hpp"
#include "orbitlets/scenarios.hpp"

using namespace orbitlets;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    note((ok ? "" : "[fail] ") + what);
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Config config(const std::string& group, std::initializer_list<std::pair<const char*, std::string>> overrides = {}) {
  Config c;
  c.set("group", group);
  for (const auto& [k, v] : overrides) c.set(k, v);
  return c;
}

// All assertions of a scenario, optionally only those whose name contains `filter`.
void fold(Verdict& v, const std::string& tag, const ScenarioResult& r, const std::string& filter = "") {
  for (const auto& a : r.assertions)
    if (filter.empty() || a.name.find(filter) != std::string::npos) v.require(a.passed, (tag.empty() ? "" : tag + " ") + a.name + ": " + a.detail);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

const char* kCharts[] = {"dyadic1d", "similitude2d", "shearlet2d"};

// 1. Parseval relation with runtime bound.
Verdict check_parseval() {
  Verdict v;
  for (const char* g : {"similitude2d", "shearlet2d"}) {
    const auto t0 = Clock::now();
    const ScenarioResult r = run_scenario("parseval-check", config(g, {{"functions", "5"}, {"grid.n", "512"}}));
    const double secs = seconds_since(t0);
    fold(v, g, r);
    v.require(secs < 60.0, std::string(g) + " runtime " + fmt(secs) + " s < 60 s (" +
                               std::to_string(r.report["max_nodes"].get<long>()) + " nodes max)");
  }
  return v;
}

// 2-4 share the BAPU scenario; the index window keeps the similitude and shearlet runs short.
ScenarioResult bapu_run(const std::string& g) {
  return run_scenario("bapu-check",
                      config(g, {{"index.scale_lo", "-1"}, {"index.scale_hi", "1"}, {"index.shear", "1"}}));
}

Verdict check_calderon() {
  Verdict v;
  for (const char* g : kCharts) fold(v, g, bapu_run(g), "Calderon");
  return v;
}

Verdict check_partition() {
  Verdict v;
  for (const char* g : kCharts) fold(v, g, bapu_run(g), "partition of unity");
  return v;
}

Verdict check_l1() {
  Verdict v;
  for (const char* g : kCharts) fold(v, g, bapu_run(g), "L1");
  return v;
}

// 5. Cluster certificates.
Verdict check_clusters() {
  Verdict v;
  const ScenarioResult sim = run_scenario("covering-stats", config("similitude2d", {{"index.scale_lo", "-8"}, {"index.scale_hi", "8"}}));
  const auto n0 = sim.report["max_cluster"].get<std::size_t>();
  v.require(n0 == 3, "similitude max cluster " + std::to_string(n0) + " == 3");

  const Covering affine = affine_translates(BaseSet::interval(-0.75, 0.75), -20, 20);
  const ClusterTable t = clusters(affine);
  bool local = t.exact;
  for (std::size_t m = 0; m < affine.size(); ++m)
    for (int n : t.neighbors[m])
      local = local && std::abs(affine.members()[std::size_t(n)].index.scale - affine.members()[m].index.scale) <= 1;
  v.require(local, "affine clusters within {i-1, i, i+1}");

  // Cluster sizes keep growing until the shear range reaches 16; radius 24 is the
  // smallest tested window whose constants survive doubling.
  const ScenarioResult sh = run_scenario(
      "covering-stats", config("shearlet2d", {{"index.scale_lo", "-5"}, {"index.scale_hi", "5"}, {"index.shear", "24"}}));
  fold(v, "shearlet |j|<=5 |k|<=24", sh, "doubles");
  const ScenarioResult small = run_scenario(
      "covering-stats", config("shearlet2d", {{"index.scale_lo", "-5"}, {"index.scale_hi", "5"}, {"index.shear", "12"}}));
  v.note("shearlet |k|<=12 for reference: n0 " + std::to_string(small.report["max_cluster"].get<std::size_t>()) +
         " -> " + std::to_string(small.report["doubled_window"]["max_cluster"].get<std::size_t>()));
  return v;
}

// 6. Localization identity.
Verdict check_localization() {
  Verdict v;
  for (const char* g : {"dyadic1d", "similitude2d"}) fold(v, g, run_scenario("localization-check", config(g, {{"grid.n", "128"}})));
  return v;
}

// 7. Cauchy example.
Verdict check_cauchy() {
  Verdict v;
  const ScenarioResult r = run_scenario("cauchy-example", Config());
  fold(v, "", r);
  Config c;
  c.set("cauchy.n", "2");
  c.set("cauchy.m", "1");
  fold(v, "(2,1)", run_scenario("cauchy-example", c), "closed form");
  return v;
}

// 8. Norm equivalence over a 10-function family per chart.
Verdict check_equivalence() {
  Verdict v;
  for (const char* g : kCharts) {
    const ScenarioResult r = run_scenario("equivalence", config(g, {{"functions", "10"}}));
    fold(v, std::string(g) + " p=q=2", r);
  }
  fold(v, "dyadic1d p=q=1", run_scenario("equivalence", config("dyadic1d", {{"p", "1"}, {"q", "1"}})));
  return v;
}

// 9. Shearlet rotation non-invariance.
Verdict check_shear_rotation() {
  Verdict v;
  const auto t0 = Clock::now();
  const ScenarioResult r = run_scenario("shear-rotation", config("shearlet2d"));
  const double secs = seconds_since(t0);
  fold(v, "", r);
  v.require(secs < 300.0, "runtime " + fmt(secs) + " s < 300 s");
  return v;
}

// 10. Covariance identity.
Verdict check_covariance() {
  Verdict v;
  for (const char* g : {"similitude2d", "shearlet2d"}) fold(v, g, run_scenario("covariance-check", config(g, {{"points", "100"}})));
  return v;
}

// 11. Similitude dilation invariance.
Verdict check_dilation() {
  Verdict v;
  fold(v, "", run_scenario("dilation-invariance", config("similitude2d")));
  return v;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "Parseval relation", check_parseval},
      {2, "Calderon constancy", check_calderon},
      {3, "partition of unity", check_partition},
      {4, "BAPU L1 bound", check_l1},
      {5, "cluster certificates", check_clusters},
      {6, "localization identity", check_localization},
      {7, "Cauchy example", check_cauchy},
      {8, "norm equivalence", check_equivalence},
      {9, "shearlet rotation non-invariance", check_shear_rotation},
      {10, "covariance identity", check_covariance},
      {11, "similitude dilation invariance", check_dilation},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: orbitlets_acceptance [--only N]\n";
      return 2;
    }
  }
  bool all_pass = true, ran = false;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    ran = true;
    Verdict v;
    const auto t0 = Clock::now();
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("error: ") + e.what());
    }
    all_pass = all_pass && v.pass;
    std::cout << "criterion " << c.id << " " << (v.pass ? "PASS" : "FAIL") << " (" << c.title << ", "
              << fmt(seconds_since(t0)) << " s): " << v.detail << std::endl;
  }
  if (!ran) {
    std::cerr << "no criterion " << only << '\n';
    return 2;
  }
  return all_pass ? 0 : 1;
}
