#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gh {

/// Suite configuration. scale multiplies the default sample counts; params
/// override per-suite numeric knobs (unknown keys are rejected at the CLI).
struct SuiteConfig {
  std::uint64_t seed = 1;
  double scale = 1.0;
  int threads = 1;
  std::string results_dir;  // empty keeps artifacts in memory only
  std::map<std::string, double> params;

  double param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }
};

struct SuiteResult {
  std::string name;
  long violations = 0;
  bool hard_pass = false;
  std::map<std::string, double> fitted_constants;
  // (filename, content); run_suite also writes them under results_dir
  std::vector<std::pair<std::string, std::string>> artifacts;
  std::string summary;
};

/// slow2 est mnp1 mm region od pu glob molecule repro jinf dcomp r1 riesz
const std::vector<std::string>& suite_names();

SuiteResult run_suite(const std::string& name, const SuiteConfig& config);

struct NormEquivalenceRow {
  std::string id;
  double a_prime = 0.0;
  int resolution = 0;  // 0 base, 1 refined
  double h1_quad = 0.0;
  double h1_max = 0.0;
  double ratio = 0.0;
};
struct NormEquivalenceReport {
  std::vector<NormEquivalenceRow> rows;
  std::map<double, double> spread_base;     // a' -> max/min ratio
  std::map<double, double> spread_refined;
  bool constant_row_exact = false;
  bool spread_bounded = false;       // < 50 everywhere
  bool spread_non_increasing = false;
  std::string csv;
};
NormEquivalenceReport norm_equivalence_experiment(const SuiteConfig& config);

struct RunAllResult {
  std::vector<SuiteResult> suites;
  std::string manifest_json;
  bool all_pass = false;
};
/// every suite plus the norm experiment; writes manifest.json and artifacts
/// under config.results_dir when set
RunAllResult run_all(const SuiteConfig& config);

}  // namespace gh
