#pragma once
#include <json.hpp>
#include <string>

#include "pathuq/scenarios.hpp"

namespace pathuq::cli {

// Scenario identifiers accepted by the front end.
bool known_scenario(const std::string& id);
const std::vector<std::string>& scenario_ids();

struct RunManifest {
  std::string scenario;
  nlohmann::json config;  // merged scenario table (defaults < file < flags)
  std::string out_path;   // empty: CSV to stdout
  std::uint64_t seed = 1;
  int threads = 1;
};

// Parse a config file: TOML (one table per scenario, single- or multi-line
// arrays, nested arrays for matrices) or JSON, chosen by content/extension.
nlohmann::json parse_config_file(const std::string& path);
nlohmann::json parse_toml(const std::string& text);

// Defaults for a scenario; unknown ids throw Error{invalid_argument}.
nlohmann::json default_config(const std::string& scenario);

// Execute the scenario described by the manifest.
scen::CurveTable run_scenario(const RunManifest& manifest);

// Shortest-round-trip decimal formatting.
std::string double_to_string(double v);

// CSV with header sweep,baseline,lower,upper,ref_lower,ref_upper,status;
// NaN sweeps print as '-', missing references as empty fields.
std::string curve_to_csv(const scen::CurveTable& table);
scen::CurveTable csv_to_curve(const std::string& csv);

// Sidecar document with the full config, library version and timings.
nlohmann::json run_sidecar(const RunManifest& manifest,
                           const scen::CurveTable& table, double elapsed_ms);

// Monte-Carlo validation of the scenario's bounds; the report lists one
// PASS/FAIL entry per check.
nlohmann::json validate_scenario(const RunManifest& manifest);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pathuq::cli
