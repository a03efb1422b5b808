#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "pathuq/cli_support.hpp"
#include "pathuq/errors.hpp"

namespace {

using pathuq::cli::RunManifest;

// Leftover "--key value" tokens become scenario config overrides; numbers and
// booleans are typed, anything else stays a string.
void apply_overrides(const std::vector<std::string>& extras,
                     nlohmann::json& cfg) {
  for (size_t i = 0; i < extras.size(); ++i) {
    const std::string& tok = extras[i];
    if (tok.rfind("--", 0) != 0)
      throw pathuq::Error(pathuq::ErrorKind::invalid_argument,
                          "unexpected argument '" + tok + "'");
    std::string key = tok.substr(2);
    std::string value;
    const size_t eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extras.size())
        throw pathuq::Error(pathuq::ErrorKind::invalid_argument,
                            "missing value for '--" + key + "'");
      value = extras[++i];
    }
    if (value == "true" || value == "false") {
      cfg[key] = (value == "true");
      continue;
    }
    if (!value.empty() && value.front() == '[') {
      cfg[key] = pathuq::cli::parse_toml("v = " + value)["v"];
      continue;
    }
    try {
      size_t used = 0;
      const double num = std::stod(value, &used);
      if (used == value.size()) {
        cfg[key] = num;
        continue;
      }
    } catch (const std::exception&) {
    }
    cfg[key] = value;
  }
}

RunManifest build_manifest(const std::string& scenario,
                           const std::string& config_path,
                           const std::vector<std::string>& extras,
                           std::uint64_t seed, int threads,
                           const std::string& out_path) {
  if (!pathuq::cli::known_scenario(scenario))
    throw pathuq::Error(pathuq::ErrorKind::invalid_argument,
                        "unknown scenario '" + scenario + "'");
  RunManifest manifest;
  manifest.scenario = scenario;
  manifest.config = pathuq::cli::default_config(scenario);
  if (!config_path.empty()) {
    const nlohmann::json file = pathuq::cli::parse_config_file(config_path);
    const auto table = file.find(scenario);
    if (table != file.end()) {
      for (auto it = table->begin(); it != table->end(); ++it)
        manifest.config[it.key()] = it.value();
    }
  }
  apply_overrides(extras, manifest.config);
  manifest.seed = seed;
  manifest.threads = threads;
  manifest.out_path = out_path;
  return manifest;
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw pathuq::Error(pathuq::ErrorKind::invalid_argument,
                        "cannot write output file: " + path);
  out << content;
}

int default_threads() {
  if (const char* env = std::getenv("PATHUQ_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path-space uncertainty-quantification bounds"};
  app.require_subcommand(1);

  std::string scenario, config_path, out_path;
  std::uint64_t seed = 1;
  int threads = default_threads();
  bool validate_flag = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("scenario", scenario, "scenario id")->required();
    cmd->add_option("--config", config_path, "TOML or JSON config file");
    cmd->add_option("--out", out_path, "output path (CSV or JSON report)");
    cmd->add_option("--seed", seed, "Monte-Carlo seed");
    cmd->add_option("--threads", threads, "worker threads");
    cmd->allow_extras();
  };

  CLI::App* run_cmd = app.add_subcommand("run", "compute bound curves");
  add_common(run_cmd);
  run_cmd->add_flag("--validate", validate_flag,
                    "run Monte-Carlo validation instead of emitting curves");
  CLI::App* val_cmd =
      app.add_subcommand("validate", "Monte-Carlo containment checks");
  add_common(val_cmd);

  CLI11_PARSE(app, argc, argv);
  const bool do_validate = val_cmd->parsed() || validate_flag;
  CLI::App* active = val_cmd->parsed() ? val_cmd : run_cmd;

  try {
    const RunManifest manifest = build_manifest(
        scenario, config_path, active->remaining(), seed, threads, out_path);
    if (do_validate) {
      const nlohmann::json report = pathuq::cli::validate_scenario(manifest);
      write_or_print(out_path, report.dump(2) + "\n");
      return report["pass"].get<bool>() ? 0 : 1;
    }
    const auto start = std::chrono::steady_clock::now();
    const auto table = pathuq::cli::run_scenario(manifest);
    const double elapsed_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start)
            .count();
    write_or_print(out_path, pathuq::cli::curve_to_csv(table));
    if (!out_path.empty()) {
      const auto sidecar = pathuq::cli::run_sidecar(manifest, table, elapsed_ms);
      write_or_print(out_path + ".json", sidecar.dump(2) + "\n");
    }
    return 0;
  } catch (const pathuq::Error& e) {
    const bool config_side = e.kind() == pathuq::ErrorKind::invalid_argument;
    std::cerr << "error: " << e.what() << "\n";
    return config_side ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
