#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "scaleon/error.hpp"
#include "scaleon/scenario.hpp"

namespace {

// Default output directory when --out is absent.
constexpr const char* kOutEnv = "SCALEON_OUT";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run a scaled-field scenario and write CSV data plus a report."};
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool parallel = false;
  app.add_option("config", config_path, "Scenario configuration file")->required();
  app.add_option("--out", out_dir, std::string("Output directory (default: $") + kOutEnv + " or .)");
  auto* seed_opt = app.add_option("--seed", seed, "Override the configured seed");
  app.add_flag("--parallel", parallel, "Run independent checks concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : scaleon::exit_config_error;
  }

  if (out_dir.empty()) {
    const char* env = std::getenv(kOutEnv);
    out_dir = (env && *env) ? env : ".";
  }

  try {
    scaleon::ScenarioConfig config = scaleon::load_config(config_path);
    if (seed_opt->count() > 0) config.seed = seed;
    const scaleon::RunReport report = scaleon::run_scenario(config, {out_dir, parallel});

    std::size_t passed = 0;
    for (const auto& c : report.checks) {
      passed += c.passed;
      if (!c.passed) std::cout << "FAIL " << c.name << " (" << c.operation << ")\n";
    }
    std::cout << "scaleon: mode=" << scaleon::to_string(report.mode) << " seed=" << report.seed
              << " passed=" << passed << "/" << report.checks.size() << " out=" << out_dir << '\n';
    char wall[64];
    std::snprintf(wall, sizeof wall, "%.3f", report.wall_seconds);
    std::cout << "wall_seconds=" << wall << '\n';
    return report.all_passed() ? scaleon::exit_ok : scaleon::exit_check_failed;
  } catch (const scaleon::Error& e) {
    std::cerr << "scaleon: error [" << scaleon::to_string(e.code()) << "]: " << e.what() << '\n';
    return scaleon::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "scaleon: error: " << e.what() << '\n';
    return scaleon::exit_numeric_failure;
  }
}
