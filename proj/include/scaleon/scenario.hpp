#pragma once

// Batch scenarios: a sectioned key=value configuration selects one mode,
// the runner executes that mode's checks and writes CSV artifacts plus a
// plain-text report. See docs/config_format.md for the file format.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scaleon/gauge.hpp"
#include "scaleon/geometry.hpp"
#include "scaleon/spacetime.hpp"

namespace scaleon {

enum class Mode { algebra_check, gauge_check, kg, dirac, qed, higgs, length, proper_time, geodesic };

std::string_view to_string(Mode mode) noexcept;
std::optional<Mode> parse_mode(std::string_view text) noexcept;

struct PathConfig {
  /// p^μ(s) as expressions in s; ignored when `table` is set.
  std::array<std::string, 4> components{"s", "0", "0", "0"};
  double s0 = 0.0;
  double s1 = 1.0;
  std::size_t samples = 201;
  /// CSV path table (tau,p0..p3), resolved relative to the config file.
  std::string table;
  CausalKind kind = CausalKind::timelike;
  Point x_ref{};
};

struct GeodesicConfig {
  Point position{};
  Vector4 velocity{1.0, 0.0, 0.0, 0.0};
  double tau = 1.0;
  double step = 0.01;
};

struct ScenarioConfig {
  Mode mode = Mode::algebra_check;
  std::uint64_t seed = 42;
  GridSpec grid{2, {33, 33, 1, 1}, {0.1, 0.1, 1.0, 1.0}, {}};
  std::string alpha = "0";
  std::string beta = "0";
  std::array<std::string, 4> P{"0", "0", "0", "0"};
  std::array<std::array<std::string, 4>, 3> w{{{"0", "0", "0", "0"}, {"0", "0", "0", "0"}, {"0", "0", "0", "0"}}};
  /// Matter field; empty selects a seeded random smooth field.
  std::string psi_re;
  std::string psi_im;
  std::string gauge_a = "0";
  std::string gauge_b = "0";
  CouplingSet couplings;
  PathConfig path;
  GeodesicConfig geodesic;
  /// Random cases per sampled check.
  std::size_t cases = 20;
  /// Finite-difference step for derivative cross-checks.
  double step = 1e-3;
  std::filesystem::path base_dir;
};

struct ConfigIssue {
  std::size_t line = 0;
  std::string message;
};

struct ParseResult {
  std::optional<ScenarioConfig> config;
  std::vector<ConfigIssue> issues;
};

/// Parses and validates; on failure `config` is empty and every problem is
/// listed with its line number (0 for whole-file problems).
ParseResult parse_config(std::string_view text);

/// Throws Error(ConfigError) carrying all issues.
ScenarioConfig load_config(const std::filesystem::path& path);

/// How `measured` is judged against `tolerance`.
enum class Criterion {
  /// measured ≤ tolerance; measured is an error with expected value 0.
  at_most,
  /// measured ≥ tolerance; used for convergence orders and ratios.
  at_least,
  /// |measured − expected| ≤ tolerance·|expected|.
  relative,
};

std::string_view to_string(Criterion criterion) noexcept;

struct CheckResult {
  std::string name;
  /// Library operation the check exercises.
  std::string operation;
  double measured = 0.0;
  std::optional<double> expected;
  double tolerance = 0.0;
  Criterion criterion = Criterion::at_most;
  bool passed = false;
  /// Extra named values reported alongside the check.
  std::vector<std::pair<std::string, double>> details;
};

struct RunReport {
  Mode mode = Mode::algebra_check;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  std::vector<std::string> artifacts;
  double wall_seconds = 0.0;

  bool all_passed() const;
};

struct RunOptions {
  std::filesystem::path out_dir = ".";
  bool parallel = false;
};

/// Runs the configured mode and writes report.txt, report.csv and the
/// mode's data CSV into out_dir. Library errors propagate as Error.
RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options);

/// key=value summary; byte-stable for a given config (wall time omitted).
void write_report_text(std::ostream& out, const RunReport& report);
void write_report_csv(std::ostream& out, const RunReport& report);

enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_config_error = 2, exit_numeric_failure = 3 };

/// Exit status for a library error code.
int exit_code_for(ErrorCode code) noexcept;

}  // namespace scaleon
