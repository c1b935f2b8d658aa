#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "volsafe/cli/config.hpp"

namespace volsafe::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,  ///< bad config, flags or input files
  kExitRuntime = 3,
  kExitInfeasible = 4,  ///< empty/unbounded polytope or a size guard
};

/// Maps an exception raised by a command to its process exit code.
int exit_code_for(const std::exception& e) noexcept;

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> samples;
  std::optional<DomainMode> mode;
  std::optional<std::vector<Engine>> engines;
  /// Sets bounds.horizon; for poly-vol it replaces the horizon list.
  std::optional<int> horizon;
  std::optional<CfForm> form;
  std::vector<std::filesystem::path> inputs;  ///< calibrate trajectories
};

void apply_overrides(RunConfig& config, const Overrides& overrides);

struct CommandResult {
  std::vector<std::filesystem::path> files;  ///< written, in order
  nlohmann::json report;
};

/// Per model: <out>/<name>_histogram.csv and <out>/<name>_report.json.
CommandResult cmd_mc_eval(const RunConfig& config);

struct PolyVolRow {
  int horizon = 0;
  Engine engine = Engine::mc;
  bool feasible = true;
  double percent = 0.0;  ///< dangerous proportion, in percent
  double runtime_seconds = 0.0;
  std::optional<double> rel_error_vs_ve;  ///< percent, when VE ran for this horizon
  std::string note;
};

/// Dangerous share at poly.eta for the first model, one row per
/// (horizon, engine). MC runs in polytope_consistent mode. VE above the
/// dimension guard yields an infeasible row.
/// Files: <out>/poly_vol.csv, <out>/poly_vol_report.json.
CommandResult cmd_poly_vol(const RunConfig& config, std::vector<PolyVolRow>* rows = nullptr);

/// Needs two or more models. Files: <out>/ranking.csv, <out>/ranking.json
/// and <out>/<name>_cumulative.csv per model.
CommandResult cmd_rank(const RunConfig& config);

/// Fits calibrate.form to each of calibrate.inputs. Files: <out>/<stem>.yaml
/// per input, <out>/calibration.csv and <out>/calibration_report.json.
CommandResult cmd_calibrate(const RunConfig& config);

}  // namespace volsafe::cli
