#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "volsafe/calibrate/trajectory.hpp"
#include "volsafe/mc/estimator.hpp"
#include "volsafe/mc/sampling.hpp"
#include "volsafe/scenario/behavior.hpp"
#include "volsafe/scenario/types.hpp"

namespace YAML {
class Node;
}

namespace volsafe::cli {

enum class Engine { mc, ve, sob, cg };

std::string_view to_string(Engine e) noexcept;
Engine parse_engine(std::string_view s);

struct PolyVolSettings {
  double eta = 1.0;
  std::vector<int> horizons{1, 2, 3, 4, 5};
  double epsilon = 0.05;
  int walk_length = 0;
  double sob_factor = 1.0;
  double cg_factor = 4.0;
  double cooling_gamma = 0.0;
  /// VE is refused (row marked infeasible) above this reduced dimension.
  int ve_max_dimension = 10;
};

struct CalibrateSettings {
  CfForm form = CfForm::milanes;
  std::vector<std::filesystem::path> inputs;
  TrajectoryFormat format;
};

/// Fully resolved run configuration. Relative paths in the file (models,
/// includes, trajectories, out) are resolved against the file's directory.
struct RunConfig {
  std::filesystem::path source;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";
  ScenarioBounds bounds;
  std::vector<std::filesystem::path> model_paths;
  std::vector<BehaviorModel> models;
  RiskBinning binning = RiskBinning::defaults();
  std::vector<Engine> engines{Engine::mc};
  McConfig mc;
  double lateral_probability = SamplingLayout{}.lateral_probability;
  PolyVolSettings poly;
  double rank_eta = 5.0;
  CalibrateSettings calibrate;

  SamplingLayout layout() const;
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Reads a YAML file and merges its `include:` entries (a path or a list),
/// included files first, so the including file overrides them key by key.
YAML::Node load_config_tree(const std::filesystem::path& path);

/// Builds a RunConfig from an already merged tree. Unknown keys are
/// rejected. Models are loaded immediately.
RunConfig parse_run_config(const YAML::Node& tree, const std::filesystem::path& base_dir);

RunConfig load_run_config(const std::filesystem::path& path);

/// Echo of every resolved field, embedded in each report.
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace volsafe::cli
