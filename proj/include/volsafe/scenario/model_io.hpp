#pragma once

#include <filesystem>
#include <string>

#include "volsafe/scenario/behavior.hpp"

namespace YAML {
class Node;
}

namespace volsafe {

/// Behavior-model files are YAML mappings:
///
///   name: veh_a
///   form: milanes        # or generalized
///   k1: 0.018
///   k2: 0.156
///   t_hw: 1.378          # milanes only
///   k3: 0.0              # generalized only
///   k4: 0.0              # generalized only
///   mobil:               # optional
///     politeness: 0.0
///     threshold: 0.1
///     safe_braking: 4.0
///
/// Errors are ConfigError with the offending key as path, prefixed by
/// `context` when given.
BehaviorModel parse_model(const YAML::Node& node, const std::string& context = "");
BehaviorModel parse_model_text(const std::string& text, const std::string& context = "");

/// Reads a model file; the name defaults to the file stem.
BehaviorModel load_model(const std::filesystem::path& path);

std::string format_model(const BehaviorModel& model);
void save_model(const BehaviorModel& model, const std::filesystem::path& path);

}  // namespace volsafe
