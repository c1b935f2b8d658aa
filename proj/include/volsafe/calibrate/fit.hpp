#pragma once

#include <string>
#include <vector>

#include "volsafe/calibrate/trajectory.hpp"
#include "volsafe/scenario/behavior.hpp"

namespace volsafe {

struct CalibrationResult {
  LinearCfParams params;
  double rmse = 0.0;  ///< root mean squared acceleration residual
  std::size_t n_points = 0;
  double residual_min = 0.0;
  double residual_max = 0.0;
  double residual_mean = 0.0;
  std::vector<std::string> warnings;
};

/// Least-squares fit of follower acceleration.
///
///  generalized: a = k1 vf + k2 vl + k3 gap + k4
///  milanes:     a = c1 gap - c2 vf + c3 (vl - vf), then k1 = c1,
///               t_hw = c2 / c1, k2 = c3
///
/// Needs at least 10 records. Throws InvalidArgument on rank-deficient
/// regressors. A non-positive recovered t_hw is kept and flagged in
/// `warnings`.
CalibrationResult fit_linear(const std::vector<TrajectoryRecord>& records, CfForm form);

}  // namespace volsafe
