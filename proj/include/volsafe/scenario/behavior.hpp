#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace volsafe {

enum class CfForm { generalized, milanes };

/// Linear car-following law in one of two parametrisations.
///
///  generalized: a = k1*v_f + k2*v_l + k3*gap + k4
///  milanes:     a = k1*(gap - t_hw*v_f) + k2*(v_l - v_f)
///
/// For the Milanes form the position difference x_l - x_f is the same
/// front-to-front `gap` used by the TTC metric. k3, k4 are ignored for
/// milanes and t_hw for generalized.
struct LinearCfParams {
  CfForm form = CfForm::milanes;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double k4 = 0.0;
  double t_hw = 1.0;

  static LinearCfParams generalized(double k1, double k2, double k3, double k4) {
    return {CfForm::generalized, k1, k2, k3, k4, 0.0};
  }
  static LinearCfParams milanes(double k1, double k2, double t_hw) {
    return {CfForm::milanes, k1, k2, 0.0, 0.0, t_hw};
  }

  void validate() const;
  bool operator==(const LinearCfParams&) const = default;
};

struct MobilParams {
  double politeness = 0.0;
  double threshold = 0.1;     ///< a_th, m/s^2
  double safe_braking = 4.0;  ///< max deceleration imposed on the new follower

  void validate() const;
  bool operator==(const MobilParams&) const = default;
};

/// Tested-vehicle controller: longitudinal linear CF law plus an optional
/// MOBIL lane-change rule (used only when more than one lane exists).
struct BehaviorModel {
  std::string name;
  LinearCfParams cf;
  std::optional<MobilParams> mobil;

  /// Unclamped longitudinal acceleration for the given follower/leader pair.
  double accel(double v_follower, double v_leader, double gap) const;
};

double linear_cf_accel(const LinearCfParams& params, double v_f, double v_l, double gap);
double milanes_accel(const LinearCfParams& params, double v_f, double v_l, double gap);

/// Rewrites a Milanes law in generalized form; both produce the same
/// acceleration for every input.
LinearCfParams milanes_to_generalized(const LinearCfParams& params);

/// Generalized form of any linear law (identity for generalized input).
LinearCfParams to_generalized(const LinearCfParams& params);

enum class LaneDecision { keep, change };

/// MOBIL incentive and safety criterion. Change iff
///   ego_gain + f*(new_follower_delta + old_follower_delta) > a_th
/// and the deceleration imposed on the new follower is within the limit.
LaneDecision mobil_decide(double ego_gain, double new_follower_delta, double old_follower_delta,
                          double new_follower_required_decel, const MobilParams& params);

std::string_view to_string(CfForm f) noexcept;
CfForm parse_cf_form(std::string_view s);

}  // namespace volsafe
