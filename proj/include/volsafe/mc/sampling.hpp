#pragma once

#include <vector>

#include "volsafe/rng.hpp"
#include "volsafe/scenario/dynamics.hpp"
#include "volsafe/scenario/types.hpp"

namespace volsafe {

/// Where background vehicles are placed around the AV at t = 0.
///
/// Each slot receives one vehicle at a gap ~ U[d_min, d_max] ahead of
/// (lead_*) or behind (rear_*) the AV, in the AV lane or the adjacent lane
/// to the left/right.
struct SamplingLayout {
  int av_lane = 0;
  std::vector<Slot> slots{Slot::lead_same};
  /// Per-step probability that a BV intends a lane change (split evenly
  /// between left and right); the rollout drops inadmissible intents.
  double lateral_probability = 0.05;

  /// Leader-follower pair in one lane.
  static SamplingLayout single_lane();
  /// AV in the middle of three lanes with leader and follower in its own
  /// lane and in the left lane (the four vehicles MOBIL weighs); the right
  /// lane starts empty.
  static SamplingLayout multi_lane();
  /// single_lane() for one lane, multi_lane() for three; with two lanes the
  /// same four slots with the AV on the right.
  static SamplingLayout for_bounds(const ScenarioBounds& bounds);

  void validate(const ScenarioBounds& bounds) const;
};

/// Draws one scenario uniformly from the box. Draw order: slot gaps, AV
/// speed, BV speeds, then for each step and BV the acceleration followed by
/// one lateral-intent draw when lane_count > 1. For the single-lane layout
/// this is d0, v_f0, v_l0, a_0 .. a_{T-1}, so a scenario at horizon T is a
/// prefix of the same sample at any longer horizon.
TestingScenario sample_scenario(const ScenarioBounds& bounds, const SamplingLayout& layout,
                                StreamRng& rng);
TestingScenario sample_scenario(const ScenarioBounds& bounds, StreamRng& rng);

}  // namespace volsafe
