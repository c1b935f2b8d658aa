#pragma once

#include <variant>
#include <vector>

#include "volsafe/scenario/behavior.hpp"
#include "volsafe/scenario/types.hpp"

namespace volsafe {

/// Either a completed rollout or, in polytope_consistent mode, the first
/// domain violation (the sample lies outside the scenario space).
using RolloutResult = std::variant<RolloutOutcome, BoundViolation>;

/// Optional per-step record, filled when passed to rollout().
struct RolloutTrace {
  std::vector<SystemState> states;  ///< states[0] is the initial state
  std::vector<double> av_accel;     ///< applied (post-clamp) AV acceleration per step
};

/// Simulates the scenario with the AV driven by `av_model`.
///
/// TTC is observed at t = 0..T against the AV's leader and, with several
/// lanes, against agents mid-change into or out of the AV lane. The rollout
/// stops on a collision, when the AV commits to a lane change (before that
/// step is executed), or when the set of agents holding a nearest-agent slot
/// changes (an agent moving between slots does not end the scenario).
///
/// In polytope_consistent mode an out-of-box acceleration or speed yields a
/// BoundViolation. Collisions do not stop the loop in that mode, so every
/// step of the horizon is checked against the box.
RolloutResult rollout(const TestingScenario& scenario, const BehaviorModel& av_model,
                      const ScenarioBounds& bounds, DomainMode mode = DomainMode::clamping,
                      RolloutTrace* trace = nullptr);

/// Same as rollout() but throws BoundViolationError instead of returning it.
RolloutOutcome rollout_or_throw(const TestingScenario& scenario, const BehaviorModel& av_model,
                                const ScenarioBounds& bounds,
                                DomainMode mode = DomainMode::clamping);

/// Minimum TTC between the AV and its leader / lane-change conflict partners.
double observe_ttc(const SystemState& state, const ScenarioBounds& bounds) noexcept;

}  // namespace volsafe
