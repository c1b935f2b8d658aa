#pragma once

#include <array>
#include <optional>
#include <span>

#include "volsafe/scenario/types.hpp"

namespace volsafe {

/// Time to collision of a follower behind a leader `gap` metres ahead
/// (front to front). Infinite unless the follower is faster; 0 once the
/// clearance gap - length is exhausted while closing.
double compute_ttc(double gap, double v_follower, double v_leader, double vehicle_length) noexcept;

/// Advances every agent by one step. Speeds follow v' = v + a*dt and
/// positions x' = x + v*dt + a*dt^2/2, so a pairwise gap evolves exactly as
/// the discrete car-following dynamics. Lane changes start on a change_*
/// action and complete after `lane_change_duration`.
///
/// In clamping mode accelerations and speeds are clamped into the box (the
/// position update uses the effective acceleration). In polytope_consistent
/// mode an out-of-box acceleration or speed throws BoundViolationError.
SystemState step_dynamics(const SystemState& state, std::span<const AgentAction> actions,
                          const ScenarioBounds& bounds, DomainMode mode = DomainMode::clamping);

/// In-place variant used by the rollout loop; returns the violation instead
/// of throwing. The state is left partially updated on violation.
std::optional<BoundViolation> advance_state(SystemState& state,
                                            std::span<const AgentAction> actions,
                                            const ScenarioBounds& bounds, DomainMode mode);

/// Longitudinal: two agents sharing a lane with clearance <= 0.
/// Lateral: an agent mid-change overlapping (gap < length) an agent that
/// occupies its target lane. Longitudinal wins when both hold.
CollisionKind detect_collisions(const SystemState& state, const ScenarioBounds& bounds) noexcept;

/// Nearest agent per direction slot around the AV; -1 when empty.
enum class Slot : int { lead_right, lead_same, lead_left, rear_right, rear_same, rear_left };
using SlotAssignment = std::array<int, 6>;

SlotAssignment assign_slots(const SystemState& state) noexcept;

/// Index of the nearest other agent at or ahead of `agent` that occupies
/// `lane`, or -1. nearest_behind: strictly behind, or -1.
int nearest_ahead(const SystemState& state, int agent, int lane) noexcept;
int nearest_behind(const SystemState& state, int agent, int lane) noexcept;

}  // namespace volsafe
