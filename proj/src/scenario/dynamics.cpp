#include "volsafe/scenario/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "volsafe/errors.hpp"

namespace volsafe {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(std::string("ScenarioBounds: ") + what);
}

void validate_common(const ScenarioBounds& b) {
  require(b.gap_min > 0.0, "gap_min must be positive");
  require(b.speed_min >= 0.0 && b.speed_min < b.speed_max, "need 0 <= speed_min < speed_max");
  require(b.accel_min < 0.0 && 0.0 < b.accel_max, "need accel_min < 0 < accel_max");
  require(b.horizon >= 1, "horizon must be >= 1");
  require(b.dt > 0.0, "dt must be positive");
  require(b.vehicle_length >= 0.0, "vehicle_length must be non-negative");
  require(b.lane_count >= 1 && b.lane_count <= 3, "lane_count must be 1, 2 or 3");
  require(b.lane_change_duration > 0.0, "lane_change_duration must be positive");
}

bool moves(AgentKind k) noexcept {
  return k == AgentKind::av || k == AgentKind::background_vehicle;
}

}  // namespace

void ScenarioBounds::validate() const {
  validate_common(*this);
  require(gap_min < gap_max, "gap_min must be below gap_max");
}

void ScenarioBounds::validate_allow_degenerate_gap() const {
  validate_common(*this);
  require(gap_min <= gap_max, "gap_min must not exceed gap_max");
}

std::size_t TestingScenario::free_dimension() const {
  // gap and speed per background agent, AV speed, and one acceleration per
  // background agent per step (lateral intents are discrete).
  std::size_t n = 1 + 2 * bv_actions.size();
  for (const auto& seq : bv_actions) n += seq.size();
  return n;
}

double compute_ttc(double gap, double v_follower, double v_leader, double vehicle_length) noexcept {
  const double closing = v_follower - v_leader;
  if (!(closing > 0.0)) return kInfiniteTtc;
  const double clearance = gap - vehicle_length;
  if (clearance <= 0.0) return 0.0;
  return clearance / closing;
}

std::optional<BoundViolation> advance_state(SystemState& state,
                                            std::span<const AgentAction> actions,
                                            const ScenarioBounds& b, DomainMode mode) {
  if (actions.size() != state.agents.size())
    throw InvalidArgument("step_dynamics: one action per agent required");
  const double dt = b.dt;
  const bool strict = mode == DomainMode::polytope_consistent;

  for (std::size_t i = 0; i < state.agents.size(); ++i) {
    AgentState& ag = state.agents[i];
    const AgentAction& act = actions[i];

    if (moves(ag.kind)) {
      double a = act.longitudinal_accel;
      if (strict) {
        if (a < b.accel_min || a > b.accel_max)
          return BoundViolation{BoundViolation::Quantity::accel, state.time_step,
                                static_cast<int>(i), a};
      } else {
        a = std::clamp(a, b.accel_min, b.accel_max);
      }
      double v_next = ag.speed + a * dt;
      if (strict) {
        if (v_next < b.speed_min || v_next > b.speed_max)
          return BoundViolation{BoundViolation::Quantity::speed, state.time_step + 1,
                                static_cast<int>(i), v_next};
      } else {
        v_next = std::clamp(v_next, b.speed_min, b.speed_max);
        a = (v_next - ag.speed) / dt;
      }
      ag.distance += ag.speed * dt + 0.5 * a * dt * dt;
      ag.speed = v_next;
    } else {
      // static obstacles never move; pedestrians have no longitudinal speed
      ag.speed = 0.0;
    }

    if (act.lateral != LateralAction::keep && !ag.changing_lane() &&
        ag.kind != AgentKind::static_obstacle) {
      const int target = ag.lane + (act.lateral == LateralAction::change_left ? 1 : -1);
      if (target < 0 || target >= b.lane_count)
        throw InvalidArgument("step_dynamics: lane change leaves the road");
      ag.target_lane = target;
      ag.lane_change_elapsed = 0.0;
    }
    if (ag.changing_lane()) {
      *ag.lane_change_elapsed += dt;
      // small slack so that k*dt == duration completes despite rounding
      if (*ag.lane_change_elapsed >= b.lane_change_duration - 1e-9) {
        ag.lane = ag.target_lane;
        ag.lane_change_elapsed.reset();
      }
    }
  }
  ++state.time_step;
  return std::nullopt;
}

SystemState step_dynamics(const SystemState& state, std::span<const AgentAction> actions,
                          const ScenarioBounds& bounds, DomainMode mode) {
  SystemState next = state;
  if (auto v = advance_state(next, actions, bounds, mode)) {
    throw BoundViolationError("agent " + std::to_string(v->agent) + " leaves the domain at step " +
                              std::to_string(v->step) + " (value " + std::to_string(v->value) +
                              ")");
  }
  return next;
}

CollisionKind detect_collisions(const SystemState& state, const ScenarioBounds& b) noexcept {
  const auto& ags = state.agents;
  const double l = b.vehicle_length;
  bool lateral = false;
  for (std::size_t i = 0; i < ags.size(); ++i) {
    for (std::size_t j = i + 1; j < ags.size(); ++j) {
      const double gap = std::abs(ags[i].distance - ags[j].distance);
      if (ags[i].lane == ags[j].lane && gap - l <= 0.0) return CollisionKind::longitudinal;
      if (gap < l) {
        const bool i_cuts = ags[i].changing_lane() && ags[j].occupies(ags[i].target_lane);
        const bool j_cuts = ags[j].changing_lane() && ags[i].occupies(ags[j].target_lane);
        lateral = lateral || i_cuts || j_cuts;
      }
    }
  }
  return lateral ? CollisionKind::lateral : CollisionKind::none;
}

int nearest_ahead(const SystemState& state, int agent, int lane) noexcept {
  const auto& ags = state.agents;
  const double x = ags[agent].distance;
  int best = -1;
  for (int j = 0; j < static_cast<int>(ags.size()); ++j) {
    if (j == agent || !ags[j].occupies(lane) || ags[j].distance < x) continue;
    if (best < 0 || ags[j].distance < ags[best].distance) best = j;
  }
  return best;
}

int nearest_behind(const SystemState& state, int agent, int lane) noexcept {
  const auto& ags = state.agents;
  const double x = ags[agent].distance;
  int best = -1;
  for (int j = 0; j < static_cast<int>(ags.size()); ++j) {
    if (j == agent || !ags[j].occupies(lane) || ags[j].distance >= x) continue;
    if (best < 0 || ags[j].distance > ags[best].distance) best = j;
  }
  return best;
}

SlotAssignment assign_slots(const SystemState& state) noexcept {
  SlotAssignment slots;
  slots.fill(-1);
  const auto& ags = state.agents;
  if (ags.empty()) return slots;
  const int ego_lane = ags[0].slot_lane();
  const double x0 = ags[0].distance;
  for (int j = 1; j < static_cast<int>(ags.size()); ++j) {
    const int rel = ags[j].slot_lane() - ego_lane;
    if (rel < -1 || rel > 1) continue;
    const bool lead = ags[j].distance >= x0;
    int& slot = slots[(lead ? 0 : 3) + rel + 1];
    const double dist = std::abs(ags[j].distance - x0);
    if (slot < 0 || dist < std::abs(ags[slot].distance - x0)) slot = j;
  }
  return slots;
}

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::horizon_end: return "horizon_end";
    case Termination::collision_longitudinal: return "collision_longitudinal";
    case Termination::collision_lateral: return "collision_lateral";
    case Termination::agent_set_changed: return "agent_set_changed";
    case Termination::av_lane_change: return "av_lane_change";
  }
  return "unknown";
}

std::string_view to_string(DomainMode m) noexcept {
  return m == DomainMode::clamping ? "clamping" : "polytope_consistent";
}

std::string_view to_string(CollisionKind c) noexcept {
  switch (c) {
    case CollisionKind::none: return "none";
    case CollisionKind::longitudinal: return "longitudinal";
    case CollisionKind::lateral: return "lateral";
  }
  return "unknown";
}

DomainMode parse_domain_mode(std::string_view s) {
  if (s == "clamping") return DomainMode::clamping;
  if (s == "polytope_consistent" || s == "rejection") return DomainMode::polytope_consistent;
  throw InvalidArgument("unknown domain mode '" + std::string(s) + "'");
}

}  // namespace volsafe
