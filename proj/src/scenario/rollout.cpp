#include "volsafe/scenario/rollout.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "volsafe/errors.hpp"
#include "volsafe/scenario/dynamics.hpp"

namespace volsafe {

namespace {

constexpr int kAv = 0;

/// CF acceleration of `follower` behind `leader` (-1: free road).
double cf_accel(const BehaviorModel& m, const SystemState& s, int follower, int leader,
                const ScenarioBounds& b) {
  if (leader < 0) return b.accel_max;
  const auto& f = s.agents[follower];
  const auto& l = s.agents[leader];
  return m.accel(f.speed, l.speed, l.distance - f.distance);
}

double clamp_accel(double a, const ScenarioBounds& b) {
  return std::clamp(a, b.accel_min, b.accel_max);
}

int target_of(const AgentState& ag, LateralAction act) {
  return ag.lane + (act == LateralAction::change_left ? 1 : -1);
}

/// Acceleration the agent `follower` would apply if `subject` sat ahead of it
/// in `lane`. Other agents in that lane are ignored except the nearest one.
double accel_with_inserted(const BehaviorModel& ref, const SystemState& s, int follower,
                           int subject, const ScenarioBounds& b) {
  const auto& f = s.agents[follower];
  const auto& x = s.agents[subject];
  const int cur = nearest_ahead(s, follower, f.slot_lane());
  if (cur >= 0 && cur != subject && s.agents[cur].distance < x.distance)
    return cf_accel(ref, s, follower, cur, b);
  return ref.accel(f.speed, x.speed, x.distance - f.distance);
}

/// True when `agent` may begin a change into `target`: the lane exists, no
/// agent occupying it overlaps longitudinally, and the new follower would
/// not have to brake harder than the MOBIL safety limit.
bool lane_change_admissible(const SystemState& s, int agent, int target, const BehaviorModel& ref,
                            double safe_braking, const ScenarioBounds& b) {
  if (target < 0 || target >= b.lane_count) return false;
  const auto& ag = s.agents[agent];
  for (int j = 0; j < static_cast<int>(s.agents.size()); ++j) {
    if (j == agent || !s.agents[j].occupies(target)) continue;
    if (std::abs(s.agents[j].distance - ag.distance) <= b.vehicle_length) return false;
  }
  const int nf = nearest_behind(s, agent, target);
  if (nf < 0) return true;
  const double a = accel_with_inserted(ref, s, nf, agent, b);
  return -a <= safe_braking;
}

/// MOBIL evaluation for the AV; returns the chosen lateral action. Incentives
/// compare accelerations the vehicles can actually apply (clamped to the
/// box); the safety test uses the raw deceleration demand.
LateralAction av_lane_decision(const SystemState& s, const BehaviorModel& m,
                               const ScenarioBounds& b) {
  const MobilParams& mp = *m.mobil;
  const auto& av = s.agents[kAv];
  const int lead = nearest_ahead(s, kAv, av.lane);
  const double a_now = clamp_accel(cf_accel(m, s, kAv, lead, b), b);
  const int old_f = nearest_behind(s, kAv, av.lane);

  LateralAction best = LateralAction::keep;
  double best_incentive = 0.0;
  for (LateralAction dir : {LateralAction::change_left, LateralAction::change_right}) {
    const int target = target_of(av, dir);
    if (target < 0 || target >= b.lane_count) continue;
    bool overlap = false;
    for (int j = 1; j < static_cast<int>(s.agents.size()); ++j) {
      if (s.agents[j].occupies(target) &&
          std::abs(s.agents[j].distance - av.distance) <= b.vehicle_length)
        overlap = true;
    }
    if (overlap) continue;

    const int new_lead = nearest_ahead(s, kAv, target);
    const double ego_gain = clamp_accel(cf_accel(m, s, kAv, new_lead, b), b) - a_now;

    double new_delta = 0.0;
    double required_decel = 0.0;
    const int new_f = nearest_behind(s, kAv, target);
    if (new_f >= 0) {
      const int nf_lead = nearest_ahead(s, new_f, target);
      const double before = clamp_accel(cf_accel(m, s, new_f, nf_lead, b), b);
      const double after = accel_with_inserted(m, s, new_f, kAv, b);
      required_decel = -after;
      new_delta = clamp_accel(after, b) - before;
    }
    double old_delta = 0.0;
    if (old_f >= 0) {
      const double before = clamp_accel(cf_accel(m, s, old_f, kAv, b), b);
      const double after = clamp_accel(cf_accel(m, s, old_f, lead, b), b);
      old_delta = after - before;
    }
    if (mobil_decide(ego_gain, new_delta, old_delta, required_decel, mp) == LaneDecision::change) {
      const double incentive = ego_gain + mp.politeness * (new_delta + old_delta);
      if (best == LateralAction::keep || incentive > best_incentive) {
        best = dir;
        best_incentive = incentive;
      }
    }
  }
  return best;
}

struct Observation {
  CollisionKind collision = CollisionKind::none;
  double ttc = kInfiniteTtc;
};

Observation observe(const SystemState& s, const ScenarioBounds& b) {
  Observation o;
  o.collision = detect_collisions(s, b);
  o.ttc = o.collision == CollisionKind::none ? observe_ttc(s, b) : 0.0;
  return o;
}

/// Sorted indices of the agents that hold a slot; the order inside the
/// slots does not matter, only who is tracked.
std::vector<int> tracked_agents(const SystemState& s) {
  std::vector<int> out;
  for (int j : assign_slots(s))
    if (j >= 0) out.push_back(j);
  std::sort(out.begin(), out.end());
  return out;
}

Termination collision_termination(CollisionKind c) {
  return c == CollisionKind::lateral ? Termination::collision_lateral
                                     : Termination::collision_longitudinal;
}

}  // namespace

double observe_ttc(const SystemState& s, const ScenarioBounds& b) noexcept {
  if (s.agents.empty()) return kInfiniteTtc;
  const auto& av = s.agents[kAv];
  const int lane = av.lane;
  double best = kInfiniteTtc;
  const int lead = nearest_ahead(s, kAv, lane);
  if (lead >= 0) {
    const auto& l = s.agents[lead];
    best = compute_ttc(l.distance - av.distance, av.speed, l.speed, b.vehicle_length);
  }
  for (int j = 1; j < static_cast<int>(s.agents.size()); ++j) {
    const auto& o = s.agents[j];
    if (j == lead || !o.changing_lane() || !o.occupies(lane)) continue;
    const double ttc = o.distance >= av.distance
                           ? compute_ttc(o.distance - av.distance, av.speed, o.speed,
                                         b.vehicle_length)
                           : compute_ttc(av.distance - o.distance, o.speed, av.speed,
                                         b.vehicle_length);
    best = std::min(best, ttc);
  }
  return best;
}

RolloutResult rollout(const TestingScenario& scenario, const BehaviorModel& av_model,
                      const ScenarioBounds& b, DomainMode mode, RolloutTrace* trace) {
  SystemState s = scenario.initial_state;
  const int n_agents = static_cast<int>(s.agents.size());
  if (n_agents == 0 || s.agents[kAv].kind != AgentKind::av)
    throw InvalidArgument("rollout: agents[0] must be the AV");
  if (static_cast<int>(scenario.bv_actions.size()) != n_agents - 1)
    throw InvalidArgument("rollout: one action sequence per background agent required");
  for (const auto& seq : scenario.bv_actions) {
    if (static_cast<int>(seq.size()) < b.horizon)
      throw InvalidArgument("rollout: action sequence shorter than the horizon");
  }

  const bool strict = mode == DomainMode::polytope_consistent;
  const bool lateral = b.lane_count > 1;
  const MobilParams bv_mobil = av_model.mobil.value_or(MobilParams{});

  RolloutOutcome out;
  if (trace) {
    trace->states.assign(1, s);
    trace->av_accel.clear();
  }

  bool collided = false;
  auto record = [&](const Observation& o, int step) {
    out.min_sm = std::min(out.min_sm, o.ttc);
    if (o.collision != CollisionKind::none && !collided) {
      collided = true;
      out.min_sm = 0.0;
      out.termination = collision_termination(o.collision);
      out.steps_executed = step;
    }
  };

  record(observe(s, b), 0);
  if (collided && !strict) return out;
  const std::vector<int> tracked0 = tracked_agents(s);

  std::vector<AgentAction> actions(n_agents);
  for (int t = 0; t < b.horizon; ++t) {
    if (lateral && av_model.mobil && !collided) {
      if (av_lane_decision(s, av_model, b) != LateralAction::keep) {
        out.termination = Termination::av_lane_change;
        out.steps_executed = t;
        return out;
      }
    }

    const auto& av = s.agents[kAv];
    actions[kAv] = {cf_accel(av_model, s, kAv, nearest_ahead(s, kAv, av.lane), b),
                    LateralAction::keep};
    for (int i = 1; i < n_agents; ++i) {
      AgentAction a = scenario.bv_actions[i - 1][t];
      if (a.lateral != LateralAction::keep) {
        const auto& ag = s.agents[i];
        const bool ok = lateral && !ag.changing_lane() &&
                        ag.kind == AgentKind::background_vehicle &&
                        lane_change_admissible(s, i, target_of(ag, a.lateral), av_model,
                                               bv_mobil.safe_braking, b);
        if (!ok) a.lateral = LateralAction::keep;
      }
      actions[i] = a;
    }

    const double v_av = s.agents[kAv].speed;
    if (auto v = advance_state(s, actions, b, mode)) return *v;
    if (trace) {
      trace->states.push_back(s);
      trace->av_accel.push_back((s.agents[kAv].speed - v_av) / b.dt);
    }

    record(observe(s, b), t + 1);
    if (collided) {
      if (!strict) return out;
      continue;
    }
    if (n_agents > 1 && tracked_agents(s) != tracked0) {
      out.termination = Termination::agent_set_changed;
      out.steps_executed = t + 1;
      return out;
    }
  }
  if (!collided) out.steps_executed = b.horizon;
  return out;
}

RolloutOutcome rollout_or_throw(const TestingScenario& scenario, const BehaviorModel& av_model,
                                const ScenarioBounds& bounds, DomainMode mode) {
  RolloutResult r = rollout(scenario, av_model, bounds, mode);
  if (const auto* v = std::get_if<BoundViolation>(&r)) {
    throw BoundViolationError(std::string(v->quantity == BoundViolation::Quantity::accel
                                              ? "acceleration"
                                              : "speed") +
                              " of agent " + std::to_string(v->agent) + " leaves the box at step " +
                              std::to_string(v->step));
  }
  return std::get<RolloutOutcome>(r);
}

}  // namespace volsafe
