#pragma once

#include <random>
#include <vector>

#include "volsafe/calibrate/trajectory.hpp"
#include "volsafe/scenario/rollout.hpp"

namespace volsafe::testing {

/// Follower trajectory produced by the simulator: the follower runs `params`
/// behind a leader with random accelerations in [-1, 1]. Bounds are wide so
/// nothing is clamped, which makes the recorded accelerations exactly the
/// model output.
inline std::vector<TrajectoryRecord> synthetic_trajectory(const LinearCfParams& params, int steps,
                                                          std::uint64_t seed,
                                                          double noise_sigma = 0.0) {
  ScenarioBounds b;
  b.horizon = steps;
  b.accel_min = -1000.0;
  b.accel_max = 1000.0;
  b.speed_max = 1e6;
  b.gap_max = 1e6;
  b.vehicle_length = 0.0;

  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  TestingScenario sc;
  AgentState av, lead;
  av.kind = AgentKind::av;
  av.speed = 15.0;
  lead.distance = 30.0;
  lead.speed = 16.0;
  sc.initial_state.agents = {av, lead};
  sc.bv_actions.assign(1, std::vector<AgentAction>(steps));
  for (auto& a : sc.bv_actions[0]) a.longitudinal_accel = U(g);

  RolloutTrace trace;
  rollout(sc, BehaviorModel{"synthetic", params, std::nullopt}, b, DomainMode::clamping, &trace);
  std::normal_distribution<double> noise(0.0, noise_sigma > 0.0 ? noise_sigma : 1.0);
  std::vector<TrajectoryRecord> out;
  for (std::size_t t = 0; t < trace.av_accel.size(); ++t) {
    const auto& s = trace.states[t];
    TrajectoryRecord r;
    r.time = static_cast<double>(t) * b.dt;
    r.follower_speed = s.agents[0].speed;
    r.leader_speed = s.agents[1].speed;
    r.gap = s.agents[1].distance - s.agents[0].distance;
    r.follower_accel = trace.av_accel[t] + (noise_sigma > 0.0 ? noise(g) : 0.0);
    out.push_back(r);
  }
  return out;
}

}  // namespace volsafe::testing
