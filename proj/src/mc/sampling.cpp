#include "volsafe/mc/sampling.hpp"

#include "volsafe/errors.hpp"

namespace volsafe {

namespace {

int lane_offset(Slot s) {
  switch (s) {
    case Slot::lead_right:
    case Slot::rear_right: return -1;
    case Slot::lead_left:
    case Slot::rear_left: return 1;
    default: return 0;
  }
}

bool is_lead(Slot s) {
  return s == Slot::lead_right || s == Slot::lead_same || s == Slot::lead_left;
}

}  // namespace

SamplingLayout SamplingLayout::single_lane() { return {}; }

SamplingLayout SamplingLayout::multi_lane() {
  SamplingLayout l;
  l.av_lane = 1;
  l.slots = {Slot::lead_same, Slot::rear_same, Slot::lead_left, Slot::rear_left};
  return l;
}

SamplingLayout SamplingLayout::for_bounds(const ScenarioBounds& b) {
  if (b.lane_count == 1) return single_lane();
  if (b.lane_count >= 3) return multi_lane();
  SamplingLayout l = multi_lane();
  l.av_lane = 0;
  return l;
}

void SamplingLayout::validate(const ScenarioBounds& b) const {
  if (av_lane < 0 || av_lane >= b.lane_count)
    throw InvalidArgument("sampling layout: AV lane outside the road");
  if (static_cast<int>(slots.size()) > kMaxBackgroundAgents)
    throw InvalidArgument("sampling layout: at most 6 background vehicles");
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const int lane = av_lane + lane_offset(slots[i]);
    if (lane < 0 || lane >= b.lane_count)
      throw InvalidArgument("sampling layout: slot lane outside the road");
    for (std::size_t j = 0; j < i; ++j) {
      if (slots[j] == slots[i]) throw InvalidArgument("sampling layout: duplicate slot");
    }
  }
  if (!(lateral_probability >= 0.0 && lateral_probability <= 1.0))
    throw InvalidArgument("sampling layout: lateral_probability must lie in [0, 1]");
}

TestingScenario sample_scenario(const ScenarioBounds& b, const SamplingLayout& layout,
                                StreamRng& rng) {
  const std::size_t n = layout.slots.size();
  TestingScenario sc;
  auto& agents = sc.initial_state.agents;
  agents.resize(n + 1);
  agents[0].kind = AgentKind::av;
  agents[0].lane = layout.av_lane;

  for (std::size_t i = 0; i < n; ++i) {
    const Slot s = layout.slots[i];
    const double gap = rng.uniform(b.gap_min, b.gap_max);
    agents[i + 1].lane = layout.av_lane + lane_offset(s);
    agents[i + 1].distance = is_lead(s) ? gap : -gap;
  }
  agents[0].speed = rng.uniform(b.speed_min, b.speed_max);
  for (std::size_t i = 0; i < n; ++i) agents[i + 1].speed = rng.uniform(b.speed_min, b.speed_max);

  const bool lateral = b.lane_count > 1;
  const double half_p = 0.5 * layout.lateral_probability;
  sc.bv_actions.assign(n, std::vector<AgentAction>(b.horizon));
  for (int t = 0; t < b.horizon; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      AgentAction& a = sc.bv_actions[i][t];
      a.longitudinal_accel = rng.uniform(b.accel_min, b.accel_max);
      if (lateral) {
        const double u = rng.uniform();
        if (u < half_p)
          a.lateral = LateralAction::change_left;
        else if (u < 2.0 * half_p)
          a.lateral = LateralAction::change_right;
      }
    }
  }
  return sc;
}

TestingScenario sample_scenario(const ScenarioBounds& b, StreamRng& rng) {
  return sample_scenario(b, SamplingLayout::for_bounds(b), rng);
}

}  // namespace volsafe
