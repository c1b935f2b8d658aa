#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

namespace volsafe {

/// Sentinel for "never closing": larger than every risk threshold.
inline constexpr double kInfiniteTtc = std::numeric_limits<double>::infinity();

/// Box and physical limits that bound the scenario space.
///
/// Units: metres, seconds, m/s, m/s^2. `gap` is the longitudinal position
/// difference between two vehicles (front to front), so the free clearance
/// is `gap - vehicle_length`.
struct ScenarioBounds {
  int horizon = 25;  ///< number of steps T
  double dt = 0.2;
  double gap_min = 5.0;
  double gap_max = 100.0;
  double speed_min = 0.0;
  double speed_max = 40.0;
  double accel_min = -4.0;
  double accel_max = 2.0;
  double vehicle_length = 5.0;
  int lane_count = 1;
  double lane_change_duration = 3.0;

  /// Throws InvalidArgument naming the first violated invariant.
  void validate() const;

  /// Accepts d_min == d_max (point interval); every other invariant as validate().
  void validate_allow_degenerate_gap() const;
};

enum class AgentKind : std::uint8_t { av, background_vehicle, static_obstacle, pedestrian };

enum class LateralAction : std::uint8_t { keep, change_left, change_right };

/// Lanes are numbered 0 (rightmost) upward; change_left moves to lane + 1.
struct AgentState {
  int lane = 0;
  double distance = 0.0;  ///< longitudinal position along the lane
  double speed = 0.0;
  std::optional<double> lane_change_elapsed;  ///< set while changing lanes
  int target_lane = 0;                        ///< meaningful while changing
  AgentKind kind = AgentKind::background_vehicle;

  bool changing_lane() const noexcept { return lane_change_elapsed.has_value(); }
  bool occupies(int l) const noexcept {
    return lane == l || (changing_lane() && target_lane == l);
  }
  /// Lane used for slot assignment: the committed lane once a change started.
  int slot_lane() const noexcept { return changing_lane() ? target_lane : lane; }
};

struct AgentAction {
  double longitudinal_accel = 0.0;
  LateralAction lateral = LateralAction::keep;
};

inline constexpr int kMaxBackgroundAgents = 6;

/// agents[0] is the tested AV; 1..I are background agents.
struct SystemState {
  int time_step = 0;
  std::vector<AgentState> agents;
};

/// A point of the scenario space: initial state plus one action sequence
/// (length T) per background agent.
struct TestingScenario {
  SystemState initial_state;
  std::vector<std::vector<AgentAction>> bv_actions;

  /// Free-parameter count; T + 3 for the single-lane car-following case.
  std::size_t free_dimension() const;
};

enum class DomainMode : std::uint8_t {
  clamping,             ///< clamp accelerations and speeds into the box
  polytope_consistent,  ///< reject any trajectory leaving the box
};

enum class CollisionKind : std::uint8_t { none, longitudinal, lateral };

enum class Termination : std::uint8_t {
  horizon_end,
  collision_longitudinal,
  collision_lateral,
  agent_set_changed,
  av_lane_change,
};

struct RolloutOutcome {
  double min_sm = kInfiniteTtc;  ///< minimum TTC; 0 on collision
  Termination termination = Termination::horizon_end;
  int steps_executed = 0;

  bool collided() const noexcept {
    return termination == Termination::collision_longitudinal ||
           termination == Termination::collision_lateral;
  }
};

/// Which quantity left the domain first (polytope_consistent mode only).
struct BoundViolation {
  enum class Quantity : std::uint8_t { accel, speed } quantity = Quantity::speed;
  int step = 0;
  int agent = 0;
  double value = 0.0;
};

std::string_view to_string(Termination t) noexcept;
std::string_view to_string(DomainMode m) noexcept;
std::string_view to_string(CollisionKind c) noexcept;
DomainMode parse_domain_mode(std::string_view s);

}  // namespace volsafe
