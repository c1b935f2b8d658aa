#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace volsafe {

struct TrajectoryRecord {
  double time = 0.0;
  double leader_speed = 0.0;
  double follower_speed = 0.0;
  double gap = 0.0;  ///< position difference x_l - x_f
  double follower_accel = 0.0;
};

/// Column names looked up in the header row. `follower_accel` may be absent
/// from the file, in which case it is derived from follower_speed by central
/// differences (one-sided at both ends).
struct TrajectoryFormat {
  char delimiter = ',';
  std::string time = "time";
  std::string leader_speed = "leader_speed";
  std::string follower_speed = "follower_speed";
  std::string gap = "gap";
  std::string follower_accel = "follower_accel";
};

/// Reads one trajectory. Throws ParseError (with the 1-based line number)
/// on a missing column, a malformed or non-finite value, a non-positive
/// gap, non-increasing time, or an input without data rows.
std::vector<TrajectoryRecord> ingest_trajectory(std::istream& in,
                                                const TrajectoryFormat& format = {});

/// Central differences of follower_speed over time.
void derive_accelerations(std::vector<TrajectoryRecord>& records);

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& records);

}  // namespace volsafe
