#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace volsafe {

enum class VolumeMethod { ve, sob, cg, mc_box };

std::string_view to_string(VolumeMethod m) noexcept;
VolumeMethod parse_volume_method(std::string_view s);

struct VolumeEstimate {
  double value = 0.0;
  VolumeMethod method = VolumeMethod::ve;
  std::optional<double> rel_error_target;  ///< unset for exact volumes
  std::uint64_t samples_used = 0;
  std::uint64_t vertices_found = 0;
  double runtime_seconds = 0.0;
};

/// Volume of the unit Euclidean ball in R^p.
double unit_ball_volume(int p);

}  // namespace volsafe
