#pragma once

#include <cstdint>

#include "volsafe/polytope/hpolytope.hpp"
#include "volsafe/polytope/volume.hpp"

namespace volsafe {

struct SobOptions {
  double epsilon = 0.05;      ///< target relative error
  int walk_length = 0;         ///< W; 0 = 10 + p
  /// Each phase runs factor * phases / epsilon^2 walks of W steps and uses
  /// every chain point.
  double sample_factor = 1.0;
  /// Map the body to near-isotropic position before sampling.
  bool rounding = true;
  std::uint64_t seed = 0;
};

/// Sequence of balls. The polytope is translated to its Chebyshev center
/// and, unless disabled, rounded to near-isotropic position; radii grow by
/// 2^(1/p) from the inscribed radius until the ball covers the bounding box. Each ratio vol(P n B_{i-1}) / vol(P n B_i) is the
/// fraction of hit-and-run samples in P n B_i that fall in B_{i-1}.
VolumeEstimate sob_volume(const HPolytope& p, const SobOptions& options = {});

struct CgOptions {
  double epsilon = 0.05;
  int walk_length = 0;         ///< L; 0 = 10 + p
  double cooling_gamma = 0.0;  ///< in (0, 1); 0 = 1 - 1/sqrt(p)
  double sample_factor = 4.0;  ///< as for SobOptions, per stage
  bool rounding = true;        ///< as for SobOptions
  std::uint64_t seed = 0;
};

/// Gaussian annealing. With a_s = 1 / (2 sigma_s^2) the schedule is
/// a_{s+1} = gamma a_s, starting from a Gaussian concentrated well inside
/// the inscribed ball (so Z_0 is the full Gaussian integral) and stopping
/// once sigma exceeds twice the circumscribed radius. Each Z_{s+1}/Z_s is the
/// mean of exp((a_s - a_{s+1}) |x|^2) under the truncated Gaussian g_s; a
/// last factor mean of exp(a_S |x|^2) under g_S turns Z_S into vol(P).
/// Throws InvalidArgument when gamma is outside (0, 1).
VolumeEstimate cg_volume(const HPolytope& p, const CgOptions& options = {});

/// Plain rejection sampling in the bounding box.
VolumeEstimate mc_box_volume(const HPolytope& p, std::uint64_t samples, std::uint64_t seed = 0);

}  // namespace volsafe
