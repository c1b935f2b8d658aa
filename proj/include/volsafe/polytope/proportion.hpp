#pragma once

#include <cstdint>

#include "volsafe/polytope/randomized_volume.hpp"
#include "volsafe/polytope/vertex_enumeration.hpp"
#include "volsafe/scenario/behavior.hpp"
#include "volsafe/scenario/types.hpp"

namespace volsafe {

struct VolumeOptions {
  VeOptions ve;
  SobOptions sob;
  CgOptions cg;
  std::uint64_t mc_box_samples = 1'000'000;
  std::uint64_t mc_box_seed = 0;
};

VolumeEstimate estimate_volume(const HPolytope& p, VolumeMethod method,
                               const VolumeOptions& options = {});

struct PolytopeProportion {
  double proportion = 0.0;  ///< 1 - vol(S) / vol(Omega), clipped to [0, 1]
  VolumeEstimate safe;
  VolumeEstimate omega;
  int reduced_dim = 0;
};

/// Dangerous share of the scenario space for a linear car-following model
/// (Milanes parameters are converted). S and Omega are projected with the
/// same null-space basis, so their volumes are directly comparable.
PolytopeProportion dangerous_proportion_polytope(const LinearCfParams& params,
                                                 const ScenarioBounds& bounds, double eta,
                                                 VolumeMethod method,
                                                 const VolumeOptions& options = {});

}  // namespace volsafe
