#pragma once

#include "volsafe/polytope/hpolytope.hpp"
#include "volsafe/scenario/behavior.hpp"
#include "volsafe/scenario/types.hpp"

namespace volsafe {

/// Column layout of the car-following polytope for horizon T (dimension
/// 5T + 3): d_t, vf_t, vl_t for t = 0..T, then af_t, al_t for t < T.
struct CfVariables {
  int horizon;

  int d(int t) const noexcept { return 3 * t; }
  int vf(int t) const noexcept { return 3 * t + 1; }
  int vl(int t) const noexcept { return 3 * t + 2; }
  int af(int t) const noexcept { return 3 * (horizon + 1) + 2 * t; }
  int al(int t) const noexcept { return 3 * (horizon + 1) + 2 * t + 1; }
  int dim() const noexcept { return 5 * horizon + 3; }
};

/// Safe set S for a linear car-following model: dynamics and model
/// equalities (4T rows), the TTC rows d_t - l >= eta (vf_t - vl_t) and
/// d_t >= l for every t, and the box rows on d_0, accelerations and speeds.
/// Throws InvalidArgument unless `params` is in generalized form and
/// InfeasibleError when the speed box has no interior.
HPolytope build_safe_polytope(const LinearCfParams& params, const ScenarioBounds& bounds,
                              double eta);

/// Scenario space Omega: the same system without the TTC rows.
HPolytope build_omega_polytope(const LinearCfParams& params, const ScenarioBounds& bounds);

}  // namespace volsafe
