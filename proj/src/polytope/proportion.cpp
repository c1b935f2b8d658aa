#include "volsafe/polytope/proportion.hpp"

#include <algorithm>

#include "volsafe/polytope/build.hpp"
#include "volsafe/polytope/projection.hpp"

namespace volsafe {

VolumeEstimate estimate_volume(const HPolytope& p, VolumeMethod method,
                               const VolumeOptions& opt) {
  switch (method) {
    case VolumeMethod::ve: return ve_volume(p, opt.ve);
    case VolumeMethod::sob: return sob_volume(p, opt.sob);
    case VolumeMethod::cg: return cg_volume(p, opt.cg);
    case VolumeMethod::mc_box: return mc_box_volume(p, opt.mc_box_samples, opt.mc_box_seed);
  }
  return {};
}

PolytopeProportion dangerous_proportion_polytope(const LinearCfParams& params,
                                                 const ScenarioBounds& bounds, double eta,
                                                 VolumeMethod method,
                                                 const VolumeOptions& opt) {
  const LinearCfParams k = to_generalized(params);
  const HPolytope omega = build_omega_polytope(k, bounds);
  const HPolytope safe = build_safe_polytope(k, bounds, eta);
  const AffineProjection proj = equality_projection(omega);

  PolytopeProportion r;
  r.reduced_dim = proj.reduced_dim();
  r.omega = estimate_volume(apply_projection(omega, proj), method, opt);
  r.safe = estimate_volume(apply_projection(safe, proj), method, opt);
  r.proportion = r.omega.value > 0.0 ? std::clamp(1.0 - r.safe.value / r.omega.value, 0.0, 1.0)
                                     : 0.0;
  return r;
}

}  // namespace volsafe
