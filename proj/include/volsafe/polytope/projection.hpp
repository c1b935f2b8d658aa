#pragma once

#include "volsafe/polytope/hpolytope.hpp"

namespace volsafe {

/// Parametrisation z = origin + basis * y of the affine set {A_eq z = b_eq}.
/// `basis` has orthonormal columns, so Lebesgue measure in y equals the
/// measure within the affine hull in z.
struct AffineProjection {
  Eigen::MatrixXd basis;   ///< ambient x k
  Eigen::VectorXd origin;  ///< minimum-norm particular solution

  Eigen::VectorXd lift(const Eigen::VectorXd& y) const { return origin + basis * y; }
  int reduced_dim() const noexcept { return static_cast<int>(basis.cols()); }
};

/// Null-space basis and particular solution of the equality block (SVD).
/// Throws InfeasibleError when the equalities are inconsistent or when
/// their rank is below the row count.
AffineProjection equality_projection(const HPolytope& p, double rank_tol = 1e-10);

/// Inequalities of `p` rewritten in the reduced coordinates of `proj`:
/// rows A N y <= b - A z0, no equality block.
HPolytope apply_projection(const HPolytope& p, const AffineProjection& proj);

/// apply_projection(p, equality_projection(p)); identity without equalities.
HPolytope project_equalities(const HPolytope& p);

}  // namespace volsafe
