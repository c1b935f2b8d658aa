#include "volsafe/polytope/projection.hpp"

#include <string>

#include "volsafe/errors.hpp"

namespace volsafe {

AffineProjection equality_projection(const HPolytope& p, double rank_tol) {
  p.validate();
  const int n = p.dim();
  AffineProjection proj;
  if (p.n_eq() == 0) {
    proj.basis = Eigen::MatrixXd::Identity(n, n);
    proj.origin = Eigen::VectorXd::Zero(n);
    return proj;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(p.A_eq, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(rank_tol);
  const int rank = static_cast<int>(svd.rank());
  proj.origin = svd.solve(p.b_eq);
  const double residual = (p.A_eq * proj.origin - p.b_eq).norm();
  if (residual > 1e-8 * (1.0 + p.b_eq.norm()))
    throw InfeasibleError("equality constraints are inconsistent (residual " +
                          std::to_string(residual) + ")");
  if (rank < p.n_eq())
    throw InfeasibleError("equality block is rank-deficient: rank " + std::to_string(rank) +
                          " < " + std::to_string(p.n_eq()) + " rows");
  proj.basis = svd.matrixV().rightCols(n - rank);
  return proj;
}

HPolytope apply_projection(const HPolytope& p, const AffineProjection& proj) {
  HPolytope out(p.A * proj.basis, p.b - p.A * proj.origin);
  return out;
}

HPolytope project_equalities(const HPolytope& p) {
  if (p.n_eq() == 0) {
    HPolytope out(p.A, p.b);
    out.labels = p.labels;
    return out;
  }
  return apply_projection(p, equality_projection(p));
}

}  // namespace volsafe
