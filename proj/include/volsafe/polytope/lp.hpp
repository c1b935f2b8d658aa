#pragma once

#include <Eigen/Dense>

#include "volsafe/polytope/hpolytope.hpp"

namespace volsafe {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

/// max c.x subject to A x <= b with x free. Dense two-phase simplex with
/// Bland's rule; meant for the small systems arising here (tens of rows).
LpResult solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

struct ChebyshevBall {
  Eigen::VectorXd center;
  double radius = 0.0;
};

/// Largest inscribed ball of {A z <= b}. Throws InfeasibleError when the
/// radius is not positive or the LP is unbounded.
ChebyshevBall chebyshev_center(const HPolytope& p);

struct BoundingBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

/// Tight axis-aligned box from 2 * dim LPs. Throws InfeasibleError when
/// the polytope is empty or unbounded.
BoundingBox bounding_box(const HPolytope& p);

}  // namespace volsafe
