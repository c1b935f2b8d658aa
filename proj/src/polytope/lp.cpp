#include "volsafe/polytope/lp.hpp"

#include <cmath>
#include <vector>

#include "volsafe/errors.hpp"

namespace volsafe {

namespace {

constexpr double kEps = 1e-10;

/// Tableau in canonical form: rows 0..m-1 constraints, column `rhs` last.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd t, std::vector<int> basis) : t_(std::move(t)), basis_(std::move(basis)) {}

  /// Maximises the objective held in `obj` (reduced costs, negated as
  /// usual: entering columns have obj(j) < 0). Columns >= `n_allowed` never
  /// enter. Returns false when unbounded.
  bool optimise(Eigen::RowVectorXd& obj, int n_allowed) {
    const int m = static_cast<int>(t_.rows());
    const int rhs = static_cast<int>(t_.cols()) - 1;
    for (int iter = 0; iter < 50000; ++iter) {
      int enter = -1;
      for (int j = 0; j < n_allowed; ++j) {
        if (obj(j) < -kEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        if (t_(i, enter) > kEps) {
          const double ratio = t_(i, rhs) / t_(i, enter);
          if (leave < 0 || ratio < best - kEps ||
              (ratio <= best + kEps && basis_[i] < basis_[leave])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter, obj);
    }
    throw InfeasibleError("simplex iteration limit reached");
  }

  void pivot(int r, int c, Eigen::RowVectorXd& obj) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i < t_.rows(); ++i) {
      if (i != r && t_(i, c) != 0.0) t_.row(i) -= t_(i, c) * t_.row(r);
    }
    if (obj(c) != 0.0) obj -= obj(c) * t_.row(r);
    basis_[r] = c;
  }

  Eigen::MatrixXd& data() { return t_; }
  std::vector<int>& basis() { return basis_; }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

}  // namespace

LpResult solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  // columns: x+ (n), x- (n), slack (m), artificial (m), rhs
  const int n_struct = 2 * n + m;
  const int rhs = n_struct + m;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, rhs + 1);
  std::vector<int> basis(m);
  std::vector<int> artificial_rows;
  for (int i = 0; i < m; ++i) {
    const double sign = b(i) < 0.0 ? -1.0 : 1.0;
    t.block(i, 0, 1, n) = sign * A.row(i);
    t.block(i, n, 1, n) = -sign * A.row(i);
    t(i, 2 * n + i) = sign;
    t(i, rhs) = sign * b(i);
    if (sign > 0) {
      basis[i] = 2 * n + i;
    } else {
      t(i, n_struct + i) = 1.0;
      basis[i] = n_struct + i;
      artificial_rows.push_back(i);
    }
  }
  Tableau tab(std::move(t), std::move(basis));

  if (!artificial_rows.empty()) {
    // phase 1: maximise -sum(artificials)
    Eigen::RowVectorXd obj = Eigen::RowVectorXd::Zero(rhs + 1);
    for (int i : artificial_rows) obj(n_struct + i) = 1.0;
    for (int i : artificial_rows) obj -= tab.data().row(i);
    tab.optimise(obj, rhs);
    const double scale = 1.0 + b.cwiseAbs().maxCoeff();
    if (-obj(rhs) > 1e-9 * scale) return {LpStatus::infeasible, {}, 0.0};
    // drive remaining artificials out of the basis
    for (int i = 0; i < m; ++i) {
      if (tab.basis()[i] < n_struct) continue;
      for (int j = 0; j < n_struct; ++j) {
        if (std::abs(tab.data()(i, j)) > 1e-9) {
          tab.pivot(i, j, obj);
          break;
        }
      }
    }
  }

  Eigen::RowVectorXd obj = Eigen::RowVectorXd::Zero(rhs + 1);
  obj.head(n) = -c.transpose();
  obj.segment(n, n) = c.transpose();
  for (int i = 0; i < m; ++i) {
    const int bcol = tab.basis()[i];
    if (obj(bcol) != 0.0) obj -= obj(bcol) * tab.data().row(i);
  }
  if (!tab.optimise(obj, n_struct)) return {LpStatus::unbounded, {}, 0.0};

  LpResult res;
  res.status = LpStatus::optimal;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(rhs);
  for (int i = 0; i < m; ++i) z(tab.basis()[i]) = tab.data()(i, rhs);
  res.x = z.head(n) - z.segment(n, n);
  res.objective = c.dot(res.x);
  return res;
}

ChebyshevBall chebyshev_center(const HPolytope& p) {
  const int n = p.dim();
  const int m = p.n_ineq();
  Eigen::MatrixXd A(m, n + 1);
  A.leftCols(n) = p.A;
  A.col(n) = p.A.rowwise().norm();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c(n) = 1.0;
  const LpResult r = solve_lp(A, p.b, c);
  if (r.status == LpStatus::unbounded)
    throw InfeasibleError("polytope is unbounded (inscribed radius unbounded)");
  if (r.status == LpStatus::infeasible || !(r.x(n) > 0.0))
    throw InfeasibleError("polytope has no interior (Chebyshev radius <= 0)");
  return {r.x.head(n), r.x(n)};
}

BoundingBox bounding_box(const HPolytope& p) {
  const int n = p.dim();
  BoundingBox box{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int j = 0; j < n; ++j) {
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
      c(j) = sign;
      const LpResult r = solve_lp(p.A, p.b, c);
      if (r.status == LpStatus::infeasible) throw InfeasibleError("polytope is empty");
      if (r.status == LpStatus::unbounded) throw InfeasibleError("polytope is unbounded");
      (sign > 0 ? box.upper : box.lower)(j) = r.x(j);
    }
  }
  return box;
}

}  // namespace volsafe
