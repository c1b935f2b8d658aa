#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace volsafe {

/// {z : A z <= b, A_eq z = b_eq}.
struct HPolytope {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  std::vector<std::string> labels;  ///< one per column, may be empty

  HPolytope() = default;
  HPolytope(Eigen::MatrixXd a, Eigen::VectorXd rhs) : A(std::move(a)), b(std::move(rhs)) {
    A_eq.resize(0, A.cols());
  }

  int dim() const noexcept { return static_cast<int>(A.cols()); }
  int n_ineq() const noexcept { return static_cast<int>(A.rows()); }
  int n_eq() const noexcept { return static_cast<int>(A_eq.rows()); }

  /// Throws InvalidArgument on mismatched block sizes.
  void validate() const;

  /// Max violation over all rows (<= 0 inside).
  double max_violation(const Eigen::VectorXd& z) const;
  bool contains(const Eigen::VectorXd& z, double tol = 1e-9) const {
    return max_violation(z) <= tol;
  }

  /// {y : y + c in P}.
  HPolytope translated(const Eigen::VectorXd& c) const;

  /// Appends the row a.z <= rhs.
  void add_row(const Eigen::RowVectorXd& a, double rhs);
  void add_eq_row(const Eigen::RowVectorXd& a, double rhs);
};

/// Axis-aligned box lo <= z <= hi.
HPolytope make_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

/// Text format:
///
///   hpolytope <dim> <n_ineq> <n_eq>
///   labels <name_1> ... <name_dim>     (or "labels -")
///   <b> <a_1> ... <a_dim>              n_ineq rows, meaning a.z <= b
///   <b> <a_1> ... <a_dim>              n_eq rows, meaning a.z = b
///
/// Blank lines and lines starting with '#' are skipped.
void write_hpolytope(std::ostream& out, const HPolytope& p);
HPolytope read_hpolytope(std::istream& in);

}  // namespace volsafe
