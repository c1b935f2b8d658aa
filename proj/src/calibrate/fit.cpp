#include "volsafe/calibrate/fit.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "volsafe/errors.hpp"

namespace volsafe {

CalibrationResult fit_linear(const std::vector<TrajectoryRecord>& recs, CfForm form) {
  const Eigen::Index n = static_cast<Eigen::Index>(recs.size());
  if (n < 10) throw InvalidArgument("calibration needs at least 10 records, got " + std::to_string(n));

  const Eigen::Index cols = form == CfForm::generalized ? 4 : 3;
  Eigen::MatrixXd X(n, cols);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = recs[i];
    if (form == CfForm::generalized)
      X.row(i) << r.follower_speed, r.leader_speed, r.gap, 1.0;
    else
      X.row(i) << r.gap, -r.follower_speed, r.leader_speed - r.follower_speed;
    y(i) = r.follower_accel;
  }

  // scale columns so the rank test does not depend on units
  const Eigen::VectorXd scale = X.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (!(scale(j) > 0.0)) throw InvalidArgument("rank-deficient regressors: a column is zero");
    X.col(j) /= scale(j);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < cols)
    throw InvalidArgument("rank-deficient regressors (rank " + std::to_string(qr.rank()) + " < " +
                          std::to_string(cols) + ")");
  const Eigen::VectorXd c = qr.solve(y).cwiseQuotient(scale);
  for (Eigen::Index j = 0; j < cols; ++j) X.col(j) *= scale(j);

  CalibrationResult res;
  if (form == CfForm::generalized) {
    res.params = LinearCfParams::generalized(c(0), c(1), c(2), c(3));
  } else {
    res.params.form = CfForm::milanes;
    res.params.k1 = c(0);
    res.params.k2 = c(2);
    res.params.t_hw = c(0) != 0.0 ? c(1) / c(0) : 0.0;
    if (!(res.params.t_hw > 0.0))
      res.warnings.push_back("recovered t_hw = " + std::to_string(res.params.t_hw) +
                             " is not positive");
  }

  const Eigen::VectorXd resid = y - X * c;
  res.n_points = static_cast<std::size_t>(n);
  res.rmse = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
  res.residual_min = resid.minCoeff();
  res.residual_max = resid.maxCoeff();
  res.residual_mean = resid.mean();
  return res;
}

}  // namespace volsafe
