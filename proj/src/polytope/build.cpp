#include "volsafe/polytope/build.hpp"

#include <string>

#include "volsafe/errors.hpp"

namespace volsafe {

namespace {

void check_inputs(const LinearCfParams& params, const ScenarioBounds& b) {
  if (params.form != CfForm::generalized)
    throw InvalidArgument("polytope construction needs generalized car-following parameters");
  params.validate();
  if (!(b.speed_min < b.speed_max))
    throw InfeasibleError("speed box [v_min, v_max] has empty interior");
  b.validate();
}

HPolytope build(const LinearCfParams& k, const ScenarioBounds& b, const double* eta) {
  check_inputs(k, b);
  const int T = b.horizon;
  const CfVariables v{T};
  const int n = v.dim();
  const double dt = b.dt;
  const double h = 0.5 * dt * dt;

  HPolytope p;
  p.A.resize(0, n);
  p.A_eq.resize(0, n);
  for (int t = 0; t <= T; ++t) {
    const std::string s = std::to_string(t);
    p.labels.push_back("d_" + s);
    p.labels.push_back("vf_" + s);
    p.labels.push_back("vl_" + s);
  }
  for (int t = 0; t < T; ++t) {
    p.labels.push_back("af_" + std::to_string(t));
    p.labels.push_back("al_" + std::to_string(t));
  }

  Eigen::RowVectorXd row(n);
  auto reset = [&] { row.setZero(); };

  for (int t = 0; t < T; ++t) {
    // d_{t+1} = d_t + dt vl_t + h al_t - dt vf_t - h af_t
    reset();
    row(v.d(t + 1)) = 1.0;
    row(v.d(t)) = -1.0;
    row(v.vl(t)) = -dt;
    row(v.al(t)) = -h;
    row(v.vf(t)) = dt;
    row(v.af(t)) = h;
    p.add_eq_row(row, 0.0);
    // v_{t+1} = v_t + dt a_t for both vehicles
    reset();
    row(v.vf(t + 1)) = 1.0;
    row(v.vf(t)) = -1.0;
    row(v.af(t)) = -dt;
    p.add_eq_row(row, 0.0);
    reset();
    row(v.vl(t + 1)) = 1.0;
    row(v.vl(t)) = -1.0;
    row(v.al(t)) = -dt;
    p.add_eq_row(row, 0.0);
    // af_t = k1 vf_t + k2 vl_t + k3 d_t + k4
    reset();
    row(v.af(t)) = 1.0;
    row(v.vf(t)) = -k.k1;
    row(v.vl(t)) = -k.k2;
    row(v.d(t)) = -k.k3;
    p.add_eq_row(row, k.k4);
  }

  if (eta) {
    for (int t = 0; t <= T; ++t) {
      // d_t - l >= eta (vf_t - vl_t)
      reset();
      row(v.d(t)) = -1.0;
      row(v.vf(t)) = *eta;
      row(v.vl(t)) = -*eta;
      p.add_row(row, -b.vehicle_length);
      // d_t >= l
      reset();
      row(v.d(t)) = -1.0;
      p.add_row(row, -b.vehicle_length);
    }
  }

  auto bound = [&](int col, double lo, double hi) {
    reset();
    row(col) = 1.0;
    p.add_row(row, hi);
    row(col) = -1.0;
    p.add_row(row, -lo);
  };
  bound(v.d(0), b.gap_min, b.gap_max);
  for (int t = 0; t < T; ++t) {
    bound(v.al(t), b.accel_min, b.accel_max);
    bound(v.af(t), b.accel_min, b.accel_max);
  }
  for (int t = 0; t <= T; ++t) {
    bound(v.vl(t), b.speed_min, b.speed_max);
    bound(v.vf(t), b.speed_min, b.speed_max);
  }
  return p;
}

}  // namespace

HPolytope build_safe_polytope(const LinearCfParams& params, const ScenarioBounds& bounds,
                              double eta) {
  if (!(eta >= 0.0)) throw InvalidArgument("eta must be non-negative");
  return build(params, bounds, &eta);
}

HPolytope build_omega_polytope(const LinearCfParams& params, const ScenarioBounds& bounds) {
  return build(params, bounds, nullptr);
}

}  // namespace volsafe
