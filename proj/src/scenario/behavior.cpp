#include "volsafe/scenario/behavior.hpp"

#include <cmath>

#include "volsafe/errors.hpp"

namespace volsafe {

void LinearCfParams::validate() const {
  const bool finite = std::isfinite(k1) && std::isfinite(k2) && std::isfinite(k3) &&
                      std::isfinite(k4) && std::isfinite(t_hw);
  if (!finite) throw InvalidArgument("car-following parameters must be finite");
  if (form == CfForm::milanes && !(t_hw > 0.0))
    throw InvalidArgument("milanes t_hw must be positive");
}

void MobilParams::validate() const {
  if (!(politeness >= 0.0 && politeness <= 1.0))
    throw InvalidArgument("MOBIL politeness must lie in [0, 1]");
  if (!(safe_braking > 0.0)) throw InvalidArgument("MOBIL safe_braking must be positive");
  if (!std::isfinite(threshold)) throw InvalidArgument("MOBIL threshold must be finite");
}

double linear_cf_accel(const LinearCfParams& p, double v_f, double v_l, double gap) {
  if (p.form != CfForm::generalized)
    throw InvalidArgument("linear_cf_accel expects generalized parameters");
  return p.k1 * v_f + p.k2 * v_l + p.k3 * gap + p.k4;
}

double milanes_accel(const LinearCfParams& p, double v_f, double v_l, double gap) {
  if (p.form != CfForm::milanes) throw InvalidArgument("milanes_accel expects milanes parameters");
  return p.k1 * (gap - p.t_hw * v_f) + p.k2 * (v_l - v_f);
}

LinearCfParams milanes_to_generalized(const LinearCfParams& p) {
  if (p.form != CfForm::milanes)
    throw InvalidArgument("milanes_to_generalized expects milanes parameters");
  // k1*(d - h*vf) + k2*(vl - vf) = -(k1*h + k2)*vf + k2*vl + k1*d
  return LinearCfParams::generalized(-(p.k1 * p.t_hw + p.k2), p.k2, p.k1, 0.0);
}

LinearCfParams to_generalized(const LinearCfParams& p) {
  return p.form == CfForm::generalized ? p : milanes_to_generalized(p);
}

double BehaviorModel::accel(double v_follower, double v_leader, double gap) const {
  return cf.form == CfForm::milanes ? milanes_accel(cf, v_follower, v_leader, gap)
                                    : linear_cf_accel(cf, v_follower, v_leader, gap);
}

LaneDecision mobil_decide(double ego_gain, double new_follower_delta, double old_follower_delta,
                          double new_follower_required_decel, const MobilParams& params) {
  const double incentive =
      ego_gain + params.politeness * (new_follower_delta + old_follower_delta);
  const bool safe = new_follower_required_decel <= params.safe_braking;
  return (incentive > params.threshold && safe) ? LaneDecision::change : LaneDecision::keep;
}

std::string_view to_string(CfForm f) noexcept {
  return f == CfForm::milanes ? "milanes" : "generalized";
}

CfForm parse_cf_form(std::string_view s) {
  if (s == "milanes") return CfForm::milanes;
  if (s == "generalized") return CfForm::generalized;
  throw InvalidArgument("unknown car-following form '" + std::string(s) + "'");
}

}  // namespace volsafe
