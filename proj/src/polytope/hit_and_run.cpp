#include "volsafe/polytope/hit_and_run.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <boost/math/distributions/normal.hpp>

#include "volsafe/errors.hpp"

namespace volsafe {

namespace {

constexpr int kRefreshEvery = 256;

/// Standardised sample on [a, b] with a >= 0 (right tail).
double upper_tail(double a, double b, double u) {
  const boost::math::normal n;
  const double qa = boost::math::cdf(boost::math::complement(n, a));
  const double qb = boost::math::cdf(boost::math::complement(n, b));
  if (qa > 1e-300) {
    const double q = qa - u * (qa - qb);
    if (q > 0.0) return std::clamp(boost::math::quantile(boost::math::complement(n, q)), a, b);
  }
  // far tail: density ~ exp(-a t) on [a, b] with t = z - a
  const double w = b - a;
  const double z = a - std::log1p(-u * -std::expm1(-a * w)) / a;
  return std::clamp(z, a, b);
}

}  // namespace

double truncated_normal(double mean, double sigma, double lo, double hi, double u) {
  const double a = (lo - mean) / sigma;
  const double b = (hi - mean) / sigma;
  double z;
  if (a >= 0.0) {
    z = upper_tail(a, b, u);
  } else if (b <= 0.0) {
    z = -upper_tail(-b, -a, 1.0 - u);
  } else {
    const boost::math::normal n;
    const double pa = boost::math::cdf(n, a);
    const double pb = boost::math::cdf(n, b);
    z = std::clamp(boost::math::quantile(n, std::clamp(pa + u * (pb - pa), 1e-300, 1.0 - 1e-16)),
                   a, b);
  }
  return mean + sigma * z;
}

HitAndRunWalker::HitAndRunWalker(const HPolytope& p, Eigen::VectorXd start)
    : p_(p), x_(std::move(start)) {
  slack_ = p_.b - p_.A * x_;
  if (slack_.size() > 0 && !(slack_.minCoeff() > 0.0))
    throw InfeasibleError("hit-and-run start point is not strictly interior");
  u_.resize(x_.size());
}

void HitAndRunWalker::step(StreamRng& rng, const WalkTarget& target) {
  double nu;
  do {
    for (Eigen::Index j = 0; j < u_.size(); ++j) u_(j) = gauss_(rng);
    nu = u_.norm();
  } while (nu == 0.0);
  u_ /= nu;

  au_.noalias() = p_.A * u_;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < au_.size(); ++i) {
    if (au_(i) > 0.0)
      hi = std::min(hi, slack_(i) / au_(i));
    else if (au_(i) < 0.0)
      lo = std::max(lo, slack_(i) / au_(i));
  }
  const double xu = x_.dot(u_);
  if (target.ball_radius) {
    // |x + t u|^2 <= r^2  <=>  t^2 + 2 t xu + |x|^2 - r^2 <= 0
    const double r = *target.ball_radius;
    const double disc = xu * xu - (x_.squaredNorm() - r * r);
    if (disc <= 0.0) throw InfeasibleError("hit-and-run point left the ball");
    const double sq = std::sqrt(disc);
    lo = std::max(lo, -xu - sq);
    hi = std::min(hi, -xu + sq);
  }
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw InfeasibleError("hit-and-run chord is unbounded");
  if (!(hi > lo)) throw InfeasibleError("hit-and-run point lies on the boundary");

  const double v = rng.uniform();
  const double t = target.gaussian_sigma ? truncated_normal(-xu, *target.gaussian_sigma, lo, hi, v)
                                         : lo + (hi - lo) * v;
  x_.noalias() += t * u_;
  if (++since_refresh_ >= kRefreshEvery) {
    slack_ = p_.b - p_.A * x_;
    since_refresh_ = 0;
  } else {
    slack_.noalias() -= t * au_;
  }
}

Eigen::VectorXd hit_and_run_step(const HPolytope& p, const Eigen::VectorXd& current,
                                 StreamRng& rng, std::optional<double> gaussian_sigma) {
  HitAndRunWalker w(p, current);
  w.step(rng, {std::nullopt, gaussian_sigma});
  return w.point();
}

}  // namespace volsafe
