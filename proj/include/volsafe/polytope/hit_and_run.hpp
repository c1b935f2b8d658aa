#pragma once

#include <optional>
#include <random>

#include <Eigen/Dense>

#include "volsafe/polytope/hpolytope.hpp"
#include "volsafe/rng.hpp"

namespace volsafe {

/// Target of a hit-and-run chain inside {A x <= b}, optionally cut by the
/// ball |x| <= ball_radius and/or weighted by exp(-|x|^2 / (2 sigma^2)).
struct WalkTarget {
  std::optional<double> ball_radius;
  std::optional<double> gaussian_sigma;
};

/// Hit-and-run chain that keeps the slack b - A x up to date incrementally.
class HitAndRunWalker {
 public:
  /// `start` must be strictly inside the target set.
  HitAndRunWalker(const HPolytope& p, Eigen::VectorXd start);

  /// One step: uniform random direction, chord through the current point,
  /// next point uniform on the chord (or from the 1-D Gaussian restricted
  /// to it). Throws InfeasibleError when the chord has zero length.
  void step(StreamRng& rng, const WalkTarget& target = {});
  void walk(StreamRng& rng, int steps, const WalkTarget& target = {}) {
    for (int i = 0; i < steps; ++i) step(rng, target);
  }

  const Eigen::VectorXd& point() const noexcept { return x_; }

 private:
  const HPolytope& p_;
  Eigen::VectorXd x_;
  Eigen::VectorXd slack_;
  Eigen::VectorXd u_;
  Eigen::VectorXd au_;
  std::normal_distribution<double> gauss_;
  int since_refresh_ = 0;
};

/// Single step from `current` without keeping a walker.
Eigen::VectorXd hit_and_run_step(const HPolytope& p, const Eigen::VectorXd& current,
                                 StreamRng& rng, std::optional<double> gaussian_sigma = {});

/// Draw from N(mean, sigma^2) truncated to [lo, hi] by inverse CDF, using
/// complementary tails when the interval lies far from the mean.
double truncated_normal(double mean, double sigma, double lo, double hi, double u);

}  // namespace volsafe
