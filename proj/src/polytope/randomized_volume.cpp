#include "volsafe/polytope/randomized_volume.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "volsafe/errors.hpp"
#include "volsafe/polytope/hit_and_run.hpp"
#include "volsafe/polytope/lp.hpp"
#include "volsafe/rng.hpp"

namespace volsafe {

std::string_view to_string(VolumeMethod m) noexcept {
  switch (m) {
    case VolumeMethod::ve: return "ve";
    case VolumeMethod::sob: return "sob";
    case VolumeMethod::cg: return "cg";
    case VolumeMethod::mc_box: return "mc_box";
  }
  return "unknown";
}

VolumeMethod parse_volume_method(std::string_view s) {
  if (s == "ve") return VolumeMethod::ve;
  if (s == "sob") return VolumeMethod::sob;
  if (s == "cg") return VolumeMethod::cg;
  if (s == "mc_box") return VolumeMethod::mc_box;
  throw InvalidArgument("unknown volume method '" + std::string(s) + "'");
}

double unit_ball_volume(int p) {
  const double h = 0.5 * p;
  return std::exp(h * std::log(M_PI) - std::lgamma(h + 1.0));
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// The polytope mapped to y = M^{-1} (z - c) around its Chebyshev center c,
/// with inscribed and circumscribed radii about the origin and log|det M|.
struct Centered {
  HPolytope q;
  double r_in = 0.0;
  double r_out = 0.0;
  double log_det = 0.0;
};

void recenter(Centered& c) {
  const ChebyshevBall ball = chebyshev_center(c.q);
  c.q = c.q.translated(ball.center);
  c.r_in = ball.radius;
  const BoundingBox box = bounding_box(c.q);
  c.r_out = box.lower.cwiseAbs().cwiseMax(box.upper.cwiseAbs()).norm();
}

/// Covariance rounding: sample the body with a uniform hit-and-run chain,
/// map it by the Cholesky factor of the sample covariance, and repeat until
/// the covariance is close to isotropic. Hit-and-run mixes poorly in long
/// thin bodies, and the car-following polytopes span several orders of
/// magnitude between their shortest and longest directions.
void round_body(Centered& c, std::uint64_t seed) {
  const int dim = c.q.dim();
  const int steps = 2000 + 200 * dim;
  StreamRng rng(seed, 1);
  for (int iter = 0; iter < 6; ++iter) {
    HitAndRunWalker w(c.q, Eigen::VectorXd::Zero(dim));
    w.walk(rng, 20 * dim);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(dim, dim);
    for (int k = 0; k < steps; ++k) {
      w.step(rng);
      mean += w.point();
      second.noalias() += w.point() * w.point().transpose();
    }
    mean /= steps;
    const Eigen::MatrixXd cov = second / steps - mean * mean.transpose();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) break;
    if (hi / lo < 4.0) break;
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) break;
    const Eigen::MatrixXd L = llt.matrixL();
    c.q.A = c.q.A * L;
    c.log_det += L.diagonal().array().log().sum();
    recenter(c);
  }
}

Centered center(const HPolytope& p, bool rounding, std::uint64_t seed) {
  p.validate();
  if (p.n_eq() > 0) throw InvalidArgument("randomized volume: project out equalities first");
  Centered c{p, 0.0, 0.0, 0.0};
  recenter(c);
  if (rounding) round_body(c, seed);
  return c;
}

std::uint64_t samples_per_phase(double factor, std::size_t phases, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  if (!(factor > 0.0)) throw InvalidArgument("sample_factor must be positive");
  return static_cast<std::uint64_t>(std::ceil(factor * static_cast<double>(phases) / (eps * eps)));
}

/// log of the mean of exp(v_k), computed stably.
double log_mean_exp(const std::vector<double>& v) {
  const double mx = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s / static_cast<double>(v.size()));
}

}  // namespace

VolumeEstimate sob_volume(const HPolytope& p, const SobOptions& opt) {
  const auto t0 = Clock::now();
  const Centered c = center(p, opt.rounding, opt.seed);
  const int dim = p.dim();
  const int walk = opt.walk_length > 0 ? opt.walk_length : 10 + dim;

  std::vector<double> radii{c.r_in};
  const double growth = std::pow(2.0, 1.0 / dim);
  while (radii.back() < c.r_out) radii.push_back(std::min(radii.back() * growth, c.r_out));
  const std::size_t phases = radii.size() - 1;

  VolumeEstimate e;
  e.method = VolumeMethod::sob;
  e.rel_error_target = opt.epsilon;
  double log_vol = c.log_det + std::log(unit_ball_volume(dim)) + dim * std::log(c.r_in);
  if (phases > 0) {
    const std::uint64_t n = samples_per_phase(opt.sample_factor, phases, opt.epsilon);
    StreamRng rng(opt.seed, 0);
    HitAndRunWalker w(c.q, Eigen::VectorXd::Zero(dim));
    for (std::size_t i = 1; i <= phases; ++i) {
      const WalkTarget target{radii[i], std::nullopt};
      const double inner2 = radii[i - 1] * radii[i - 1];
      w.walk(rng, walk, target);
      // every chain point is used; thinning would only discard information
      std::uint64_t inside = 0;
      const std::uint64_t points = n * walk;
      for (std::uint64_t k = 0; k < points; ++k) {
        w.step(rng, target);
        if (w.point().squaredNorm() <= inner2) ++inside;
      }
      // an empty count would mean a ratio below 1/points; cap it there
      const double ratio =
          static_cast<double>(std::max<std::uint64_t>(inside, 1)) / static_cast<double>(points);
      log_vol -= std::log(ratio);
      e.samples_used += points;
    }
  }
  e.value = std::exp(log_vol);
  e.runtime_seconds = seconds_since(t0);
  return e;
}

VolumeEstimate cg_volume(const HPolytope& p, const CgOptions& opt) {
  const int dim = p.dim();
  const double gamma = opt.cooling_gamma == 0.0 ? 1.0 - 1.0 / std::sqrt(static_cast<double>(dim))
                                                : opt.cooling_gamma;
  if (!(gamma > 0.0 && gamma < 1.0))
    throw InvalidArgument("cooling gamma must lie in (0, 1), got " + std::to_string(gamma));
  const auto t0 = Clock::now();
  const Centered c = center(p, opt.rounding, opt.seed);
  const int walk = opt.walk_length > 0 ? opt.walk_length : 10 + dim;

  // a = 1 / (2 sigma^2); start with nearly all Gaussian mass inside B(r_in)
  const double sigma0 = c.r_in / (std::sqrt(static_cast<double>(dim)) + 5.0);
  const double diameter = 2.0 * c.r_out;
  const double a_end = 1.0 / (2.0 * diameter * diameter);
  std::vector<double> a{1.0 / (2.0 * sigma0 * sigma0)};
  while (a.back() > a_end) a.push_back(a.back() * gamma);
  const std::size_t stages = a.size();  // S ratios plus the final correction

  VolumeEstimate e;
  e.method = VolumeMethod::cg;
  e.rel_error_target = opt.epsilon;
  const std::uint64_t n = samples_per_phase(opt.sample_factor, stages, opt.epsilon);
  double log_vol = c.log_det + 0.5 * dim * std::log(M_PI / a.front());

  StreamRng rng(opt.seed, 0);
  HitAndRunWalker w(c.q, Eigen::VectorXd::Zero(dim));
  std::vector<double> terms(n * walk);
  for (std::size_t s = 0; s < stages; ++s) {
    const double sigma = 1.0 / std::sqrt(2.0 * a[s]);
    const WalkTarget target{std::nullopt, sigma};
    const double da = s + 1 < stages ? a[s] - a[s + 1] : a[s];
    w.walk(rng, walk, target);
    for (double& term : terms) {
      w.step(rng, target);
      term = da * w.point().squaredNorm();
    }
    log_vol += log_mean_exp(terms);
    e.samples_used += terms.size();
  }
  e.value = std::exp(log_vol);
  e.runtime_seconds = seconds_since(t0);
  return e;
}

VolumeEstimate mc_box_volume(const HPolytope& p, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("mc_box_volume: samples must be positive");
  const auto t0 = Clock::now();
  const BoundingBox box = bounding_box(p);
  const Eigen::VectorXd width = box.upper - box.lower;
  StreamRng rng(seed, 0);
  Eigen::VectorXd x(p.dim());
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    for (int j = 0; j < p.dim(); ++j) x(j) = box.lower(j) + width(j) * rng.uniform();
    if (p.contains(x, 0.0)) ++hits;
  }
  VolumeEstimate e;
  e.method = VolumeMethod::mc_box;
  e.value = width.prod() * static_cast<double>(hits) / static_cast<double>(samples);
  e.samples_used = samples;
  e.runtime_seconds = seconds_since(t0);
  return e;
}

}  // namespace volsafe
