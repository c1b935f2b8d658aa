// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 when
// a gating criterion fails. Tolerances are fixed here.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "synthetic.hpp"
#include "volsafe/calibrate/fit.hpp"
#include "volsafe/mc/estimator.hpp"
#include "volsafe/polytope/build.hpp"
#include "volsafe/polytope/hit_and_run.hpp"
#include "volsafe/polytope/lp.hpp"
#include "volsafe/polytope/projection.hpp"
#include "volsafe/polytope/proportion.hpp"
#include "volsafe/polytope/randomized_volume.hpp"
#include "volsafe/polytope/vertex_enumeration.hpp"
#include "volsafe/scenario/model_io.hpp"
#include "volsafe/scenario/rollout.hpp"

using namespace volsafe;

namespace {

// criterion 1
constexpr double kMcVsVeRelTol = 0.02;
constexpr std::uint64_t kOracleSamples = 1'000'000;
// criterion 2
constexpr std::array<double, 5> kReferencePercent{3.59, 4.21, 4.90, 5.69, 6.77};
constexpr double kReferenceTolPp = 0.5;
// criterion 3
constexpr std::array<int, 6> kSweepHorizons{1, 5, 10, 15, 20, 25};
constexpr std::uint64_t kSweepSamples = 100'000;
// criterion 4
constexpr std::uint64_t kHeadwaySamples = 100'000;
// criterion 5
constexpr std::uint64_t kRankSamples = 1'000'000;
const std::vector<std::string> kExpectedRanking{"veh_c", "veh_e", "veh_d",
                                                "veh_b", "veh_f", "veh_a"};
// criterion 6
constexpr double kExactTol = 1e-9;
constexpr double kSobRelTol = 0.05;
constexpr double kCgRelTol = 0.10;
constexpr double kChiSquareMinP = 0.01;
constexpr int kChiSquareSteps = 1'000'000;
constexpr int kChiSquareThin = 10;
// criterion 7
constexpr int kConvexityChecks = 10'000;
// criterion 8
constexpr double kRoundTripRelTol = 1e-6;
constexpr double kNoiseSigma = 0.2;
constexpr int kNoisePoints = 10'000;
constexpr double kNoiseRelTol = 0.05;

const std::string kRoot = VOLSAFE_SOURCE_DIR;
const LinearCfParams kMilanes = LinearCfParams::milanes(0.23, 0.07, 1.5);

struct Verdict {
  bool pass = false;
  bool gating = true;
  std::string summary;
};

double rel_err(double a, double ref) { return std::abs(a - ref) / std::abs(ref); }

BehaviorModel model_file(const std::string& name) {
  return load_model(kRoot + "/models/" + name + ".yaml");
}

McConfig mc_config(std::uint64_t n, std::uint64_t seed, DomainMode mode) {
  McConfig c;
  c.n_samples = n;
  c.seed = seed;
  c.mode = mode;
  return c;
}

Verdict oracle_equivalence() {
  Verdict v{true, true, {}};
  const BehaviorModel m{"milanes", kMilanes, std::nullopt};
  for (int T = 1; T <= 4; ++T) {
    ScenarioBounds b;
    b.horizon = T;
    const double ve = dangerous_proportion_polytope(kMilanes, b, 1.0, VolumeMethod::ve).proportion;
    const auto h = mc_estimate(m, b, RiskBinning{{1.0}},
                               mc_config(kOracleSamples, 1, DomainMode::polytope_consistent));
    const double mc = h.dangerous_proportion(1.0);
    const double err = rel_err(mc, ve);
    std::printf("    T=%d  VE %.4f%%  MC %.4f%%  rel.err %.2f%%  (rejected %llu)\n", T, 100 * ve,
                100 * mc, 100 * err, static_cast<unsigned long long>(h.rejected_samples));
    v.pass = v.pass && err <= kMcVsVeRelTol;
  }
  v.summary = "MC (1e6 accepted, polytope_consistent) vs VE within 2% relative, T=1..4";
  return v;
}

Verdict reference_table() {
  Verdict v{true, false, {}};
  for (double l : {5.0, 0.0}) {
    bool all = true;
    for (int T = 1; T <= 5; ++T) {
      ScenarioBounds b;
      b.horizon = T;
      b.vehicle_length = l;
      const double pct =
          100 * dangerous_proportion_polytope(kMilanes, b, 1.0, VolumeMethod::ve).proportion;
      const double ref = kReferencePercent[T - 1];
      const bool ok = std::abs(pct - ref) <= kReferenceTolPp;
      all = all && ok;
      std::printf("    l=%.0f T=%d  VE %.3f%%  reference %.2f%%  diff %+.3f pp  %s\n", l, T, pct,
                  ref, pct - ref, ok ? "within" : "outside");
    }
    v.pass = v.pass && all;
  }
  v.summary = "VE vs reference percentages within 0.5 pp for l=5 and l=0 (non-gating)";
  return v;
}

Verdict horizon_monotonicity() {
  Verdict v{true, true, {}};
  const BehaviorModel m = model_file("milanes_thw1.5");
  double prev = -1.0;
  for (int T : kSweepHorizons) {
    ScenarioBounds b;
    b.horizon = T;
    const auto h = mc_estimate(m, b, RiskBinning::defaults(),
                               mc_config(kSweepSamples, 6, DomainMode::clamping));
    const double p = h.dangerous_proportion(1.0);
    std::printf("    T=%2d  P(TTC <= 1 s) = %.4f%%\n", T, 100 * p);
    v.pass = v.pass && p > prev;
    prev = p;
  }
  v.summary = "MC dangerous share (TTC <= 1 s, 1e5 samples) strictly increasing in T";
  return v;
}

Verdict headway_sensitivity() {
  Verdict v{true, true, {}};
  const std::vector<BehaviorModel> models{model_file("milanes_thw1.0"),
                                          model_file("milanes_thw1.5"),
                                          model_file("milanes_thw2.0")};
  for (int lanes : {1, 3}) {
    ScenarioBounds b;
    b.horizon = 25;
    b.lane_count = lanes;
    const std::uint64_t seed = lanes == 1 ? 7 : 8;
    double prev_crash = 2.0, prev_safe = -1.0;
    for (const auto& m : models) {
      const auto h = mc_estimate(m, b, RiskBinning::defaults(),
                                 mc_config(kHeadwaySamples, seed, DomainMode::clamping),
                                 SamplingLayout::for_bounds(b));
      const double crash = h.proportions.front();
      const double safe = h.proportions.back();
      std::printf("    lanes=%d t_hw=%.1f  crash %.4f  safe %.4f\n", lanes, m.cf.t_hw, crash,
                  safe);
      v.pass = v.pass && crash < prev_crash && safe > prev_safe;
      prev_crash = crash;
      prev_safe = safe;
    }
  }
  v.summary = "crash share falls and safe share rises with t_hw, single- and multi-lane";
  return v;
}

Verdict production_ranking() {
  std::vector<BehaviorModel> models;
  for (const char* n : {"veh_a", "veh_b", "veh_c", "veh_d", "veh_e", "veh_f"})
    models.push_back(model_file(n));
  ScenarioBounds b;
  b.horizon = 25;
  const auto r = rank_models(models, b, RiskBinning::defaults(),
                             mc_config(kRankSamples, 9, DomainMode::clamping),
                             SamplingLayout::for_bounds(b), 5.0);
  std::vector<std::string> observed;
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    const auto& e = r.entries[i];
    observed.push_back(e.name);
    std::printf("    %zu. %s  %.5f  [%.5f, %.5f]%s\n", i + 1, e.name.c_str(), e.dangerous,
                e.interval.lower, e.interval.upper,
                i < r.tie_with_next.size() && r.tie_with_next[i] ? "  tie with next" : "");
  }
  // a deviation from the expected order is accepted only inside a group of
  // statistically tied neighbours
  bool ok = observed.size() == kExpectedRanking.size();
  for (std::size_t i = 0; ok && i < observed.size();) {
    std::size_t j = i;
    while (j + 1 < observed.size() && j < r.tie_with_next.size() && r.tie_with_next[j]) ++j;
    const std::set<std::string> got(observed.begin() + i, observed.begin() + j + 1);
    const std::set<std::string> want(kExpectedRanking.begin() + i,
                                     kExpectedRanking.begin() + j + 1);
    ok = got == want;
    i = j + 1;
  }
  return {ok, true, "ranking C < E < D < B < F < A at eta = 5 s (ties only within Wilson overlap)"};
}

HPolytope unit_simplex(int p) {
  HPolytope s(Eigen::MatrixXd(0, p), Eigen::VectorXd(0));
  for (int i = 0; i < p; ++i) {
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(p);
    r(i) = -1.0;
    s.add_row(r, 0.0);
  }
  s.add_row(Eigen::RowVectorXd::Ones(p), 1.0);
  return s;
}

Verdict polytope_fixtures() {
  Verdict v{true, true, {}};
  auto cube = [](int p) { return make_box(Eigen::VectorXd::Zero(p), Eigen::VectorXd::Ones(p)); };
  const double vc = ve_volume(cube(3)).value;
  const double vs = ve_volume(unit_simplex(3)).value;
  std::printf("    VE cube %.12f  simplex %.12f\n", vc, vs);
  v.pass = std::abs(vc - 1.0) <= kExactTol && std::abs(vs - 1.0 / 6) <= kExactTol;
  for (int p : {5, 10}) {
    SobOptions so;
    so.seed = 1;
    CgOptions co;
    co.seed = 1;
    const auto s = sob_volume(cube(p), so);
    const auto c = cg_volume(cube(p), co);
    std::printf("    dim %2d  SOB %.4f (%.1fs)  CG %.4f (%.1fs)\n", p, s.value, s.runtime_seconds,
                c.value, c.runtime_seconds);
    v.pass = v.pass && rel_err(s.value, 1.0) <= kSobRelTol && rel_err(c.value, 1.0) <= kCgRelTol;
  }
  // consecutive chain points are correlated; every tenth step is counted
  const auto sq = cube(2);
  HitAndRunWalker w(sq, Eigen::VectorXd::Constant(2, 0.5));
  StreamRng rng(31, 0);
  std::array<double, 100> counts{};
  for (int i = 0; i < kChiSquareSteps; ++i) {
    w.step(rng);
    if (i % kChiSquareThin != 0) continue;
    const int cx = std::min(9, static_cast<int>(w.point()(0) * 10));
    const int cy = std::min(9, static_cast<int>(w.point()(1) * 10));
    counts[cx * 10 + cy] += 1;
  }
  const double expected = static_cast<double>(kChiSquareSteps / kChiSquareThin) / 100.0;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  const double pval =
      boost::math::cdf(boost::math::complement(boost::math::chi_squared(99), chi2));
  std::printf("    hit-and-run chi-square %.2f (99 dof), p = %.4f\n", chi2, pval);
  v.pass = v.pass && pval > kChiSquareMinP;
  v.summary = "VE exact to 1e-9, SOB within 5% and CG within 10% (dims 5, 10), uniformity p > 0.01";
  return v;
}

/// Simulated single-lane scenario with its full variable vector (CfVariables
/// layout) when it stays inside the box.
struct Simulated {
  bool accepted = false;
  double min_sm = 0.0;
  Eigen::VectorXd z;
};

Simulated simulate(const TestingScenario& sc, const BehaviorModel& m, const ScenarioBounds& b) {
  RolloutTrace tr;
  const auto r = rollout(sc, m, b, DomainMode::polytope_consistent, &tr);
  Simulated s;
  if (!std::holds_alternative<RolloutOutcome>(r)) return s;
  const auto& out = std::get<RolloutOutcome>(r);
  if (static_cast<int>(tr.av_accel.size()) != b.horizon) return s;  // ended early
  s.accepted = true;
  s.min_sm = out.min_sm;
  const CfVariables v{b.horizon};
  s.z.resize(v.dim());
  for (int t = 0; t <= b.horizon; ++t) {
    const auto& st = tr.states[t];
    s.z(v.d(t)) = st.agents[1].distance - st.agents[0].distance;
    s.z(v.vf(t)) = st.agents[0].speed;
    s.z(v.vl(t)) = st.agents[1].speed;
    if (t < b.horizon) {
      s.z(v.af(t)) = tr.av_accel[t];
      s.z(v.al(t)) = sc.bv_actions[0][t].longitudinal_accel;
    }
  }
  return s;
}

Verdict convexity_suite() {
  Verdict v{true, true, {}};
  const BehaviorModel m{"milanes", kMilanes, std::nullopt};
  const double eta = 1.0;
  int checks = 0, failures = 0;
  for (int T = 1; T <= 5; ++T) {
    ScenarioBounds b;
    b.horizon = T;
    const auto S = build_safe_polytope(milanes_to_generalized(kMilanes), b, eta);
    const auto reduced = project_equalities(S);
    const bool full = reduced.dim() == T + 3 && chebyshev_center(reduced).radius > 0.0;
    std::printf("    T=%d  projected dim %d%s\n", T, reduced.dim(), full ? "" : "  (wrong)");
    v.pass = v.pass && full;

    // pairs of safe in-domain scenarios; their parameter midpoint must be
    // safe under the simulator and lie in the built polytope
    std::vector<TestingScenario> safe;
    std::uint64_t idx = 0;
    const int per_t = kConvexityChecks / 5;
    while (static_cast<int>(safe.size()) < 2 * per_t) {
      StreamRng rng(77, idx++);
      auto sc = sample_scenario(b, rng);
      const auto s = simulate(sc, m, b);
      if (s.accepted && s.min_sm >= eta && S.contains(s.z, 1e-7)) safe.push_back(std::move(sc));
    }
    for (int k = 0; k < per_t; ++k) {
      const auto& x = safe[2 * k];
      const auto& y = safe[2 * k + 1];
      TestingScenario mid = x;
      for (int i = 0; i < 2; ++i) {
        auto& a = mid.initial_state.agents[i];
        const auto& ya = y.initial_state.agents[i];
        a.distance = 0.5 * (a.distance + ya.distance);
        a.speed = 0.5 * (a.speed + ya.speed);
      }
      for (int t = 0; t < T; ++t) {
        auto& a = mid.bv_actions[0][t].longitudinal_accel;
        a = 0.5 * (a + y.bv_actions[0][t].longitudinal_accel);
      }
      const auto s = simulate(mid, m, b);
      const bool ok = s.accepted && s.min_sm >= eta - 1e-9 && S.contains(s.z, 1e-7);
      ++checks;
      failures += !ok;
    }
  }
  std::printf("    midpoint checks %d, failures %d\n", checks, failures);
  v.pass = v.pass && failures == 0 && checks == kConvexityChecks;
  v.summary = "1e4 midpoint-convexity checks on safe sets (T <= 5), projected dim T+3";
  return v;
}

Verdict calibration_round_trip() {
  Verdict v{true, true, {}};
  const auto gen = milanes_to_generalized(kMilanes);
  const auto recs = volsafe::testing::synthetic_trajectory(gen, 500, 1);
  const auto g = fit_linear(recs, CfForm::generalized);
  const auto ml = fit_linear(recs, CfForm::milanes);
  const double e_gen = std::max({rel_err(g.params.k1, gen.k1), rel_err(g.params.k2, gen.k2),
                                 rel_err(g.params.k3, gen.k3)});
  const bool k4_ok = std::abs(g.params.k4) <= kRoundTripRelTol;
  const double e_mil = std::max({rel_err(ml.params.k1, kMilanes.k1),
                                 rel_err(ml.params.k2, kMilanes.k2),
                                 rel_err(ml.params.t_hw, kMilanes.t_hw)});
  std::printf("    generalized max rel.err %.2e (|k4| %.1e), milanes max rel.err %.2e\n", e_gen,
              std::abs(g.params.k4), e_mil);
  v.pass = e_gen <= kRoundTripRelTol && k4_ok && e_mil <= kRoundTripRelTol;

  const auto noisy = volsafe::testing::synthetic_trajectory(gen, kNoisePoints, 2, kNoiseSigma);
  const auto n = fit_linear(noisy, CfForm::generalized);
  std::printf("    noise sigma %.3f, rmse %.4f over %zu points\n", kNoiseSigma, n.rmse,
              n.n_points);
  v.pass = v.pass && n.n_points == static_cast<std::size_t>(kNoisePoints) &&
           rel_err(n.rmse, kNoiseSigma) <= kNoiseRelTol;
  v.summary = "noise-free refit within 1e-6 relative, rmse within 5% of sigma at n = 1e4";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::function<Verdict()>> criteria{
      oracle_equivalence, reference_table,   horizon_monotonicity, headway_sensitivity,
      production_ranking, polytope_fixtures, convexity_suite,      calibration_round_trip};
  bool gate = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v = {false, true, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu: %s%s  %s  [%.1fs]\n", i + 1, v.pass ? "PASS" : "FAIL",
                v.gating ? "" : " (non-gating)", v.summary.c_str(), secs);
    std::fflush(stdout);
    if (v.gating && !v.pass) gate = false;
  }
  return gate ? 0 : 1;
}
