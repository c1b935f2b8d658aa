#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "volsafe/errors.hpp"
#include "volsafe/mc/estimator.hpp"
#include "volsafe/mc/report.hpp"
#include "volsafe/mc/sampling.hpp"

using namespace volsafe;

namespace {

const BehaviorModel kModel{"m", LinearCfParams::milanes(0.23, 0.07, 1.5), MobilParams{}};

// Exact dangerous share at T = 1, l = 5, eta = 1 s (independent convex hull
// volumes of the safe set and the scenario space).
constexpr double kExactT1 = 0.03795076968898847;

McConfig config(std::uint64_t n, std::uint64_t seed, DomainMode mode = DomainMode::clamping,
                int width = 0) {
  McConfig c;
  c.n_samples = n;
  c.seed = seed;
  c.mode = mode;
  c.parallel_width = width;
  return c;
}

}  // namespace

TEST_CASE("risk binning") {
  const auto b = RiskBinning::defaults();
  CHECK(b.thresholds.size() == 10);
  CHECK(b.bin_count() == 12);
  CHECK(b.bin_of(0.0) == 0);
  CHECK(b.bin_of(0.3) == 1);
  CHECK(b.bin_of(0.5) == 1);
  CHECK(b.bin_of(0.51) == 2);
  CHECK(b.bin_of(5.0) == 10);
  CHECK(b.bin_of(5.01) == 11);
  CHECK(b.bin_of(kInfiniteTtc) == 11);
  CHECK(b.bins_at_or_below(5.0) == 11);
  CHECK(b.bins_at_or_below(1.0) == 3);
  CHECK_THROWS_AS(b.bins_at_or_below(1.2), InvalidArgument);
  CHECK_THROWS_AS((RiskBinning{{1.0, 0.5}}).validate(), ConfigError);
  CHECK_THROWS_AS((RiskBinning{{}}).validate(), ConfigError);
  CHECK_THROWS_AS((RiskBinning{{0.0, 1.0}}).validate(), ConfigError);
}

TEST_CASE("cumulative_risk examples") {
  const auto c = cumulative_risk(std::vector<double>{0.1, 0.2, 0.7});
  REQUIRE(c.size() == 3);
  CHECK(c[0] == doctest::Approx(0.1));
  CHECK(c[1] == doctest::Approx(0.3));
  CHECK(c[2] == doctest::Approx(1.0));
  CHECK(dominates({0.1, 0.2, 1.0}, {0.1, 0.3, 1.0}));
  CHECK_FALSE(dominates({0.2, 0.2, 1.0}, {0.1, 0.3, 1.0}));
}

TEST_CASE("Wilson interval examples") {
  const auto z = wilson_interval(0, 10);
  CHECK(z.lower == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(z.upper == doctest::Approx(0.27753).epsilon(1e-4));
  const auto h = wilson_interval(5, 10);
  CHECK(h.lower == doctest::Approx(0.23659).epsilon(1e-4));
  CHECK(h.upper == doctest::Approx(0.76341).epsilon(1e-4));
  const auto f = wilson_interval(10, 10);
  CHECK(f.upper == doctest::Approx(1.0));
  CHECK(f.lower == doctest::Approx(1.0 - 0.27753).epsilon(1e-4));
}

TEST_CASE("sample_scenario draws") {
  ScenarioBounds b;
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    StreamRng rng(1, i);
    const auto sc = sample_scenario(b, rng);
    const auto& ag = sc.initial_state.agents;
    REQUIRE(ag.size() == 2);
    const double d = ag[1].distance - ag[0].distance;
    CHECK((d >= 5.0 && d <= 100.0));
    sum += d;
  }
  CHECK(std::abs(sum / n - 52.5) < 0.5);

  b.gap_max = b.gap_min;
  for (int i = 0; i < 100; ++i) {
    StreamRng rng(2, i);
    const auto sc = sample_scenario(b, rng);
    CHECK(sc.initial_state.agents[1].distance - sc.initial_state.agents[0].distance == 5.0);
  }

  // a shorter horizon draws a prefix of the longer one
  ScenarioBounds s5, s25;
  s5.horizon = 5;
  StreamRng r1(9, 4), r2(9, 4);
  const auto a = sample_scenario(s5, r1);
  const auto c = sample_scenario(s25, r2);
  CHECK(a.initial_state.agents[1].distance == c.initial_state.agents[1].distance);
  for (int t = 0; t < 5; ++t)
    CHECK(a.bv_actions[0][t].longitudinal_accel == c.bv_actions[0][t].longitudinal_accel);
}

TEST_CASE("sampling layouts") {
  ScenarioBounds b;
  CHECK(SamplingLayout::for_bounds(b).slots.size() == 1);
  b.lane_count = 3;
  const auto m = SamplingLayout::for_bounds(b);
  CHECK(m.av_lane == 1);
  CHECK(m.slots.size() == 4);
  StreamRng rng(3, 0);
  const auto sc = sample_scenario(b, m, rng);
  CHECK(sc.initial_state.agents.size() == 5);
  CHECK(sc.initial_state.agents[0].lane == 1);
  SamplingLayout bad = m;
  bad.av_lane = 3;
  CHECK_THROWS_AS(bad.validate(b), InvalidArgument);
  bad = m;
  bad.slots.push_back(bad.slots.front());
  CHECK_THROWS_AS(bad.validate(b), InvalidArgument);
}

TEST_CASE("mc_estimate conservation and threshold monotonicity") {
  for (int lanes : {1, 3}) {
    ScenarioBounds b;
    b.lane_count = lanes;
    const auto h = mc_estimate(kModel, b, RiskBinning::defaults(), config(20000, 5));
    CHECK(h.total_samples == 20000);
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0}) == 20000);
    CHECK(std::accumulate(h.terminations.begin(), h.terminations.end(), std::uint64_t{0}) ==
          20000);
    CHECK(std::accumulate(h.proportions.begin(), h.proportions.end(), 0.0) ==
          doctest::Approx(1.0));
    const auto cum = cumulative_risk(h);
    CHECK(cum.back() == doctest::Approx(1.0));
    double prev = 0.0;
    for (double eta : h.binning.thresholds) {
      const double p = h.dangerous_proportion(eta);
      CHECK(p >= prev);
      prev = p;
      const auto ci = h.dangerous_interval(eta);
      CHECK((ci.lower <= p && p <= ci.upper));
    }
  }
}

TEST_CASE("mc_estimate is independent of the thread count") {
  for (auto mode : {DomainMode::clamping, DomainMode::polytope_consistent}) {
    for (int lanes : {1, 3}) {
      ScenarioBounds b;
      b.lane_count = lanes;
      if (mode == DomainMode::polytope_consistent) {
        if (lanes > 1) continue;
        b.horizon = 2;
      }
      const auto h1 = mc_estimate(kModel, b, RiskBinning::defaults(), config(5000, 11, mode, 1));
      const auto h4 = mc_estimate(kModel, b, RiskBinning::defaults(), config(5000, 11, mode, 4));
      const auto h7 = mc_estimate(kModel, b, RiskBinning::defaults(), config(5000, 11, mode, 7));
      CHECK(h1.counts == h4.counts);
      CHECK(h1.counts == h7.counts);
      CHECK(h1.rejected_samples == h4.rejected_samples);
      CHECK(h1.terminations == h7.terminations);
    }
  }
}

TEST_CASE("single sample gives a one-hot histogram") {
  const auto h = mc_estimate(kModel, ScenarioBounds{}, RiskBinning::defaults(), config(1, 3));
  int ones = 0;
  for (double p : h.proportions) {
    CHECK((p == 0.0 || p == 1.0));
    ones += p == 1.0;
  }
  CHECK(ones == 1);
}

TEST_CASE("polytope_consistent accounting and convergence to the exact share") {
  ScenarioBounds b;
  b.horizon = 1;
  const RiskBinning eta1{{1.0}};
  double prev_err = 1.0;
  for (std::uint64_t n : {1000ull, 10000ull, 100000ull}) {
    const auto h = mc_estimate(kModel, b, eta1, config(n, 21, DomainMode::polytope_consistent));
    CHECK(h.total_samples == n);
    CHECK(h.rejected_samples > 0);
    const double p = h.dangerous_proportion(1.0);
    const double se = std::sqrt(kExactT1 * (1 - kExactT1) / static_cast<double>(n));
    CHECK(std::abs(p - kExactT1) < 4.0 * se);
    prev_err = std::abs(p - kExactT1);
  }
  CHECK(prev_err < 0.003);
}

TEST_CASE("ranking of identical models is a tie") {
  McConfig c = config(20000, 4);
  BehaviorModel a = kModel, b2 = kModel;
  a.name = "a";
  b2.name = "b";
  ScenarioBounds b;
  const auto r = rank_models({a, b2}, b, RiskBinning::defaults(), c, SamplingLayout::for_bounds(b));
  REQUIRE(r.entries.size() == 2);
  CHECK(r.entries[0].dangerous == r.entries[1].dangerous);
  CHECK(r.tie_with_next[0]);
  CHECK(r.non_dominating.empty());
  CHECK_THROWS_AS(
      rank_models({a}, b, RiskBinning::defaults(), c, SamplingLayout::for_bounds(b)), ConfigError);
}

TEST_CASE("invalid estimator configuration") {
  CHECK_THROWS_AS(config(0, 1).validate(), ConfigError);
  CHECK_THROWS_AS(config(10, 1, DomainMode::clamping, -1).validate(), ConfigError);
}

TEST_CASE("histogram csv and json") {
  const auto h = mc_estimate(kModel, ScenarioBounds{}, RiskBinning::defaults(), config(500, 2));
  std::ostringstream os;
  write_histogram_csv(os, h);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "bin_lower,bin_upper,count,proportion,cumulative");
  int rows = 0;
  std::string last;
  while (std::getline(is, line)) {
    ++rows;
    last = line;
  }
  CHECK(rows == 12);
  CHECK(last.rfind("5,inf,", 0) == 0);
  const auto j = histogram_to_json(h);
  CHECK(j.at("accepted_samples").get<std::uint64_t>() == 500);
  CHECK(j.at("seed").get<std::uint64_t>() == 2);
}
