#include "volsafe/mc/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

#include "volsafe/errors.hpp"
#include "volsafe/scenario/rollout.hpp"

namespace volsafe {

RiskBinning RiskBinning::defaults() {
  RiskBinning b;
  for (int i = 1; i <= 10; ++i) b.thresholds.push_back(0.5 * i);
  return b;
}

void RiskBinning::validate() const {
  if (thresholds.empty()) throw ConfigError("binning.thresholds", "at least one threshold needed");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0) || !std::isfinite(thresholds[i]))
      throw ConfigError("binning.thresholds", "thresholds must be positive and finite");
    if (i > 0 && !(thresholds[i] > thresholds[i - 1]))
      throw ConfigError("binning.thresholds", "thresholds must be strictly increasing");
  }
}

std::size_t RiskBinning::bin_of(double sm) const noexcept {
  if (sm <= 0.0) return 0;
  // first threshold >= sm; ties land in the lower (dangerous) bin
  const auto it = std::lower_bound(thresholds.begin(), thresholds.end(), sm);
  return 1 + static_cast<std::size_t>(it - thresholds.begin());
}

double RiskBinning::bin_lower(std::size_t bin) const noexcept {
  if (bin <= 1) return 0.0;
  return thresholds[bin - 2];
}

double RiskBinning::bin_upper(std::size_t bin) const noexcept {
  if (bin == 0) return 0.0;
  if (bin > thresholds.size()) return kInfiniteTtc;
  return thresholds[bin - 1];
}

std::size_t RiskBinning::bins_at_or_below(double eta) const {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (std::abs(thresholds[i] - eta) <= 1e-12 * std::max(1.0, eta)) return i + 2;
  }
  throw InvalidArgument("threshold " + std::to_string(eta) + " is not a bin edge");
}

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double RiskHistogram::dangerous_proportion(double eta) const {
  const std::size_t k = binning.bins_at_or_below(eta);
  return std::accumulate(proportions.begin(), proportions.begin() + k, 0.0);
}

Interval RiskHistogram::dangerous_interval(double eta) const {
  const std::size_t k = binning.bins_at_or_below(eta);
  const std::uint64_t c = std::accumulate(counts.begin(), counts.begin() + k, std::uint64_t{0});
  return wilson_interval(c, total_samples);
}

void McConfig::validate() const {
  if (n_samples == 0) throw ConfigError("mc.n_samples", "must be at least 1");
  if (parallel_width < 0) throw ConfigError("mc.parallel_width", "must be non-negative");
  if (max_draws_per_sample == 0) throw ConfigError("mc.max_draws_per_sample", "must be positive");
}

int default_parallel_width() {
  if (const char* env = std::getenv("VOLSAFE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

constexpr std::uint64_t kBlock = 2048;
constexpr std::int8_t kRejected = -1;

struct BlockResult {
  std::vector<std::int8_t> bins;         // per draw; kRejected when outside the box
  std::vector<std::uint8_t> termination;  // per draw
};

void run_block(std::uint64_t begin, std::uint64_t end, const BehaviorModel& model,
               const ScenarioBounds& bounds, const RiskBinning& binning, const McConfig& cfg,
               const SamplingLayout& layout, BlockResult& out) {
  out.bins.resize(end - begin);
  out.termination.resize(end - begin);
  for (std::uint64_t i = begin; i < end; ++i) {
    StreamRng rng(cfg.seed, i);
    const TestingScenario sc = sample_scenario(bounds, layout, rng);
    const RolloutResult r = rollout(sc, model, bounds, cfg.mode);
    if (const auto* o = std::get_if<RolloutOutcome>(&r)) {
      out.bins[i - begin] = static_cast<std::int8_t>(binning.bin_of(o->min_sm));
      out.termination[i - begin] = static_cast<std::uint8_t>(o->termination);
    } else {
      out.bins[i - begin] = kRejected;
    }
  }
}

}  // namespace

RiskHistogram mc_estimate(const BehaviorModel& model, const ScenarioBounds& bounds,
                          const RiskBinning& binning, const McConfig& cfg,
                          const SamplingLayout& layout) {
  binning.validate();
  cfg.validate();
  bounds.validate_allow_degenerate_gap();
  layout.validate(bounds);
  model.cf.validate();
  if (binning.bin_count() > 127) throw ConfigError("binning.thresholds", "too many thresholds");

  const auto t0 = std::chrono::steady_clock::now();
  const int width = cfg.parallel_width > 0 ? cfg.parallel_width : default_parallel_width();
  const bool strict = cfg.mode == DomainMode::polytope_consistent;
  const std::uint64_t max_draws =
      strict ? cfg.n_samples * cfg.max_draws_per_sample : cfg.n_samples;

  RiskHistogram h;
  h.binning = binning;
  h.seed = cfg.seed;
  h.counts.assign(binning.bin_count(), 0);

  std::uint64_t next = 0;  // first draw index not yet merged
  const std::uint64_t blocks_per_round = static_cast<std::uint64_t>(width) * 8;
  std::vector<BlockResult> round(blocks_per_round);
  while (h.total_samples < cfg.n_samples) {
    if (next >= max_draws)
      throw InfeasibleError("mc_estimate: acceptance rate too low, " +
                            std::to_string(h.total_samples) + " accepted in " +
                            std::to_string(next) + " draws");
    // size the round so that clamping mode never draws past n_samples
    const std::uint64_t missing = cfg.n_samples - h.total_samples;
    const std::uint64_t wanted =
        strict ? std::min(max_draws - next, std::max(kBlock, 6 * missing)) : missing;
    const std::uint64_t n_blocks =
        std::min<std::uint64_t>(blocks_per_round, (wanted + kBlock - 1) / kBlock);
    std::atomic<std::uint64_t> cursor{0};
    auto worker = [&] {
      for (std::uint64_t b; (b = cursor.fetch_add(1)) < n_blocks;) {
        const std::uint64_t begin = next + b * kBlock;
        const std::uint64_t end = std::min(begin + kBlock, next + wanted);
        run_block(begin, end, model, bounds, binning, cfg, layout, round[b]);
      }
    };
    const int n_threads = static_cast<int>(std::min<std::uint64_t>(width, n_blocks));
    if (n_threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    // merge in index order, stopping at the n-th accepted sample
    for (std::uint64_t b = 0; b < n_blocks && h.total_samples < cfg.n_samples; ++b) {
      const BlockResult& r = round[b];
      for (std::size_t j = 0; j < r.bins.size() && h.total_samples < cfg.n_samples; ++j) {
        ++next;
        if (r.bins[j] == kRejected) {
          ++h.rejected_samples;
          continue;
        }
        ++h.counts[static_cast<std::size_t>(r.bins[j])];
        ++h.terminations[r.termination[j]];
        ++h.total_samples;
      }
    }
  }

  h.proportions.resize(h.counts.size());
  for (std::size_t k = 0; k < h.counts.size(); ++k)
    h.proportions[k] = static_cast<double>(h.counts[k]) / static_cast<double>(h.total_samples);
  h.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return h;
}

RiskHistogram mc_estimate(const BehaviorModel& model, const ScenarioBounds& bounds,
                          const RiskBinning& binning, const McConfig& cfg) {
  return mc_estimate(model, bounds, binning, cfg, SamplingLayout::for_bounds(bounds));
}

std::vector<double> cumulative_risk(const std::vector<double>& p) {
  std::vector<double> c(p.size());
  std::partial_sum(p.begin(), p.end(), c.begin());
  if (!c.empty()) c.back() = 1.0;
  return c;
}

std::vector<double> cumulative_risk(const RiskHistogram& h) { return cumulative_risk(h.proportions); }

bool dominates(const std::vector<double>& a, const std::vector<double>& b, double tol) noexcept {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i] + tol) return false;
  }
  return true;
}

Ranking rank_models(const std::vector<BehaviorModel>& models, const ScenarioBounds& bounds,
                    const RiskBinning& binning, const McConfig& cfg, const SamplingLayout& layout,
                    double eta) {
  if (models.size() < 2) throw ConfigError("models", "ranking needs at least two models");
  binning.bins_at_or_below(eta);

  Ranking r;
  r.eta = eta;
  for (const auto& m : models) {
    RankEntry e;
    e.name = m.name;
    e.histogram = mc_estimate(m, bounds, binning, cfg, layout);
    e.dangerous = e.histogram.dangerous_proportion(eta);
    e.interval = e.histogram.dangerous_interval(eta);
    r.entries.push_back(std::move(e));
  }
  std::stable_sort(r.entries.begin(), r.entries.end(),
                   [](const RankEntry& a, const RankEntry& b) { return a.dangerous < b.dangerous; });

  for (std::size_t i = 0; i + 1 < r.entries.size(); ++i) {
    const Interval& a = r.entries[i].interval;
    const Interval& b = r.entries[i + 1].interval;
    r.tie_with_next.push_back(a.upper >= b.lower);
  }
  // dominance over the dangerous bins only; the safe bin closes every curve at 1
  const std::size_t k = binning.bins_at_or_below(eta);
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    for (std::size_t j = i + 1; j < r.entries.size(); ++j) {
      auto ci = cumulative_risk(r.entries[i].histogram);
      auto cj = cumulative_risk(r.entries[j].histogram);
      ci.resize(k);
      cj.resize(k);
      if (!dominates(ci, cj) && !dominates(cj, ci))
        r.non_dominating.emplace_back(r.entries[i].name, r.entries[j].name);
    }
  }
  return r;
}

}  // namespace volsafe
