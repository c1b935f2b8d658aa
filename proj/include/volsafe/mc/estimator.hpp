#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "volsafe/mc/sampling.hpp"
#include "volsafe/scenario/behavior.hpp"
#include "volsafe/scenario/types.hpp"

namespace volsafe {

/// Ordered TTC thresholds eta_1 < ... < eta_E. Bin 0 holds crashes
/// (SM = 0), bin e in 1..E holds SM in (eta_{e-1}, eta_e] with eta_0 = 0,
/// and bin E+1 holds SM > eta_E including the infinite sentinel.
struct RiskBinning {
  std::vector<double> thresholds;

  /// 0.5, 1.0, ..., 5.0 s.
  static RiskBinning defaults();
  void validate() const;

  std::size_t bin_count() const noexcept { return thresholds.size() + 2; }
  std::size_t bin_of(double sm) const noexcept;
  double bin_lower(std::size_t bin) const noexcept;
  double bin_upper(std::size_t bin) const noexcept;
  /// Number of bins whose SM values are <= eta; throws unless eta is one of
  /// the thresholds.
  std::size_t bins_at_or_below(double eta) const;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Wilson score interval for k successes out of n (z = 1.96 for 95%).
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);

struct RiskHistogram {
  RiskBinning binning;
  std::vector<std::uint64_t> counts;
  std::vector<double> proportions;
  std::uint64_t total_samples = 0;     ///< accepted samples
  std::uint64_t rejected_samples = 0;  ///< polytope_consistent mode only
  std::uint64_t seed = 0;
  std::array<std::uint64_t, 5> terminations{};  ///< indexed by Termination
  double runtime_seconds = 0.0;

  /// Cumulative proportion of bins at or below threshold eta.
  double dangerous_proportion(double eta) const;
  Interval dangerous_interval(double eta) const;
};

struct McConfig {
  std::uint64_t n_samples = 1'000'000;
  std::uint64_t seed = 0;
  DomainMode mode = DomainMode::clamping;
  /// Worker threads; 0 takes VOLSAFE_THREADS or the hardware concurrency.
  int parallel_width = 0;
  /// In polytope_consistent mode draws continue until n_samples are
  /// accepted; give up after this many draws per requested sample.
  std::uint64_t max_draws_per_sample = 1000;

  void validate() const;
};

/// Thread count used when parallel_width is 0.
int default_parallel_width();

/// Runs n_samples rollouts and bins their minimum TTC. Sample i uses the
/// stream (seed, i). In polytope_consistent mode rejected draws are skipped
/// and the first n_samples accepted draws in index order are kept, so the
/// result never depends on the thread count.
RiskHistogram mc_estimate(const BehaviorModel& av_model, const ScenarioBounds& bounds,
                          const RiskBinning& binning, const McConfig& config,
                          const SamplingLayout& layout);
RiskHistogram mc_estimate(const BehaviorModel& av_model, const ScenarioBounds& bounds,
                          const RiskBinning& binning, const McConfig& config);

/// Running sum of the proportions from the crash bin upward; ends at 1.
std::vector<double> cumulative_risk(const RiskHistogram& histogram);
std::vector<double> cumulative_risk(const std::vector<double>& proportions);

struct RankEntry {
  std::string name;
  RiskHistogram histogram;
  double dangerous = 0.0;
  Interval interval;
};

struct Ranking {
  double eta = 5.0;
  std::vector<RankEntry> entries;  ///< safest first
  /// tie_with_next[i]: the Wilson intervals of entries i and i+1 overlap.
  std::vector<bool> tie_with_next;
  /// Pairs (by name) whose cumulative curves cross, so neither dominates.
  std::vector<std::pair<std::string, std::string>> non_dominating;
};

/// Ranks models by dangerous proportion at `eta`, ascending. All models see
/// the same scenario streams.
Ranking rank_models(const std::vector<BehaviorModel>& models, const ScenarioBounds& bounds,
                    const RiskBinning& binning, const McConfig& config,
                    const SamplingLayout& layout, double eta = 5.0);

/// True when curve `a` is at or below `b` in every bin (a is at least as safe).
bool dominates(const std::vector<double>& cum_a, const std::vector<double>& cum_b,
               double tol = 0.0) noexcept;

}  // namespace volsafe
