#include "volsafe/mc/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "volsafe/scenario/types.hpp"

namespace volsafe {

void write_histogram_csv(std::ostream& out, const RiskHistogram& h) {
  const auto cum = cumulative_risk(h);
  out << "bin_lower,bin_upper,count,proportion,cumulative\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    out << format_number(h.binning.bin_lower(k)) << ',' << format_number(h.binning.bin_upper(k))
        << ',' << h.counts[k] << ',' << format_number(h.proportions[k]) << ','
        << format_number(cum[k]) << '\n';
  }
}

nlohmann::json histogram_to_json(const RiskHistogram& h) {
  using nlohmann::json;
  const auto cum = cumulative_risk(h);
  json bins = json::array();
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    const Interval ci = wilson_interval(h.counts[k], h.total_samples);
    const double upper = h.binning.bin_upper(k);
    bins.push_back({{"bin_lower", h.binning.bin_lower(k)},
                    {"bin_upper", std::isinf(upper) ? json("inf") : json(upper)},
                    {"count", h.counts[k]},
                    {"proportion", h.proportions[k]},
                    {"cumulative", cum[k]},
                    {"wilson95", {ci.lower, ci.upper}}});
  }
  json dangerous = json::array();
  for (double eta : h.binning.thresholds) {
    const Interval ci = h.dangerous_interval(eta);
    dangerous.push_back({{"eta", eta},
                         {"proportion", h.dangerous_proportion(eta)},
                         {"wilson95", {ci.lower, ci.upper}}});
  }
  json term = json::object();
  for (std::size_t k = 0; k < h.terminations.size(); ++k)
    term[std::string(to_string(static_cast<Termination>(k)))] = h.terminations[k];
  return {{"seed", h.seed},
          {"accepted_samples", h.total_samples},
          {"rejected_samples", h.rejected_samples},
          {"runtime_seconds", h.runtime_seconds},
          {"bins", bins},
          {"dangerous", dangerous},
          {"terminations", term}};
}

nlohmann::json ranking_to_json(const Ranking& r) {
  using nlohmann::json;
  json entries = json::array();
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    const auto& e = r.entries[i];
    entries.push_back({{"rank", i + 1},
                       {"name", e.name},
                       {"dangerous", e.dangerous},
                       {"wilson95", {e.interval.lower, e.interval.upper}},
                       {"tie_with_next", i < r.tie_with_next.size() && r.tie_with_next[i]},
                       {"histogram", histogram_to_json(e.histogram)}});
  }
  json nd = json::array();
  for (const auto& [a, b] : r.non_dominating) nd.push_back({a, b});
  return {{"eta", r.eta}, {"ranking", entries}, {"non_dominating_pairs", nd}};
}

}  // namespace volsafe
