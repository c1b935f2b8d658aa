#pragma once

#include <iosfwd>

#include <json.hpp>

#include "volsafe/format.hpp"
#include "volsafe/mc/estimator.hpp"

namespace volsafe {

/// Columns: bin_lower,bin_upper,count,proportion,cumulative. The crash bin
/// is reported as [0, 0] and the safe bin's upper edge as "inf".
void write_histogram_csv(std::ostream& out, const RiskHistogram& histogram);

/// Counts, proportions, Wilson intervals per bin and per cumulative
/// threshold, sample accounting, seed and runtime.
nlohmann::json histogram_to_json(const RiskHistogram& histogram);

nlohmann::json ranking_to_json(const Ranking& ranking);

}  // namespace volsafe
