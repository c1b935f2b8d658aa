#pragma once

#include <bitset>
#include <vector>

#include <Eigen/Dense>

#include "volsafe/polytope/hpolytope.hpp"
#include "volsafe/polytope/volume.hpp"

namespace volsafe {

/// Row-incidence set; polytopes handled by the exact engine have at most
/// this many inequality rows.
inline constexpr int kMaxVeRows = 256;
using RowSet = std::bitset<kMaxVeRows>;

struct VertexSet {
  std::vector<Eigen::VectorXd> points;
  std::vector<RowSet> incidence;  ///< rows tight at each vertex
};

struct VeOptions {
  double tolerance = 1e-9;        ///< on normalised constraint residuals
  double merge_distance = 1e-7;   ///< duplicate-vertex radius
  int max_dimension = 10;
  std::size_t max_vertices = 2'000'000;
};

/// Vertices of a bounded, full-dimensional {A z <= b} by the double
/// description method on the homogenised cone, seeded at the Chebyshev
/// center. Throws InfeasibleError on empty/unbounded input or when a guard
/// is exceeded.
VertexSet enumerate_vertices(const HPolytope& p, const VeOptions& options = {});

/// Exact volume: vertices by enumerate_vertices, then a recursive cone
/// decomposition from one vertex of each face over the facets not
/// containing it (the pulling triangulation, summed face by face).
VolumeEstimate ve_volume(const HPolytope& p, const VeOptions& options = {});

}  // namespace volsafe
