#pragma once

// Density-based clustering with eps-neighbourhoods and core points, plus the
// single-linkage connected components used for outcome sub-clusters.

#include <vector>

namespace s2p {

using Point = std::vector<double>;

inline constexpr int kNoise = -1;

/// Labels each point with a cluster id (0, 1, ... in order of discovery) or
/// kNoise. A point is a core point when the total weight of points within
/// Euclidean distance eps (itself included) is at least min_samples. Weights
/// default to 1 and let callers collapse duplicate points.
std::vector<int> dbscan(const std::vector<Point>& points, double eps, double min_samples,
                        const std::vector<double>& weights = {});

/// Connected components of the graph joining points closer than eps.
std::vector<int> connected_components(const std::vector<Point>& points, double eps);

double euclidean(const Point& a, const Point& b);

}  // namespace s2p
