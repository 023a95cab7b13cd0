#pragma once

// Gaussian product-kernel density estimates with Scott's-rule bandwidths.

#include <random>
#include <vector>

#include "s2p/dbscan.hpp"

namespace s2p {

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

class Kde {
 public:
  Kde() = default;
  /// Weighted fit; weights default to 1 (duplicates may be pre-collapsed).
  /// Bandwidth per dimension: sigma * n^(-1/(d+4)), floored at min_bandwidth.
  Kde(std::vector<Point> centers, std::vector<double> weights, double min_bandwidth = 1e-3);

  std::size_t dims() const { return bandwidth_.size(); }
  const std::vector<Point>& centers() const { return centers_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& bandwidth() const { return bandwidth_; }

  double density(const Point& x) const;
  /// Probability mass inside the axis-aligned box [lo, hi].
  double box_mass(const Point& lo, const Point& hi) const;
  /// Masses of a regular grid of bins per dimension over box, flattened row-major.
  std::vector<double> grid_masses(const Box& box, int bins) const;
  /// Box holding all but a negligible tail: [min - 5h, max + 5h] per dimension.
  Box support() const;
  /// True if some kernel center lies within k bandwidths of x in every dimension.
  bool covers(const Point& x, double k = 3.0) const;
  double mean(std::size_t dim) const;
  Point sample(std::mt19937_64& rng) const;

 private:
  std::vector<Point> centers_;
  std::vector<double> weights_;  // normalized to sum 1
  std::vector<double> bandwidth_;
};

/// Grid resolution used for distances and mass checks in d dimensions: 32 per
/// dimension up to two dimensions, coarser beyond to bound the grid size.
int grid_bins_for(std::size_t dims);

/// L1 distance between the bin-mass vectors of two densities on the same box.
double l1_distance(const Kde& a, const Kde& b, const Box& box, int bins);

Box box_union(const Box& a, const Box& b);

}  // namespace s2p
