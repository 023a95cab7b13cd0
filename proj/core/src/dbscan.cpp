#include "s2p/dbscan.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace s2p {

double euclidean(const Point& a, const Point& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

namespace {

std::vector<std::vector<int>> neighbourhoods(const std::vector<Point>& points, double eps) {
  const std::size_t n = points.size();
  std::vector<std::vector<int>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].push_back(static_cast<int>(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      if (euclidean(points[i], points[j]) <= eps) {
        out[i].push_back(static_cast<int>(j));
        out[j].push_back(static_cast<int>(i));
      }
    }
  }
  return out;
}

}  // namespace

std::vector<int> dbscan(const std::vector<Point>& points, double eps, double min_samples,
                        const std::vector<double>& weights) {
  if (!weights.empty() && weights.size() != points.size()) {
    throw std::invalid_argument("dbscan: weights must match points");
  }
  const std::size_t n = points.size();
  const auto nbrs = neighbourhoods(points, eps);
  std::vector<char> core(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double mass = 0.0;
    for (int j : nbrs[i]) mass += weights.empty() ? 1.0 : weights[static_cast<std::size_t>(j)];
    core[i] = mass >= min_samples ? 1 : 0;
  }
  std::vector<int> label(n, kNoise);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i] || label[i] != kNoise) continue;
    const int id = next++;
    label[i] = id;
    std::deque<int> queue{static_cast<int>(i)};
    while (!queue.empty()) {
      const int p = queue.front();
      queue.pop_front();
      if (!core[static_cast<std::size_t>(p)]) continue;  // border points do not expand
      for (int q : nbrs[static_cast<std::size_t>(p)]) {
        if (label[static_cast<std::size_t>(q)] != kNoise) continue;
        label[static_cast<std::size_t>(q)] = id;
        queue.push_back(q);
      }
    }
  }
  return label;
}

std::vector<int> connected_components(const std::vector<Point>& points, double eps) {
  const auto nbrs = neighbourhoods(points, eps);
  std::vector<int> label(points.size(), -1);
  int next = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (label[i] >= 0) continue;
    const int id = next++;
    label[i] = id;
    std::deque<int> queue{static_cast<int>(i)};
    while (!queue.empty()) {
      const int p = queue.front();
      queue.pop_front();
      for (int q : nbrs[static_cast<std::size_t>(p)]) {
        if (label[static_cast<std::size_t>(q)] < 0) {
          label[static_cast<std::size_t>(q)] = id;
          queue.push_back(q);
        }
      }
    }
  }
  return label;
}

}  // namespace s2p
