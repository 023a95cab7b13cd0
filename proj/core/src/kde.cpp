#include "s2p/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace s2p {

namespace {

constexpr double kPi = 3.14159265358979323846;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

Kde::Kde(std::vector<Point> centers, std::vector<double> weights, double min_bandwidth)
    : centers_(std::move(centers)), weights_(std::move(weights)) {
  if (centers_.empty()) throw std::invalid_argument("Kde needs at least one point");
  if (weights_.empty()) weights_.assign(centers_.size(), 1.0);
  if (weights_.size() != centers_.size()) throw std::invalid_argument("Kde weights must match points");
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  const std::size_t d = centers_.front().size();
  bandwidth_.assign(d, min_bandwidth);
  const double factor = std::pow(total, -1.0 / (static_cast<double>(d) + 4.0));
  for (std::size_t k = 0; k < d; ++k) {
    double mean = 0.0;
    for (std::size_t i = 0; i < centers_.size(); ++i) mean += weights_[i] * centers_[i][k];
    mean /= total;
    double var = 0.0;
    for (std::size_t i = 0; i < centers_.size(); ++i) {
      var += weights_[i] * (centers_[i][k] - mean) * (centers_[i][k] - mean);
    }
    var /= total;
    bandwidth_[k] = std::max(min_bandwidth, std::sqrt(var) * factor);
  }
  for (double& w : weights_) w /= total;
}

double Kde::density(const Point& x) const {
  double norm = 1.0;
  for (double h : bandwidth_) norm *= h * std::sqrt(2.0 * kPi);
  double sum = 0.0;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    double e = 0.0;
    for (std::size_t k = 0; k < bandwidth_.size(); ++k) {
      const double z = (x[k] - centers_[i][k]) / bandwidth_[k];
      e += z * z;
    }
    sum += weights_[i] * std::exp(-0.5 * e);
  }
  return sum / norm;
}

double Kde::box_mass(const Point& lo, const Point& hi) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    double m = weights_[i];
    for (std::size_t k = 0; k < bandwidth_.size() && m > 0.0; ++k) {
      m *= normal_cdf((hi[k] - centers_[i][k]) / bandwidth_[k]) - normal_cdf((lo[k] - centers_[i][k]) / bandwidth_[k]);
    }
    sum += m;
  }
  return sum;
}

std::vector<double> Kde::grid_masses(const Box& box, int bins) const {
  const std::size_t d = dims();
  std::size_t cells = 1;
  for (std::size_t k = 0; k < d; ++k) cells *= static_cast<std::size_t>(bins);
  std::vector<double> out(cells, 0.0);
  std::vector<std::vector<double>> per_dim(d, std::vector<double>(static_cast<std::size_t>(bins)));
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const double width = (box.hi[k] - box.lo[k]) / bins;
      double prev = normal_cdf((box.lo[k] - centers_[i][k]) / bandwidth_[k]);
      for (int b = 0; b < bins; ++b) {
        const double edge = box.lo[k] + width * (b + 1);
        const double cur = normal_cdf((edge - centers_[i][k]) / bandwidth_[k]);
        per_dim[k][static_cast<std::size_t>(b)] = cur - prev;
        prev = cur;
      }
    }
    for (std::size_t c = 0; c < cells; ++c) {
      std::size_t rest = c;
      double m = weights_[i];
      for (std::size_t k = d; k-- > 0;) {
        m *= per_dim[k][rest % static_cast<std::size_t>(bins)];
        rest /= static_cast<std::size_t>(bins);
      }
      out[c] += m;
    }
  }
  return out;
}

Box Kde::support() const {
  Box box{Point(dims(), 0.0), Point(dims(), 0.0)};
  for (std::size_t k = 0; k < dims(); ++k) {
    double lo = centers_.front()[k], hi = lo;
    for (const Point& c : centers_) {
      lo = std::min(lo, c[k]);
      hi = std::max(hi, c[k]);
    }
    box.lo[k] = lo - 5.0 * bandwidth_[k];
    box.hi[k] = hi + 5.0 * bandwidth_[k];
  }
  return box;
}

bool Kde::covers(const Point& x, double k) const {
  for (const Point& c : centers_) {
    bool inside = true;
    for (std::size_t j = 0; j < dims() && inside; ++j) inside = std::abs(x[j] - c[j]) <= k * bandwidth_[j];
    if (inside) return true;
  }
  return false;
}

double Kde::mean(std::size_t dim) const {
  double m = 0.0;
  for (std::size_t i = 0; i < centers_.size(); ++i) m += weights_[i] * centers_[i][dim];
  return m;
}

Point Kde::sample(std::mt19937_64& rng) const {
  std::discrete_distribution<std::size_t> pick(weights_.begin(), weights_.end());
  const Point& c = centers_[pick(rng)];
  Point x(dims());
  for (std::size_t k = 0; k < dims(); ++k) {
    std::normal_distribution<double> n(c[k], bandwidth_[k]);
    x[k] = n(rng);
  }
  return x;
}

int grid_bins_for(std::size_t dims) {
  if (dims <= 2) return 32;
  return std::max(2, static_cast<int>(std::floor(std::pow(4096.0, 1.0 / static_cast<double>(dims)))));
}

double l1_distance(const Kde& a, const Kde& b, const Box& box, int bins) {
  const auto ma = a.grid_masses(box, bins);
  const auto mb = b.grid_masses(box, bins);
  double sum = 0.0;
  for (std::size_t i = 0; i < ma.size(); ++i) sum += std::abs(ma[i] - mb[i]);
  return sum;
}

Box box_union(const Box& a, const Box& b) {
  Box out = a;
  for (std::size_t k = 0; k < a.lo.size(); ++k) {
    out.lo[k] = std::min(a.lo[k], b.lo[k]);
    out.hi[k] = std::max(a.hi[k], b.hi[k]);
  }
  return out;
}

}  // namespace s2p
