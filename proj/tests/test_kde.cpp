#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "s2p/kde.hpp"

namespace s2p {
namespace {

constexpr double kPi = 3.14159265358979323846;

double gauss(double x, double mu, double h) { return std::exp(-0.5 * (x - mu) * (x - mu) / (h * h)) / (h * std::sqrt(2 * kPi)); }

TEST(Kde, SinglePointUsesBandwidthFloor) {
  const Kde k({{0.5}}, {}, 0.1);
  EXPECT_DOUBLE_EQ(k.bandwidth()[0], 0.1);
  EXPECT_NEAR(k.density({0.5}), 1.0 / (0.1 * std::sqrt(2 * kPi)), 1e-12);
  EXPECT_NEAR(k.density({0.6}), gauss(0.6, 0.5, 0.1), 1e-12);
}

TEST(Kde, ScottBandwidthForTwoPoints) {
  // Population sd of {0, 1} is 0.5; Scott factor n^(-1/5) with n = 2.
  const Kde k({{0.0}, {1.0}}, {}, 1e-3);
  EXPECT_NEAR(k.bandwidth()[0], 0.5 * std::pow(2.0, -0.2), 1e-12);
}

TEST(Kde, WeightsActAsMultiplicity) {
  const Kde a({{0.0}, {1.0}}, {3.0, 1.0});
  const Kde b({{0.0}, {0.0}, {0.0}, {1.0}}, {});
  EXPECT_NEAR(a.bandwidth()[0], b.bandwidth()[0], 1e-12);
  for (double x : {-0.2, 0.1, 0.5, 0.9}) EXPECT_NEAR(a.density({x}), b.density({x}), 1e-9);
  EXPECT_NEAR(a.mean(0), 0.25, 1e-12);
}

TEST(Kde, DensityIntegratesToOne) {
  const Kde k({{0.2, 0.3}, {0.25, 0.7}, {0.8, 0.5}}, {}, 0.05);
  const Box s = k.support();
  const int n = 300;
  double sum = 0.0;
  const double dx = (s.hi[0] - s.lo[0]) / n, dy = (s.hi[1] - s.lo[1]) / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) sum += k.density({s.lo[0] + (i + 0.5) * dx, s.lo[1] + (j + 0.5) * dy});
  }
  EXPECT_NEAR(sum * dx * dy, 1.0, 1e-3);
}

TEST(Kde, BoxMassMatchesNumericalIntegration) {
  const Kde k({{0.1}, {0.4}, {0.45}}, {1.0, 2.0, 1.0}, 0.02);
  const double lo = 0.05, hi = 0.42;
  const int n = 20000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += k.density({lo + (i + 0.5) * (hi - lo) / n});
  EXPECT_NEAR(k.box_mass({lo}, {hi}), sum * (hi - lo) / n, 1e-6);
}

TEST(Kde, GridMassesSumToBoxMass) {
  const Kde k({{0.2, 0.2}, {0.6, 0.9}}, {}, 0.05);
  const Box box{{0.0, 0.0}, {1.0, 1.0}};
  const auto m = k.grid_masses(box, 16);
  ASSERT_EQ(m.size(), 256U);
  EXPECT_NEAR(std::accumulate(m.begin(), m.end(), 0.0), k.box_mass(box.lo, box.hi), 1e-9);
}

TEST(Kde, SupportHoldsAlmostAllMass) {
  const Kde k({{0.3}, {0.35}, {0.9}}, {});
  const Box s = k.support();
  EXPECT_GT(k.box_mass(s.lo, s.hi), 1.0 - 1e-6);
}

TEST(Kde, CoversWithinKBandwidths) {
  const Kde k({{0.5}}, {}, 0.01);
  EXPECT_TRUE(k.covers({0.529}));
  EXPECT_FALSE(k.covers({0.531}));
  EXPECT_TRUE(k.covers({0.531}, 4.0));
}

TEST(Kde, SamplesFollowTheDensity) {
  const Kde k({{0.2}, {0.8}}, {1.0, 3.0}, 0.01);
  std::mt19937_64 rng(3);
  int right = 0;
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = k.sample(rng)[0];
    right += x > 0.5;
    sum += x;
  }
  // Mass above 0.5: each weighted Gaussian component contributes its upper tail.
  const double h = k.bandwidth()[0];
  auto tail = [&](double c) { return 0.5 * std::erfc((0.5 - c) / (h * std::sqrt(2.0))); };
  EXPECT_NEAR(static_cast<double>(right) / n, 0.25 * tail(0.2) + 0.75 * tail(0.8), 0.015);
  EXPECT_NEAR(sum / n, k.mean(0), 0.01);
}

TEST(Kde, L1DistanceProperties) {
  const Kde a({{0.2}, {0.25}}, {}, 0.02);
  const Kde b({{0.7}, {0.75}}, {}, 0.02);
  const Box box = box_union(a.support(), b.support());
  const int bins = grid_bins_for(1);
  EXPECT_NEAR(l1_distance(a, a, box, bins), 0.0, 1e-12);
  EXPECT_NEAR(l1_distance(a, b, box, bins), l1_distance(b, a, box, bins), 1e-12);
  // Disjoint supports: the distance approaches the maximum of 2.
  EXPECT_GT(l1_distance(a, b, box, bins), 1.99);
}

TEST(Kde, GridBinsShrinkWithDimension) {
  EXPECT_EQ(grid_bins_for(1), 32);
  EXPECT_EQ(grid_bins_for(2), 32);
  EXPECT_EQ(grid_bins_for(3), 15);
  EXPECT_EQ(grid_bins_for(4), 8);
  for (std::size_t d = 3; d < 8; ++d) EXPECT_LE(std::pow(grid_bins_for(d), static_cast<double>(d)), 4096.0);
}

TEST(Kde, RejectsEmptyAndMismatchedInput) {
  EXPECT_THROW(Kde({}, {}), std::invalid_argument);
  EXPECT_THROW(Kde({{0.0}}, {1.0, 2.0}), std::invalid_argument);
}

}  // namespace
}  // namespace s2p
