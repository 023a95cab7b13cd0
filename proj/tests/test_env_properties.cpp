#include <gtest/gtest.h>

#include "env_props.hpp"
#include "test_util.hpp"

namespace s2p {
namespace {

TEST(SimulatorProperties, RandomWalkKeepsCollisionAndMonotoneInvariants) {
  for (const TileMap& m : {test::reference_map(), test::small_map(), test::corridor_map()}) {
    const auto r = test::fuzz_random_walk(m, 100000, 3);
    EXPECT_EQ(r.collision_violations, 0);
    EXPECT_EQ(r.monotone_violations, 0);
  }
}

TEST(SimulatorProperties, AvailabilityIsSound) {
  for (const TileMap& m : {test::reference_map(), test::small_map()}) {
    const auto r = test::check_availability(m, 20000, 5);
    EXPECT_EQ(r.pairs, 20000);
    EXPECT_EQ(r.violations, 0);
  }
}

TEST(SimulatorProperties, SameSeedSameTrajectory) {
  const TileMap m = test::reference_map();
  auto walk = [&](std::uint64_t seed) {
    Rng rng(seed);
    WorldState s = reset(m);
    for (int i = 0; i < 2000; ++i) {
      const auto a = available_primitives(m, s).to_vector();
      s = step_primitive(m, s, a[rng() % a.size()], rng);
    }
    return s;
  };
  EXPECT_EQ(walk(11), walk(11));
}

TEST(SimulatorProperties, StepDisplacementStaysWithinBounds) {
  const TileMap m = test::corridor_map();
  Rng rng(9);
  for (int i = 0; i < 500; ++i) {
    const WorldState s = reset(m);
    const WorldState n = step_primitive(m, s, Primitive::GoRight, rng);
    EXPECT_GE(n.agent_x - s.agent_x, kMinStepPx);
    EXPECT_LE(n.agent_x - s.agent_x, kMaxStepPx);
  }
}

}  // namespace
}  // namespace s2p
