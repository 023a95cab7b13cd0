#include <gtest/gtest.h>

#include <sstream>

#include "s2p/discovery.hpp"
#include "s2p/options.hpp"
#include "test_util.hpp"

namespace s2p {
namespace {

OptionDef opt(Primitive p, std::optional<Primitive> t = std::nullopt) { return {0, p, t}; }

TEST(Options, LabelFormat) {
  EXPECT_EQ(opt(Primitive::GoLeft, Primitive::GoUp).label(), "(go_left, go_up)");
  EXPECT_EQ(opt(Primitive::Interact).label(), "(interact, {})");
}

TEST(Options, CanonicalOrderAndIds) {
  const auto c = canonicalize_options({opt(Primitive::Interact), opt(Primitive::GoLeft, Primitive::GoUp),
                                       opt(Primitive::GoLeft), opt(Primitive::GoUp), opt(Primitive::GoLeft)});
  ASSERT_EQ(c.size(), 4U);
  EXPECT_EQ(c[0].label(), "(go_up, {})");
  EXPECT_EQ(c[1].label(), "(go_left, {})");
  EXPECT_EQ(c[2].label(), "(go_left, go_up)");
  EXPECT_EQ(c[3].label(), "(interact, {})");
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i].id, static_cast<int>(i));
}

TEST(Options, InitiationNeedsPAndNotT) {
  const TileMap m = test::corridor_map();
  const WorldState s = reset(m);
  EXPECT_TRUE(can_initiate(m, s, opt(Primitive::GoLeft)));
  EXPECT_FALSE(can_initiate(m, s, opt(Primitive::GoUp)));
  // The terminator is already available, so the option would end immediately.
  EXPECT_FALSE(can_initiate(m, s, opt(Primitive::GoLeft, Primitive::GoRight)));
}

TEST(Options, ExhaustionRunsToTheWall) {
  const TileMap m = test::corridor_map();
  const auto r = execute_option(m, reset(m), opt(Primitive::GoRight), 3);
  EXPECT_EQ(r.sample.reason, TerminationReason::PrimitiveExhausted);
  EXPECT_EQ(r.state.agent_x, (m.cols - 2) * 16);
  EXPECT_TRUE(admissible(r.sample));
  EXPECT_FALSE(available_primitives(m, r.state).contains(Primitive::GoRight));
}

TEST(Options, TerminatorStopsWhenItAppears) {
  const TileMap m = test::reference_map();
  WorldState s = reset(m);
  s.agent_y = 3 * 16;  // top corridor, below the home pocket
  s.agent_x = 10 * 16;
  const auto r = execute_option(m, s, opt(Primitive::GoLeft, Primitive::Interact), 5);
  EXPECT_EQ(r.sample.reason, TerminationReason::TerminatorAvailable);
  EXPECT_TRUE(available_primitives(m, r.state).contains(Primitive::Interact));
}

TEST(Options, StepBudgetTruncatesAndIsNotAdmissible) {
  const TileMap m = test::corridor_map();
  const auto r = execute_option(m, reset(m), opt(Primitive::GoRight), 3, 1);
  EXPECT_EQ(r.sample.reason, TerminationReason::StepBudget);
  EXPECT_FALSE(admissible(r.sample));
}

TEST(Options, NotInitiableViolatesContract) {
  const TileMap m = test::corridor_map();
  EXPECT_THROW(execute_option(m, reset(m), opt(Primitive::GoUp), 1), ContractError);
}

TEST(Options, ExecutionIsSeedDeterministic) {
  const TileMap m = test::reference_map();
  const auto a = execute_option(m, reset(m), opt(Primitive::GoDown), 42);
  const auto b = execute_option(m, reset(m), opt(Primitive::GoDown), 42);
  EXPECT_EQ(a.sample, b.sample);
}

TEST(Options, OptionsFileRoundTrip) {
  const auto c = canonicalize_options({opt(Primitive::GoUp), opt(Primitive::GoRight, Primitive::Interact)});
  std::stringstream ss;
  write_options(ss, c);
  EXPECT_EQ(ss.str(), "0\tgo_up\t-\n1\tgo_right\tinteract\n");
  EXPECT_EQ(read_options(ss), c);
}

TEST(Options, MalformedOptionsFileIsRejected) {
  std::istringstream bad("0\tfly\t-\n");
  EXPECT_THROW(read_options(bad), std::runtime_error);
}

TEST(Options, TransitionsFileRoundTrip) {
  const TileMap m = test::reference_map();
  const auto options = discover_options(m, {});
  CollectConfig cc;
  cc.budget = 300;
  const auto samples = collect_transitions(m, options, cc).samples;
  ASSERT_FALSE(samples.empty());
  std::stringstream ss;
  write_transitions(ss, samples, layout_for(m));
  EXPECT_EQ(read_transitions(ss), samples);
}

TEST(Options, ReasonNamesRoundTrip) {
  for (auto r : {TerminationReason::TerminatorAvailable, TerminationReason::PrimitiveExhausted,
                 TerminationReason::StepBudget}) {
    EXPECT_EQ(termination_reason_from_string(to_string(r)), r);
  }
}

}  // namespace
}  // namespace s2p
