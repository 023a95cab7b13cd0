#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "s2p/discovery.hpp"
#include "s2p/plan_exec.hpp"
#include "test_util.hpp"

namespace s2p {
namespace {

std::vector<OptionDef> reference_options() { return discover_options(test::reference_map(), {}); }

std::vector<PartitionRecord> records_for(const std::vector<OptionDef>& options) {
  std::vector<PartitionRecord> out;
  for (const auto& o : options) out.push_back({o.id, 0, {}, {}, {{1.0, {}, {}}}});
  return out;
}

TEST(Binding, ParsesGeneratedNames) {
  const auto options = reference_options();
  const auto records = records_for(options);
  const BoundAction b = bind_action("opt3_p0_c1", options, records);
  EXPECT_EQ(b.option.id, 3);
  EXPECT_EQ(b.partition, 0);
  EXPECT_EQ(b.record, 3U);
}

TEST(Binding, RejectsForeignAndUnknownNames) {
  const auto options = reference_options();
  const auto records = records_for(options);
  EXPECT_THROW(bind_action("jump", options, records), UnknownActionName);
  EXPECT_THROW(bind_action("opt3_p0", options, records), UnknownActionName);
  EXPECT_THROW(bind_action("opt99_p0_c0", options, records), UnknownActionName);
  EXPECT_THROW(bind_action("opt3_p7_c0", options, records), UnknownActionName);
}

TEST(Binding, PartitionsFileRoundTrip) {
  const std::string json = R"({"partitions":[{"option_id":2,"partition":1,"mask":[0],"mask_names":["agent_x"],
    "outcomes":[{"probability":1.0,"lo":[0.25],"hi":[0.3]}]}]})";
  const auto recs = read_partitions_json(json);
  ASSERT_EQ(recs.size(), 1U);
  EXPECT_EQ(recs[0].option_id, 2);
  EXPECT_EQ(recs[0].partition, 1);
  EXPECT_EQ(recs[0].mask_names, (std::vector<std::string>{"agent_x"}));
  EXPECT_DOUBLE_EQ(recs[0].outcomes[0].hi[0], 0.3);
}

// Option sequence that solves the reference map: handles, key, bolt, treasure, home.
const std::vector<std::string> kHandPlan = {
    "(go_down, {})",        "(go_left, {})",       "(interact, {})",      "(go_right, go_down)",
    "(go_down, {})",        "(go_right, {})",      "(interact, {})",      "(go_left, interact)",
    "(interact, {})",       "(go_right, go_down)", "(go_down, {})",       "(go_left, go_down)",
    "(go_down, {})",        "(go_right, go_down)", "(go_down, {})",       "(go_right, interact)",
    "(interact, {})",       "(go_left, go_up)",    "(go_up, {})",         "(go_right, interact)",
    "(interact, {})",       "(go_left, go_up)",    "(go_up, {})",         "(go_right, go_up)",
    "(go_up, {})",          "(go_right, go_up)",   "(go_up, {})",         "(go_left, go_up)",
    "(go_up, {})"};

struct HandPlan {
  std::vector<std::string> plan;
  std::map<std::string, BoundAction> binding;
  std::vector<PartitionRecord> records;
};

HandPlan hand_plan(const std::vector<OptionDef>& options, int skip = -1) {
  HandPlan h;
  h.records = records_for(options);
  for (std::size_t i = 0; i < kHandPlan.size(); ++i) {
    if (static_cast<int>(i) == skip) continue;
    const auto it = std::find_if(options.begin(), options.end(), [&](const OptionDef& o) { return o.label() == kHandPlan[i]; });
    const std::string name = "step" + std::to_string(i);
    h.plan.push_back(name);
    h.binding[name] = {*it, 0, static_cast<std::size_t>(it->id)};
  }
  return h;
}

TEST(Execution, HandWrittenPlanSucceeds) {
  const TileMap map = test::reference_map();
  const auto h = hand_plan(reference_options());
  int successes = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = execute_symbolic_plan(map, h.plan, h.binding, h.records, seed);
    successes += r.success;
    if (r.success) {
      EXPECT_TRUE(r.final_state.treasure_held);
      EXPECT_TRUE(at_home(map, r.final_state));
    }
  }
  EXPECT_EQ(successes, 10);
}

TEST(Execution, EmptyPlanFailsWithoutTreasure) {
  const auto r = execute_symbolic_plan(test::reference_map(), {}, {}, {}, 1);
  EXPECT_FALSE(r.success);
  EXPECT_NE(r.failure.find("treasure not held"), std::string::npos);
}

TEST(Execution, SkippingKeyPickupFailsAtTheBolt) {
  const auto h = hand_plan(reference_options(), 8);
  const auto r = execute_symbolic_plan(test::reference_map(), h.plan, h.binding, h.records, 3);
  EXPECT_FALSE(r.success);
  EXPECT_NE(r.failure.find("cannot initiate"), std::string::npos);
  EXPECT_FALSE(r.final_state.key_held);
  EXPECT_TRUE(r.final_state.bolt_locked);
}

TEST(Execution, UnboundStepThrows) {
  EXPECT_THROW(execute_symbolic_plan(test::reference_map(), {"nope"}, {}, {}, 1), UnknownActionName);
}

TEST(Execution, MismatchedOutcomeIsRetriedAndReported) {
  const auto options = reference_options();
  auto h = hand_plan(options);
  // Expect go_down to end at agent_y = 0 (never true) so every attempt mismatches.
  for (auto& r : h.records) {
    if (r.option_id == 1) r = {1, 0, {1}, {"agent_y"}, {{1.0, {0.0}, {0.0}}}};
  }
  ExecParams p;
  p.retry_budget = 2;
  const auto r = execute_symbolic_plan(test::reference_map(), {h.plan[0]}, h.binding, h.records, 1, p);
  ASSERT_EQ(r.trace.size(), 1U);
  EXPECT_FALSE(r.trace[0].matched);
  EXPECT_GE(r.trace[0].attempts, 1);
  EXPECT_LE(r.trace[0].attempts, 3);
  EXPECT_NE(format_trace(r).find("\tno\t"), std::string::npos);
}

TEST(Execution, TraceIsSeedDeterministic) {
  const auto h = hand_plan(reference_options());
  const TileMap map = test::reference_map();
  EXPECT_EQ(format_trace(execute_symbolic_plan(map, h.plan, h.binding, h.records, 4)),
            format_trace(execute_symbolic_plan(map, h.plan, h.binding, h.records, 4)));
}

TEST(Milestones, OrderCheck) {
  using M = Milestone;
  EXPECT_TRUE(milestones_in_order({{0, M::Home}, {2, M::HandleToggle}, {5, M::KeyPickup}, {7, M::BoltUnlock},
                                   {9, M::TreasurePickup}, {12, M::Home}}));
  EXPECT_FALSE(milestones_in_order({{2, M::KeyPickup}, {5, M::HandleToggle}, {7, M::BoltUnlock},
                                    {9, M::TreasurePickup}, {12, M::Home}}));
  EXPECT_FALSE(milestones_in_order({{2, M::HandleToggle}, {5, M::KeyPickup}, {7, M::BoltUnlock},
                                    {9, M::TreasurePickup}}));
  EXPECT_FALSE(milestones_in_order({}));
  EXPECT_EQ(to_string(M::BoltUnlock), "bolt");
}

TEST(Milestones, DerivedFromPartitionMasks) {
  const auto options = reference_options();
  std::vector<PartitionRecord> recs = {
      {10, 0, {2}, {"handle_1"}, {{1.0, {1.0}, {1.0}}}},
      {10, 1, {4}, {"key_held"}, {{1.0, {1.0}, {1.0}}}},
      {0, 0, {1}, {"agent_y"}, {{1.0, {0.08}, {0.09}}}},
  };
  std::map<std::string, BoundAction> binding = {{"a", {options[10], 0, 0}}, {"b", {options[10], 1, 1}},
                                                {"c", {options[0], 0, 2}}};
  const auto ms = plan_milestones({"a", "b", "c"}, binding, recs, 0.0833);
  ASSERT_EQ(ms.size(), 3U);
  EXPECT_EQ(ms[0].milestone, Milestone::HandleToggle);
  EXPECT_EQ(ms[1].milestone, Milestone::KeyPickup);
  EXPECT_EQ(ms[2].milestone, Milestone::Home);
  EXPECT_EQ(ms[2].step, 2U);
}

}  // namespace
}  // namespace s2p
