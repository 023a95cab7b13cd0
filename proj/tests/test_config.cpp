#include <gtest/gtest.h>

#include "s2p/config.hpp"
#include "s2p/pipeline.hpp"
#include "test_util.hpp"

namespace s2p {
namespace {

TEST(Config, ParsesSectionsCommentsAndWhitespace) {
  const Config c = Config::parse("# top\n[env]\n map =  a.map \n\n; other\n[run]\nseed=5\n");
  EXPECT_EQ(c.get("env.map"), "a.map");
  EXPECT_EQ(c.get_int("run.seed", 0), 5);
  EXPECT_EQ(c.get_double("run.missing", 0.25), 0.25);
  EXPECT_FALSE(c.has("env.seed"));
}

TEST(Config, SectionKeepsFileOrder) {
  const Config c = Config::parse("[goal]\nz = 1\na = start\n");
  const auto g = c.section("goal");
  ASSERT_EQ(g.size(), 2U);
  EXPECT_EQ(g[0].first, "z");
  EXPECT_EQ(g[1].second, "start");
}

TEST(Config, RejectsMalformedLines) {
  EXPECT_THROW(Config::parse("[env\n"), ConfigError);
  EXPECT_THROW(Config::parse("[env]\njust text\n"), ConfigError);
  EXPECT_THROW(Config::parse("[env]\n= 3\n"), ConfigError);
  EXPECT_THROW(Config::parse("[env]\na = 1\na = 2\n"), ConfigError);
}

TEST(Config, RejectsBadNumbers) {
  const Config c = Config::parse("[run]\nseed = 12x\n");
  EXPECT_THROW(c.get_int("run.seed", 0), ConfigError);
  EXPECT_THROW(c.get_double("run.seed", 0), ConfigError);
}

TEST(Config, DumpParsesBackToTheSameEntries) {
  const Config c = Config::parse("top = 1\n[b]\nx = 2\n[a]\ny = 3\n");
  EXPECT_EQ(Config::parse(c.dump()).entries(), c.entries());
}

TEST(Config, MissingFileNamesThePath) {
  try {
    Config::load("/no/such/file.cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/no/such/file.cfg"), std::string::npos);
  }
}

TEST(PipelineConfig, ReferenceConfigLoads) {
  const PipelineConfig p = load_pipeline_config(test::data_path("reference.cfg"));
  EXPECT_EQ(p.map_path, test::data_path("reference.map"));
  EXPECT_EQ(p.seed, 7U);
  EXPECT_EQ(p.discovery.max_eps, 200);
  EXPECT_DOUBLE_EQ(p.abstraction.eps, 0.01);
  EXPECT_EQ(p.execute.retry_budget, 3);
  EXPECT_EQ(p.goal.size(), 2U);
}

TEST(PipelineConfig, DefaultsAndSeedDerivation) {
  const PipelineConfig p = pipeline_config(Config::parse("[env]\nmap = /x.map\n[goal]\ntreasure_held = 1\n"));
  EXPECT_DOUBLE_EQ(p.abstraction.eps, AbstractionParams{}.eps);
  EXPECT_EQ(p.planner.algorithm, Algorithm::Lrtdp);
  EXPECT_EQ(p.discovery.seed, derive_seed(p.seed, 1));
  PipelineConfig q = p;
  apply_run_seed(q, 99);
  EXPECT_NE(q.collect.seed, p.collect.seed);
}

TEST(PipelineConfig, RejectsUnknownKeysAndMissingSections) {
  EXPECT_THROW(pipeline_config(Config::parse("[env]\nmap = a\nmapp = b\n[goal]\nx = 1\n")), ConfigError);
  EXPECT_THROW(pipeline_config(Config::parse("[goal]\nx = 1\n")), ConfigError);
  EXPECT_THROW(pipeline_config(Config::parse("[env]\nmap = a\n")), ConfigError);
  EXPECT_THROW(pipeline_config(Config::parse("[env]\nmap = a\n[planner]\nalgorithm = astar\n[goal]\nx = 1\n")),
               ConfigError);
}

TEST(PipelineConfig, GoalSpecsResolveAgainstTheMap) {
  const TileMap map = test::reference_map();
  PipelineConfig p;
  p.goal = {{"treasure_held", "1"}, {"agent_y", "start"}, {"symbol", "symbol_3"}};
  const auto g = goal_conditions(p, map);
  ASSERT_EQ(g.size(), 3U);
  EXPECT_EQ(g[0].var, "treasure_held");
  EXPECT_DOUBLE_EQ(g[0].value, 1.0);
  EXPECT_DOUBLE_EQ(g[1].value, state_vector(map, reset(map))[1]);
  EXPECT_EQ(g[2].symbol, "symbol_3");
  p.goal = {{"wings", "1"}};
  EXPECT_THROW(goal_conditions(p, map), ConfigError);
  p.goal = {{"agent_x", "left"}};
  EXPECT_THROW(goal_conditions(p, map), ConfigError);
}

TEST(Stages, NamesRoundTrip) {
  for (Stage s : kAllStages) EXPECT_EQ(stage_from_string(to_string(s)), s);
  EXPECT_FALSE(stage_from_string("deploy").has_value());
}

TEST(Stages, PlanFileParsing) {
  EXPECT_EQ(read_plan("# expected_cost 2\n\nopt1_p0_c0\r\nopt2_p0_c0\n"),
            (std::vector<std::string>{"opt1_p0_c0", "opt2_p0_c0"}));
}

}  // namespace
}  // namespace s2p
