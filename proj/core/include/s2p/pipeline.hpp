#pragma once

// Staged discover → collect → abstract → plan → execute pipeline with every
// intermediate artifact persisted in an output directory.

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "s2p/abstraction.hpp"
#include "s2p/config.hpp"
#include "s2p/discovery.hpp"
#include "s2p/plan_exec.hpp"
#include "s2p/planner.hpp"

namespace s2p {

enum class Stage { Discover, Collect, Abstract, Plan, Execute };
std::string_view to_string(Stage s);
std::optional<Stage> stage_from_string(std::string_view s);
inline constexpr Stage kAllStages[] = {Stage::Discover, Stage::Collect, Stage::Abstract, Stage::Plan, Stage::Execute};

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kInput = 1;
inline constexpr int kGoalUnreachable = 2;
inline constexpr int kIterationLimit = 3;
inline constexpr int kExecutionFailed = 4;
inline constexpr int kAbstractionFailed = 5;
}  // namespace exit_code

namespace artifact {
inline constexpr const char* kOptions = "options.tsv";
inline constexpr const char* kTransitions = "transitions.tsv";
inline constexpr const char* kDomain = "domain.ppddl";
inline constexpr const char* kProblem = "problem.ppddl";
inline constexpr const char* kPartitions = "partitions.json";
inline constexpr const char* kReport = "abstraction_report.txt";
inline constexpr const char* kPlan = "plan.txt";
inline constexpr const char* kTrace = "execution_trace.txt";
}  // namespace artifact

/// Files a stage writes; a stage is skipped when all of them exist.
std::vector<std::string> stage_outputs(Stage s);

/// A goal entry from the [goal] section: a state variable with a numeric value
/// or "start" (its value in the reset state), or symbol = <name>.
struct GoalSpec {
  std::string key;
  std::string value;
};

struct PipelineConfig {
  std::string map_path;
  std::uint64_t seed = 1;
  DiscoveryConfig discovery;
  CollectConfig collect;
  AbstractionParams abstraction;
  PlannerParams planner;
  int plan_max_steps = 10000;
  int success_rollouts = 1000;
  ExecParams execute;
  std::vector<GoalSpec> goal;
};

/// Reads a pipeline configuration; relative map paths resolve against base_dir.
/// Throws ConfigError on unknown keys or malformed values.
PipelineConfig pipeline_config(const Config& cfg, const std::string& base_dir = ".");
PipelineConfig load_pipeline_config(const std::string& path);

/// Per-stage seeds derived from the run seed.
void apply_run_seed(PipelineConfig& cfg, std::uint64_t seed);

/// Resolves goal specs against the reset state of the map.
std::vector<GoalCondition> goal_conditions(const PipelineConfig& cfg, const TileMap& map);

/// Abstraction inputs for a map's option set and samples.
AbstractionInputs abstraction_inputs(const TileMap& map, const std::vector<OptionDef>& options,
                                     std::vector<TransitionSample> samples, std::vector<GoalCondition> goal);

/// Failure of one stage, carrying the process exit code.
class StageError : public std::runtime_error {
 public:
  StageError(Stage stage, int code, const std::string& what)
      : std::runtime_error(std::string(to_string(stage)) + ": " + what), stage_(stage), code_(code) {}
  Stage stage() const { return stage_; }
  int code() const { return code_; }

 private:
  Stage stage_;
  int code_;
};

struct RunOptions {
  std::string out_dir = "out";
  bool force = false;
};

/// Runs one stage, reading its inputs from out_dir. Throws StageError.
void run_stage(Stage stage, const PipelineConfig& cfg, const RunOptions& opts, std::ostream& log);

/// Runs stages in order and returns the process exit code; errors are
/// reported on log as "<stage>: <message>".
int run_stages(const std::vector<Stage>& stages, const PipelineConfig& cfg, const RunOptions& opts, std::ostream& log);

/// Parses plan.txt: comment lines start with '#'.
std::vector<std::string> read_plan(const std::string& text);

}  // namespace s2p
