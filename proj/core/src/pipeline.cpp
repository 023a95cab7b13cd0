#include "s2p/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace s2p {

namespace fs = std::filesystem;

namespace {

std::string path_in(const RunOptions& o, const std::string& name) { return (fs::path(o.out_dir) / name).string(); }

std::string read_file(Stage stage, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StageError(stage, exit_code::kInput, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes through a temporary file so an interrupted stage never leaves a
// partial artifact that would make the stage look complete.
void write_file(Stage stage, const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StageError(stage, exit_code::kInput, "cannot write " + path);
    out << text;
    if (!out) throw StageError(stage, exit_code::kInput, "cannot write " + path);
  }
  fs::rename(tmp, path);
}

TileMap load_stage_map(Stage stage, const PipelineConfig& cfg) {
  try {
    return load_map_file(cfg.map_path);
  } catch (const MapError& e) {
    throw StageError(stage, exit_code::kInput, std::string(e.what()) + " (map: " + cfg.map_path + ")");
  } catch (const std::exception& e) {
    throw StageError(stage, exit_code::kInput, e.what());
  }
}

std::vector<OptionDef> load_options(Stage stage, const RunOptions& o) {
  std::istringstream in(read_file(stage, path_in(o, artifact::kOptions)));
  try {
    return read_options(in);
  } catch (const std::exception& e) {
    throw StageError(stage, exit_code::kInput, std::string(artifact::kOptions) + ": " + e.what());
  }
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void discover(const PipelineConfig& cfg, const RunOptions& o, std::ostream& log) {
  const TileMap map = load_stage_map(Stage::Discover, cfg);
  const auto options = discover_options(map, cfg.discovery);
  std::ostringstream out;
  write_options(out, options);
  write_file(Stage::Discover, path_in(o, artifact::kOptions), out.str());
  log << "discover: " << options.size() << " options\n";
}

void collect(const PipelineConfig& cfg, const RunOptions& o, std::ostream& log) {
  const TileMap map = load_stage_map(Stage::Collect, cfg);
  const auto options = load_options(Stage::Collect, o);
  if (options.empty()) throw StageError(Stage::Collect, exit_code::kInput, "option set is empty");
  const CollectResult r = collect_transitions(map, options, cfg.collect);
  for (const auto& w : r.warnings) log << "collect: warning: " << w << "\n";
  std::ostringstream out;
  write_transitions(out, r.samples, layout_for(map));
  write_file(Stage::Collect, path_in(o, artifact::kTransitions), out.str());
  log << "collect: " << r.samples.size() << " samples from " << r.executions << " executions\n";
}

void abstract_stage(const PipelineConfig& cfg, const RunOptions& o, std::ostream& log) {
  const TileMap map = load_stage_map(Stage::Abstract, cfg);
  const auto options = load_options(Stage::Abstract, o);
  std::vector<TransitionSample> samples;
  {
    std::istringstream in(read_file(Stage::Abstract, path_in(o, artifact::kTransitions)));
    try {
      samples = read_transitions(in);
    } catch (const std::exception& e) {
      throw StageError(Stage::Abstract, exit_code::kInput, std::string(artifact::kTransitions) + ": " + e.what());
    }
  }
  std::vector<GoalCondition> goal;
  try {
    goal = goal_conditions(cfg, map);
  } catch (const ConfigError& e) {
    throw StageError(Stage::Abstract, exit_code::kInput, e.what());
  }
  const AbstractionInputs in = abstraction_inputs(map, options, std::move(samples), std::move(goal));
  AbstractionResult r;
  try {
    r = abstract(in, cfg.abstraction);
  } catch (const UnreachableGoalSymbols& e) {
    throw StageError(Stage::Abstract, exit_code::kGoalUnreachable, e.what());
  } catch (const AbstractionError& e) {
    throw StageError(Stage::Abstract, exit_code::kAbstractionFailed, e.what());
  }
  write_file(Stage::Abstract, path_in(o, artifact::kDomain), ppddl::emit(r.domain));
  write_file(Stage::Abstract, path_in(o, artifact::kProblem), ppddl::emit(r.problem));
  write_file(Stage::Abstract, path_in(o, artifact::kPartitions), partitions_json(r, in.var_names));
  write_file(Stage::Abstract, path_in(o, artifact::kReport), abstraction_report(r, options, in.var_names));
  for (const auto& w : r.warnings) log << "abstract: warning: " << w << "\n";
  log << "abstract: " << r.partitions.size() << " partitions, " << r.vocabulary.symbols.size() << " symbols, "
      << r.domain.actions.size() << " operators, mean held-out accuracy " << fixed6(r.mean_heldout_accuracy) << "\n";
}

std::pair<ppddl::Domain, ppddl::Problem> load_ppddl(Stage stage, const RunOptions& o) {
  try {
    return {ppddl::parse_domain(read_file(stage, path_in(o, artifact::kDomain))),
            ppddl::parse_problem(read_file(stage, path_in(o, artifact::kProblem)))};
  } catch (const ppddl::ParseError& e) {
    throw StageError(stage, exit_code::kInput, e.what());
  }
}

void plan_stage(const PipelineConfig& cfg, const RunOptions& o, std::ostream& log) {
  const auto [domain, problem] = load_ppddl(Stage::Plan, o);
  const auto diags = ppddl::validate(domain, problem);
  if (ppddl::has_errors(diags)) {
    throw StageError(Stage::Plan, exit_code::kInput, "invalid PPDDL: " + ppddl::format(diags.front()));
  }
  const GroundTask task = ground(domain, problem);
  std::vector<std::string> plan;
  double success = 0.0;
  Policy policy;
  try {
    policy = solve(task, cfg.planner);
    std::mt19937_64 rng(cfg.planner.seed);
    plan = extract_linear_plan(task, policy, rng, cfg.plan_max_steps);
    const int horizon = std::max<int>(1, static_cast<int>(10 * plan.size()));
    success = plan.empty() ? 1.0 : simulate_policy(task, policy, cfg.success_rollouts, horizon, rng);
  } catch (const GoalUnreachable& e) {
    throw StageError(Stage::Plan, exit_code::kGoalUnreachable, e.what());
  } catch (const IterationLimit& e) {
    throw StageError(Stage::Plan, exit_code::kIterationLimit, e.what());
  } catch (const RolloutBudgetExceeded& e) {
    throw StageError(Stage::Plan, exit_code::kIterationLimit, e.what());
  }
  std::string text = "# expected_cost " + fixed6(policy.init_value) + "\n# success_estimate " + fixed6(success) +
                     "\n# steps " + std::to_string(plan.size()) + "\n";
  for (const auto& a : plan) text += a + "\n";
  write_file(Stage::Plan, path_in(o, artifact::kPlan), text);
  log << "plan: " << plan.size() << " steps, expected cost " << fixed6(policy.init_value) << ", success estimate "
      << fixed6(success) << "\n";
}

void execute_stage(const PipelineConfig& cfg, const RunOptions& o, std::ostream& log) {
  const TileMap map = load_stage_map(Stage::Execute, cfg);
  const auto options = load_options(Stage::Execute, o);
  const auto plan = read_plan(read_file(Stage::Execute, path_in(o, artifact::kPlan)));
  ExecutionResult r;
  try {
    const auto records = read_partitions_json(read_file(Stage::Execute, path_in(o, artifact::kPartitions)));
    const auto domain = ppddl::parse_domain(read_file(Stage::Execute, path_in(o, artifact::kDomain)));
    const auto binding = bind_actions(domain, options, records);
    r = execute_symbolic_plan(map, plan, binding, records, derive_seed(cfg.seed, 5), cfg.execute);
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(Stage::Execute, exit_code::kInput, e.what());
  }
  write_file(Stage::Execute, path_in(o, artifact::kTrace), format_trace(r));
  if (!r.success) throw StageError(Stage::Execute, exit_code::kExecutionFailed, r.failure);
  log << "execute: success in " << r.trace.size() << " steps\n";
}

}  // namespace

std::vector<std::string> read_plan(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    out.push_back(line);
  }
  return out;
}

void run_stage(Stage stage, const PipelineConfig& cfg, const RunOptions& o, std::ostream& log) {
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) throw StageError(stage, exit_code::kInput, "cannot create output directory " + o.out_dir);
  if (!o.force) {
    const auto outs = stage_outputs(stage);
    if (std::all_of(outs.begin(), outs.end(), [&](const std::string& f) { return fs::exists(path_in(o, f)); })) {
      log << to_string(stage) << ": outputs present, skipped\n";
      return;
    }
  }
  switch (stage) {
    case Stage::Discover: return discover(cfg, o, log);
    case Stage::Collect: return collect(cfg, o, log);
    case Stage::Abstract: return abstract_stage(cfg, o, log);
    case Stage::Plan: return plan_stage(cfg, o, log);
    case Stage::Execute: return execute_stage(cfg, o, log);
  }
}

int run_stages(const std::vector<Stage>& stages, const PipelineConfig& cfg, const RunOptions& o, std::ostream& log) {
  for (Stage s : stages) {
    try {
      run_stage(s, cfg, o, log);
    } catch (const StageError& e) {
      log << e.what() << "\n";
      return e.code();
    }
  }
  return exit_code::kOk;
}

}  // namespace s2p
