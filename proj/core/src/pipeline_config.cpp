#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <set>

#include "s2p/pipeline.hpp"

namespace s2p {

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Discover: return "discover";
    case Stage::Collect: return "collect";
    case Stage::Abstract: return "abstract";
    case Stage::Plan: return "plan";
    case Stage::Execute: return "execute";
  }
  return "?";
}

std::optional<Stage> stage_from_string(std::string_view s) {
  for (Stage st : kAllStages) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

std::vector<std::string> stage_outputs(Stage s) {
  switch (s) {
    case Stage::Discover: return {artifact::kOptions};
    case Stage::Collect: return {artifact::kTransitions};
    case Stage::Abstract:
      return {artifact::kDomain, artifact::kProblem, artifact::kPartitions, artifact::kReport};
    case Stage::Plan: return {artifact::kPlan};
    case Stage::Execute: return {artifact::kTrace};
  }
  return {};
}

namespace {

const std::set<std::string> kKnownKeys = {
    "env.map",
    "run.seed",
    "discovery.max_eps",
    "discovery.max_steps",
    "collect.budget",
    "collect.min_per_option",
    "collect.episode_length",
    "collect.step_budget",
    "abstraction.eps",
    "abstraction.min_samples",
    "abstraction.change_tolerance",
    "abstraction.mask_fraction",
    "abstraction.min_bandwidth",
    "abstraction.sym_merge_eps",
    "abstraction.precond_accept",
    "abstraction.precond_samples",
    "abstraction.max_conj",
    "abstraction.max_operators",
    "abstraction.classifier_bandwidth",
    "abstraction.max_positives",
    "abstraction.max_negatives",
    "planner.algorithm",
    "planner.epsilon",
    "planner.max_iterations",
    "planner.max_plan_steps",
    "planner.success_rollouts",
    "execute.retry_budget",
    "execute.change_tolerance",
    "execute.step_budget",
};

int as_int(const Config& c, const std::string& key, int fallback) { return static_cast<int>(c.get_int(key, fallback)); }

}  // namespace

PipelineConfig pipeline_config(const Config& c, const std::string& base_dir) {
  for (const auto& [k, v] : c.entries()) {
    if (k.rfind("goal.", 0) == 0) continue;
    if (!kKnownKeys.count(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  PipelineConfig p;
  const auto map = c.get("env.map");
  if (!map || map->empty()) throw ConfigError("config is missing env.map");
  const std::filesystem::path mp(*map);
  p.map_path = mp.is_absolute() ? mp.string() : (std::filesystem::path(base_dir) / mp).lexically_normal().string();

  p.discovery.max_eps = as_int(c, "discovery.max_eps", p.discovery.max_eps);
  p.discovery.max_steps = as_int(c, "discovery.max_steps", p.discovery.max_steps);
  if (p.discovery.max_eps < 0 || p.discovery.max_steps < 1) throw ConfigError("discovery budgets out of range");

  p.collect.budget = as_int(c, "collect.budget", p.collect.budget);
  p.collect.min_per_option = as_int(c, "collect.min_per_option", p.collect.min_per_option);
  p.collect.episode_length = as_int(c, "collect.episode_length", p.collect.episode_length);
  p.collect.step_budget = as_int(c, "collect.step_budget", p.collect.step_budget);
  if (p.collect.budget < 0 || p.collect.episode_length < 1) throw ConfigError("collect budgets out of range");

  AbstractionParams& a = p.abstraction;
  a.eps = c.get_double("abstraction.eps", a.eps);
  a.min_samples = c.get_double("abstraction.min_samples", a.min_samples);
  a.change_tolerance = c.get_double("abstraction.change_tolerance", a.change_tolerance);
  a.mask_fraction = c.get_double("abstraction.mask_fraction", a.mask_fraction);
  a.min_bandwidth = c.get_double("abstraction.min_bandwidth", a.min_bandwidth);
  a.sym_merge_eps = c.get_double("abstraction.sym_merge_eps", a.sym_merge_eps);
  a.precond_accept = c.get_double("abstraction.precond_accept", a.precond_accept);
  a.precond_samples = as_int(c, "abstraction.precond_samples", a.precond_samples);
  a.max_conj = as_int(c, "abstraction.max_conj", a.max_conj);
  a.max_operators = as_int(c, "abstraction.max_operators", a.max_operators);
  a.classifier_bandwidth = c.get_double("abstraction.classifier_bandwidth", a.classifier_bandwidth);
  a.max_positives = as_int(c, "abstraction.max_positives", a.max_positives);
  a.max_negatives = as_int(c, "abstraction.max_negatives", a.max_negatives);
  if (a.eps <= 0 || a.min_samples <= 0 || a.max_conj < 1) throw ConfigError("abstraction parameters out of range");

  const std::string alg = c.get_string("planner.algorithm", "lrtdp");
  if (alg == "lrtdp") {
    p.planner.algorithm = Algorithm::Lrtdp;
  } else if (alg == "vi") {
    p.planner.algorithm = Algorithm::ValueIteration;
  } else {
    throw ConfigError("planner.algorithm must be lrtdp or vi, got '" + alg + "'");
  }
  p.planner.epsilon = c.get_double("planner.epsilon", p.planner.epsilon);
  p.planner.max_iterations = c.get_int("planner.max_iterations", p.planner.max_iterations);
  p.plan_max_steps = as_int(c, "planner.max_plan_steps", p.plan_max_steps);
  p.success_rollouts = as_int(c, "planner.success_rollouts", p.success_rollouts);

  p.execute.retry_budget = as_int(c, "execute.retry_budget", p.execute.retry_budget);
  p.execute.change_tolerance = c.get_double("execute.change_tolerance", p.execute.change_tolerance);
  p.execute.step_budget = as_int(c, "execute.step_budget", p.execute.step_budget);

  for (const auto& [k, v] : c.section("goal")) p.goal.push_back({k, v});
  if (p.goal.empty()) throw ConfigError("config has no [goal] entries");

  apply_run_seed(p, c.get_uint("run.seed", 1));
  return p;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  const Config c = Config::load(path);
  return pipeline_config(c, std::filesystem::path(path).parent_path().string());
}

void apply_run_seed(PipelineConfig& p, std::uint64_t seed) {
  p.seed = seed;
  p.discovery.seed = derive_seed(seed, 1);
  p.collect.seed = derive_seed(seed, 2);
  p.abstraction.seed = derive_seed(seed, 3);
  p.planner.seed = derive_seed(seed, 4);
}

std::vector<GoalCondition> goal_conditions(const PipelineConfig& cfg, const TileMap& map) {
  const StateLayout layout = layout_for(map);
  const StateVector home = state_vector(map, reset(map));
  std::vector<GoalCondition> out;
  for (const GoalSpec& g : cfg.goal) {
    if (g.key == "symbol") {
      out.push_back({"", 0.0, g.value});
      continue;
    }
    const auto idx = layout.index_of(g.key);
    if (!idx) throw ConfigError("goal names unknown state variable '" + g.key + "'");
    double value = 0.0;
    if (g.value == "start") {
      value = home[static_cast<std::size_t>(*idx)];
    } else {
      char* end = nullptr;
      value = std::strtod(g.value.c_str(), &end);
      if (g.value.empty() || *end != '\0') throw ConfigError("goal value for '" + g.key + "' is not a number");
    }
    out.push_back({g.key, value, ""});
  }
  return out;
}

AbstractionInputs abstraction_inputs(const TileMap& map, const std::vector<OptionDef>& options,
                                     std::vector<TransitionSample> samples, std::vector<GoalCondition> goal) {
  AbstractionInputs in;
  in.samples = std::move(samples);
  in.options = options;
  const StateLayout layout = layout_for(map);
  for (int i = 0; i < layout.size(); ++i) in.var_names.push_back(layout.name(i));
  in.reset_state = state_vector(map, reset(map));
  in.initiable = [&map, options](const StateVector& s, int option_id) {
    const auto it =
        std::find_if(options.begin(), options.end(), [&](const OptionDef& o) { return o.id == option_id; });
    return it != options.end() && can_initiate(map, world_from_vector(map, s), *it);
  };
  in.goal = std::move(goal);
  return in;
}

}  // namespace s2p
