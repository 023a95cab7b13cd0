// s2p: discover options in the Treasure Game, abstract them into PPDDL, plan,
// and execute the plan back in the simulator.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "s2p/pipeline.hpp"
#include "s2p/ppddl.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  bool force = false;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Pipeline configuration file")->required();
  cmd->add_option("--seed", f.seed, "Override the run seed from the config");
  cmd->add_flag("--force", f.force, "Re-run stages whose outputs already exist");
  cmd->add_option("--out-dir", f.out_dir, "Artifact directory (default: $S2P_OUT_DIR or ./out)");
}

int run(const CommonFlags& f, const std::vector<s2p::Stage>& stages) {
  s2p::PipelineConfig cfg;
  try {
    cfg = s2p::load_pipeline_config(f.config);
  } catch (const s2p::ConfigError& e) {
    std::cerr << "config: " << e.what() << "\n";
    return s2p::exit_code::kInput;
  }
  if (f.seed) s2p::apply_run_seed(cfg, *f.seed);
  s2p::RunOptions opts;
  opts.force = f.force;
  if (!f.out_dir.empty()) {
    opts.out_dir = f.out_dir;
  } else if (const char* env = std::getenv("S2P_OUT_DIR"); env && *env) {
    opts.out_dir = env;
  }
  return s2p::run_stages(stages, cfg, opts, std::cerr);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int validate(const std::string& domain_path, const std::string& problem_path) {
  try {
    const auto domain = s2p::ppddl::parse_domain(read_text(domain_path));
    std::vector<s2p::ppddl::Diagnostic> diags;
    if (problem_path.empty()) {
      diags = s2p::ppddl::validate(domain);
    } else {
      diags = s2p::ppddl::validate(domain, s2p::ppddl::parse_problem(read_text(problem_path)));
    }
    for (const auto& d : diags) std::cerr << s2p::ppddl::format(d) << "\n";
    if (s2p::ppddl::has_errors(diags)) return s2p::exit_code::kInput;
    std::cout << "ok: " << domain.actions.size() << " actions, " << domain.predicates.size() << " predicates\n";
    return s2p::exit_code::kOk;
  } catch (const std::exception& e) {
    std::cerr << "validate-ppddl: " << e.what() << "\n";
    return s2p::exit_code::kInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skill discovery, symbolic abstraction and planning for the Treasure Game"};
  app.require_subcommand(1);

  CommonFlags stage_flags;
  std::vector<std::pair<CLI::App*, s2p::Stage>> stage_cmds;
  const std::pair<const char*, const char*> stage_help[] = {
      {"discover", "Discover options by intrinsically motivated exploration"},
      {"collect", "Collect option transition samples"},
      {"abstract", "Build the symbolic vocabulary and the PPDDL domain and problem"},
      {"plan", "Solve the PPDDL problem and write a linear plan"},
      {"execute", "Execute the plan in the simulator"},
  };
  for (const auto& [name, help] : stage_help) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd, stage_flags);
    stage_cmds.emplace_back(cmd, *s2p::stage_from_string(name));
  }

  CommonFlags pipe_flags;
  std::string only_stage;
  CLI::App* pipeline = app.add_subcommand("pipeline", "Run every stage in order");
  add_common(pipeline, pipe_flags);
  pipeline->add_option("--stage", only_stage, "Run only this stage")
      ->check(CLI::IsMember({"discover", "collect", "abstract", "plan", "execute"}));

  std::string domain_path, problem_path;
  CLI::App* val = app.add_subcommand("validate-ppddl", "Parse and validate a PPDDL domain (and problem)");
  val->add_option("domain", domain_path, "Domain file")->required();
  val->add_option("problem", problem_path, "Problem file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : s2p::exit_code::kInput;
  }

  for (const auto& [cmd, stage] : stage_cmds) {
    if (cmd->parsed()) return run(stage_flags, {stage});
  }
  if (pipeline->parsed()) {
    if (!only_stage.empty()) return run(pipe_flags, {*s2p::stage_from_string(only_stage)});
    return run(pipe_flags, {std::begin(s2p::kAllStages), std::end(s2p::kAllStages)});
  }
  if (val->parsed()) return validate(domain_path, problem_path);
  return s2p::exit_code::kInput;
}
