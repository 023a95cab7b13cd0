#include "s2p/plan_exec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <regex>

#include "s2p/discovery.hpp"

namespace s2p {

std::vector<PartitionRecord> partition_records(const AbstractionResult& r, const std::vector<std::string>& var_names) {
  std::vector<PartitionRecord> out;
  for (const PartitionedOption& p : r.partitions) {
    PartitionRecord rec;
    rec.option_id = p.option_id;
    rec.partition = p.index;
    rec.mask = p.mask;
    for (std::size_t v : p.mask) rec.mask_names.push_back(v < var_names.size() ? var_names[v] : std::to_string(v));
    for (const OutcomeCluster& o : p.outcomes) {
      OutcomeBounds b;
      b.probability = o.probability;
      for (std::size_t v : p.mask) {
        b.lo.push_back(o.lo[v]);
        b.hi.push_back(o.hi[v]);
      }
      rec.outcomes.push_back(std::move(b));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<PartitionRecord> read_partitions_json(std::string_view text) {
  const auto root = nlohmann::json::parse(text);
  std::vector<PartitionRecord> out;
  for (const auto& j : root.at("partitions")) {
    PartitionRecord rec;
    rec.option_id = j.at("option_id").get<int>();
    rec.partition = j.at("partition").get<int>();
    rec.mask = j.at("mask").get<std::vector<std::size_t>>();
    rec.mask_names = j.at("mask_names").get<std::vector<std::string>>();
    for (const auto& o : j.at("outcomes")) {
      rec.outcomes.push_back({o.at("probability").get<double>(), o.at("lo").get<std::vector<double>>(),
                              o.at("hi").get<std::vector<double>>()});
    }
    out.push_back(std::move(rec));
  }
  return out;
}

BoundAction bind_action(std::string_view name, const std::vector<OptionDef>& options,
                        const std::vector<PartitionRecord>& records) {
  static const std::regex pattern(R"(opt(\d+)_p(\d+)_c(\d+))");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(name.begin(), name.end(), m, pattern)) {
    throw UnknownActionName("action '" + std::string(name) + "' was not generated by this pipeline");
  }
  const int option_id = std::stoi(m[1].str());
  const int partition = std::stoi(m[2].str());
  const auto opt = std::find_if(options.begin(), options.end(), [&](const OptionDef& o) { return o.id == option_id; });
  if (opt == options.end()) throw UnknownActionName("action '" + std::string(name) + "' names an unknown option");
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].option_id == option_id && records[i].partition == partition) return {*opt, partition, i};
  }
  throw UnknownActionName("action '" + std::string(name) + "' names an unknown partition");
}

std::map<std::string, BoundAction> bind_actions(const ppddl::Domain& domain, const std::vector<OptionDef>& options,
                                                const std::vector<PartitionRecord>& records) {
  std::map<std::string, BoundAction> out;
  for (const ppddl::Action& a : domain.actions) out.emplace(a.name, bind_action(a.name, options, records));
  return out;
}

bool at_home(const TileMap& map, const WorldState& s) {
  const int T = map.tile_size_px;
  const double hx = map.start.col * T;
  const double hy = map.start.row * T;
  return std::max(std::abs(s.agent_x - hx), std::abs(s.agent_y - hy)) <= T;
}

namespace {

bool outcome_matches(const PartitionRecord& rec, const StateVector& post, double tol) {
  for (const OutcomeBounds& o : rec.outcomes) {
    bool ok = true;
    for (std::size_t k = 0; k < rec.mask.size() && ok; ++k) {
      const double v = post[rec.mask[k]];
      ok = v >= o.lo[k] - tol && v <= o.hi[k] + tol;
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

ExecutionResult execute_symbolic_plan(const TileMap& map, const std::vector<std::string>& plan,
                                      const std::map<std::string, BoundAction>& binding,
                                      const std::vector<PartitionRecord>& records, std::uint64_t seed,
                                      const ExecParams& params) {
  ExecutionResult r;
  WorldState w = reset(map);
  std::uint64_t stream = 0;
  for (std::size_t i = 0; i < plan.size() && r.failure.empty(); ++i) {
    const auto it = binding.find(plan[i]);
    if (it == binding.end()) throw UnknownActionName("plan step '" + plan[i] + "' is not bound");
    const BoundAction& b = it->second;
    TraceStep step;
    step.action = plan[i];
    step.option = b.option.label();
    for (int attempt = 0; attempt <= params.retry_budget; ++attempt) {
      if (!can_initiate(map, w, b.option)) {
        if (attempt == 0) r.failure = "step " + std::to_string(i + 1) + " (" + plan[i] + "): option " +
                                      b.option.label() + " cannot initiate";
        break;
      }
      const OptionResult res = execute_option(map, w, b.option, derive_seed(seed, stream++), params.step_budget);
      w = res.state;
      step.reason = res.sample.reason;
      step.micro_steps += res.sample.steps;
      step.attempts = attempt + 1;
      step.post = res.sample.s_term;
      step.matched = outcome_matches(records[b.record], step.post, params.change_tolerance);
      if (step.matched) break;
    }
    if (step.attempts > 0) r.trace.push_back(std::move(step));
  }
  r.final_state = w;
  r.success = r.failure.empty() && w.treasure_held && at_home(map, w);
  if (r.failure.empty() && !r.success) {
    r.failure = w.treasure_held ? "agent did not return home" : "treasure not held";
  }
  return r;
}

std::string format_trace(const ExecutionResult& r) {
  std::string out = "# step\taction\toption\treason\tmicro_steps\tattempts\tmatched\tpost_state\n";
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const TraceStep& s = r.trace[i];
    out += std::to_string(i + 1) + "\t" + s.action + "\t" + s.option + "\t" + std::string(to_string(s.reason)) + "\t" +
           std::to_string(s.micro_steps) + "\t" + std::to_string(s.attempts) + "\t" + (s.matched ? "yes" : "no") + "\t";
    for (std::size_t k = 0; k < s.post.size(); ++k) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.9g", s.post[k]);
      out += (k ? " " : "") + std::string(buf);
    }
    out += "\n";
  }
  out += std::string("# result: ") + (r.success ? "success" : "failure: " + r.failure) + "\n";
  return out;
}

std::string_view to_string(Milestone m) {
  switch (m) {
    case Milestone::HandleToggle: return "handle";
    case Milestone::KeyPickup: return "key";
    case Milestone::BoltUnlock: return "bolt";
    case Milestone::TreasurePickup: return "treasure";
    case Milestone::Home: return "home";
  }
  return "?";
}

std::vector<PlanMilestone> plan_milestones(const std::vector<std::string>& plan,
                                           const std::map<std::string, BoundAction>& binding,
                                           const std::vector<PartitionRecord>& records, double home_y,
                                           double tolerance) {
  std::vector<PlanMilestone> out;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto it = binding.find(plan[i]);
    if (it == binding.end()) throw UnknownActionName("plan step '" + plan[i] + "' is not bound");
    const PartitionRecord& rec = records[it->second.record];
    for (std::size_t k = 0; k < rec.mask_names.size(); ++k) {
      const std::string& n = rec.mask_names[k];
      if (n.rfind("handle_", 0) == 0) out.push_back({i, Milestone::HandleToggle});
      if (n == "key_held") out.push_back({i, Milestone::KeyPickup});
      if (n == "bolt_locked") out.push_back({i, Milestone::BoltUnlock});
      if (n == "treasure_held") out.push_back({i, Milestone::TreasurePickup});
      if (n == "agent_y") {
        for (const OutcomeBounds& o : rec.outcomes) {
          if (home_y >= o.lo[k] - tolerance && home_y <= o.hi[k] + tolerance) {
            out.push_back({i, Milestone::Home});
            break;
          }
        }
      }
    }
  }
  return out;
}

bool milestones_in_order(const std::vector<PlanMilestone>& milestones) {
  auto first = [&](Milestone m) -> long {
    for (const auto& pm : milestones) {
      if (pm.milestone == m) return static_cast<long>(pm.step);
    }
    return -1;
  };
  long last_home = -1;
  for (const auto& pm : milestones) {
    if (pm.milestone == Milestone::Home) last_home = static_cast<long>(pm.step);
  }
  const long h = first(Milestone::HandleToggle), k = first(Milestone::KeyPickup), b = first(Milestone::BoltUnlock),
             t = first(Milestone::TreasurePickup);
  return h >= 0 && k > h && b > k && t > b && last_home > t;
}

}  // namespace s2p
