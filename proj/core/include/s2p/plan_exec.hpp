#pragma once

// Executes symbolic plans in the simulator: binds action names back to
// (option, partition) pairs and checks each option's outcome.

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "s2p/abstraction.hpp"
#include "s2p/game_env.hpp"
#include "s2p/options.hpp"
#include "s2p/ppddl.hpp"

namespace s2p {

/// Terminal-state bounds of one outcome over the partition's mask variables.
struct OutcomeBounds {
  double probability = 0.0;
  std::vector<double> lo;
  std::vector<double> hi;
};

/// What plan execution needs to know about a partition.
struct PartitionRecord {
  int option_id = 0;
  int partition = 0;
  std::vector<std::size_t> mask;
  std::vector<std::string> mask_names;
  std::vector<OutcomeBounds> outcomes;
};

std::vector<PartitionRecord> partition_records(const AbstractionResult& r, const std::vector<std::string>& var_names);
/// Reads the partitions file written from partitions_json().
std::vector<PartitionRecord> read_partitions_json(std::string_view text);

class UnknownActionName : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoundAction {
  OptionDef option;
  int partition = 0;
  std::size_t record = 0;  // index into the partition records
};

/// Parses a generated action name (opt<option>_p<partition>_c<k>) and resolves
/// it; throws UnknownActionName for anything else.
BoundAction bind_action(std::string_view name, const std::vector<OptionDef>& options,
                        const std::vector<PartitionRecord>& records);
std::map<std::string, BoundAction> bind_actions(const ppddl::Domain& domain, const std::vector<OptionDef>& options,
                                                const std::vector<PartitionRecord>& records);

struct ExecParams {
  int retry_budget = 3;
  double change_tolerance = 0.01;
  int step_budget = kDefaultStepBudget;
};

struct TraceStep {
  std::string action;
  std::string option;
  TerminationReason reason = TerminationReason::PrimitiveExhausted;
  int micro_steps = 0;
  int attempts = 0;
  bool matched = false;
  StateVector post;
};

struct ExecutionResult {
  bool success = false;
  std::vector<TraceStep> trace;
  WorldState final_state;
  std::string failure;  // empty on success
};

/// Agent within one tile (Chebyshev) of its start position.
bool at_home(const TileMap& map, const WorldState& s);

/// Runs the plan from reset. Option executions draw their seeds from seed.
ExecutionResult execute_symbolic_plan(const TileMap& map, const std::vector<std::string>& plan,
                                      const std::map<std::string, BoundAction>& binding,
                                      const std::vector<PartitionRecord>& records, std::uint64_t seed,
                                      const ExecParams& params = {});

std::string format_trace(const ExecutionResult& r);

enum class Milestone { HandleToggle, KeyPickup, BoltUnlock, TreasurePickup, Home };
std::string_view to_string(Milestone m);

struct PlanMilestone {
  std::size_t step = 0;
  Milestone milestone = Milestone::Home;
};

/// Milestones achieved by the plan's bound partitions, in plan order. A step
/// reaches home when its mask is agent_y and its outcome covers home_y.
std::vector<PlanMilestone> plan_milestones(const std::vector<std::string>& plan,
                                           const std::map<std::string, BoundAction>& binding,
                                           const std::vector<PartitionRecord>& records, double home_y,
                                           double tolerance = 0.01);

/// handle toggle < key pickup < bolt unlock < treasure pickup < final home step.
bool milestones_in_order(const std::vector<PlanMilestone>& milestones);

}  // namespace s2p
