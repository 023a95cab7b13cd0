#pragma once

// Goal-directed stochastic shortest path solver over propositional PPDDL.
// Unit action costs; states are bitsets over the domain's predicates.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "s2p/ppddl.hpp"

namespace s2p {

/// Fixed-width bitset over predicate indices.
class SymbolicState {
 public:
  SymbolicState() = default;
  explicit SymbolicState(std::size_t width) : width_(width), words_((width + 63) / 64, 0) {}

  std::size_t width() const { return width_; }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

  /// All bits of mask set here.
  bool contains_all(const SymbolicState& mask) const;
  /// No bit of mask set here.
  bool contains_none(const SymbolicState& mask) const;
  /// (*this & ~del) | add
  SymbolicState apply(const SymbolicState& add, const SymbolicState& del) const;

  const std::vector<std::uint64_t>& words() const { return words_; }
  friend bool operator==(const SymbolicState&, const SymbolicState&) = default;

 private:
  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

struct SymbolicStateHash {
  std::size_t operator()(const SymbolicState& s) const noexcept;
};

struct GroundBranch {
  double probability = 1.0;
  SymbolicState add;
  SymbolicState del;
};

struct GroundAction {
  std::string name;
  SymbolicState pre_pos;
  SymbolicState pre_neg;
  std::vector<GroundBranch> branches;  // includes an explicit no-change branch for any deficit
};

struct GroundTask {
  std::vector<std::string> predicates;
  std::vector<GroundAction> actions;
  SymbolicState init;
  SymbolicState goal_pos;
  SymbolicState goal_neg;

  bool is_goal(const SymbolicState& s) const { return s.contains_all(goal_pos) && s.contains_none(goal_neg); }
  bool applicable(const GroundAction& a, const SymbolicState& s) const {
    return s.contains_all(a.pre_pos) && s.contains_none(a.pre_neg);
  }
};

/// Throws std::invalid_argument on unresolved names.
GroundTask ground(const ppddl::Domain& domain, const ppddl::Problem& problem);

enum class Algorithm { Lrtdp, ValueIteration };

struct PlannerParams {
  double epsilon = 1e-4;
  long max_iterations = 1'000'000;
  Algorithm algorithm = Algorithm::Lrtdp;
  double dead_end_cost = 1e6;
  std::uint64_t seed = 1;
};

class GoalUnreachable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class IterationLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class RolloutBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Policy {
  std::unordered_map<SymbolicState, int, SymbolicStateHash> action;  // index into GroundTask::actions
  std::unordered_map<SymbolicState, double, SymbolicStateHash> value;
  double init_value = 0.0;
  long iterations = 0;  // trials (LRTDP) or sweeps (VI)

  double value_of(const SymbolicState& s) const;
};

Policy solve(const GroundTask& task, const PlannerParams& params = {});
Policy solve(const ppddl::Domain& domain, const ppddl::Problem& problem, const PlannerParams& params = {});

/// Most-probable-outcome rollout; switches to sampled outcomes once a state repeats.
std::vector<std::string> extract_linear_plan(const GroundTask& task, const Policy& policy, std::mt19937_64& rng,
                                             int max_steps = 10000);

/// Fraction of n sampled trajectories that reach the goal within horizon steps.
double simulate_policy(const GroundTask& task, const Policy& policy, int n_rollouts, int horizon,
                       std::mt19937_64& rng);

/// Q(s, a) = 1 + sum_o P(o) V(s_o) under the given value function.
double q_value(const GroundTask& task, const Policy& policy, const SymbolicState& s, int action);

}  // namespace s2p
