#pragma once

// Options o(p, t): run primitive p until primitive t becomes available or p
// can no longer be executed.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "s2p/game_env.hpp"

namespace s2p {

struct OptionDef {
  int id = 0;
  Primitive p = Primitive::GoUp;
  std::optional<Primitive> t;  // absent means "{}"

  /// "(go_left, go_up)" or "(go_left, {})".
  std::string label() const;
  friend bool operator==(const OptionDef&, const OptionDef&) = default;
};

/// Canonical ordering: by p in priority order, then t with "{}" first.
bool option_key_less(const OptionDef& a, const OptionDef& b);

/// Sorts by option_key_less and assigns ids 0..n-1. Duplicate (p, t) pairs are dropped.
std::vector<OptionDef> canonicalize_options(std::vector<OptionDef> options);

enum class TerminationReason : std::uint8_t { TerminatorAvailable, PrimitiveExhausted, StepBudget };

std::string_view to_string(TerminationReason r);
std::optional<TerminationReason> termination_reason_from_string(std::string_view s);

struct TransitionSample {
  int option_id = 0;
  StateVector s_init;
  StateVector s_term;
  TerminationReason reason = TerminationReason::PrimitiveExhausted;
  int steps = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const TransitionSample&, const TransitionSample&) = default;
};

inline constexpr int kDefaultStepBudget = 1000;

bool can_initiate(const TileMap& map, const WorldState& state, const OptionDef& opt);

struct OptionResult {
  WorldState state;
  TransitionSample sample;
};

/// Runs the option from state with a generator seeded by seed. Throws
/// ContractError if the option cannot initiate.
OptionResult execute_option(const TileMap& map, const WorldState& state, const OptionDef& opt, std::uint64_t seed,
                            int step_budget = kDefaultStepBudget);

/// Samples admitted to the abstraction dataset: not budget-truncated and s_init != s_term.
bool admissible(const TransitionSample& s);

// Options file: one option per line, "id<TAB>p<TAB>t", t = "-" for "{}".
void write_options(std::ostream& out, const std::vector<OptionDef>& options);
std::vector<OptionDef> read_options(std::istream& in);

// Transitions dataset: header line, then one tab-separated sample per line.
void write_transitions(std::ostream& out, const std::vector<TransitionSample>& samples, const StateLayout& layout);
std::vector<TransitionSample> read_transitions(std::istream& in);

}  // namespace s2p
