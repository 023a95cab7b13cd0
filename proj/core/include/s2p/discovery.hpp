#pragma once

// Curiosity-driven option discovery and transition collection.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "s2p/game_env.hpp"
#include "s2p/options.hpp"

namespace s2p {

struct DiscoveryConfig {
  int max_eps = 200;
  int max_steps = 500;
  std::uint64_t seed = 7;
};

/// The surprise signal: highest-priority primitive in (cur \ prev) other than
/// reverse(p), or nothing.
std::optional<Primitive> new_available_prim(PrimitiveSet prev, PrimitiveSet cur, Primitive p);

/// One micro-step observed during discovery.
struct DiscoveryStep {
  Primitive executing;
  PrimitiveSet before;
  PrimitiveSet after;
};

/// Called for every option emission with the micro-step that ended it.
using DiscoveryObserver = std::function<void(const OptionDef& emitted, const DiscoveryStep& last_step)>;

std::vector<OptionDef> discover_options(const TileMap& map, const DiscoveryConfig& cfg,
                                        const DiscoveryObserver& observer = {});

struct CollectConfig {
  int budget = 20000;          // option executions
  int min_per_option = 100;
  int episode_length = 500;    // option executions per episode before reset
  int step_budget = kDefaultStepBudget;
  std::uint64_t seed = 11;
};

struct CollectResult {
  std::vector<TransitionSample> samples;
  int executions = 0;
  std::vector<std::string> warnings;  // under-sampled options
};

CollectResult collect_transitions(const TileMap& map, const std::vector<OptionDef>& options,
                                  const CollectConfig& cfg);

/// splitmix64 mix of (seed, stream); used for per-execution seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace s2p
