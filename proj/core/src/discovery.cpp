#include "s2p/discovery.hpp"

#include <map>

namespace s2p {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::optional<Primitive> new_available_prim(PrimitiveSet prev, PrimitiveSet cur, Primitive p) {
  PrimitiveSet fresh = cur.minus(prev);
  if (const auto r = reverse(p)) fresh.erase(*r);
  for (Primitive q : kAllPrimitives) {
    if (fresh.contains(q)) return q;
  }
  return std::nullopt;
}

std::vector<OptionDef> discover_options(const TileMap& map, const DiscoveryConfig& cfg,
                                        const DiscoveryObserver& observer) {
  Rng rng(cfg.seed);
  std::vector<OptionDef> found;
  auto known = [&](Primitive p, std::optional<Primitive> t) {
    for (const OptionDef& o : found) {
      if (o.p == p && o.t == t) return true;
    }
    return false;
  };

  for (int ep = 0; ep < cfg.max_eps; ++ep) {
    WorldState state = reset(map);
    int steps = 0;
    while (steps < cfg.max_steps) {
      const WorldState start = state;
      const PrimitiveSet avail = available_primitives(map, state);
      if (avail.empty()) break;
      const std::vector<Primitive> choices = avail.to_vector();
      const Primitive p = choices[rng() % choices.size()];

      PrimitiveSet prev = avail;
      std::optional<Primitive> t;
      DiscoveryStep last{p, prev, prev};
      bool truncated = false;
      while (true) {
        if (steps >= cfg.max_steps) {
          truncated = true;
          break;
        }
        state = step_primitive(map, state, p, rng);
        ++steps;
        const PrimitiveSet cur = available_primitives(map, state);
        last = DiscoveryStep{p, prev, cur};
        t = new_available_prim(prev, cur, p);
        if (t || !cur.contains(p)) break;
        prev = cur;
      }
      // A budget-truncated iteration emits nothing.
      if (truncated) break;
      if (state == start) continue;
      if (!known(p, t)) {
        OptionDef opt{static_cast<int>(found.size()), p, t};
        found.push_back(opt);
        if (observer) observer(opt, last);
      }
    }
  }
  return canonicalize_options(std::move(found));
}

CollectResult collect_transitions(const TileMap& map, const std::vector<OptionDef>& options,
                                  const CollectConfig& cfg) {
  CollectResult out;
  if (options.empty() || cfg.budget <= 0) return out;
  std::map<int, int> counts;
  for (const OptionDef& o : options) counts[o.id] = 0;
  auto satisfied = [&] {
    for (const auto& [id, n] : counts) {
      if (n < cfg.min_per_option) return false;
    }
    return true;
  };

  Rng rng(cfg.seed);
  std::uint64_t stream = 0;
  bool done = false;
  while (!done && out.executions < cfg.budget) {
    WorldState state = reset(map);
    for (int k = 0; k < cfg.episode_length && out.executions < cfg.budget; ++k) {
      std::vector<const OptionDef*> initiable;
      for (const OptionDef& o : options) {
        if (can_initiate(map, state, o)) initiable.push_back(&o);
      }
      if (initiable.empty()) break;
      const OptionDef& opt = *initiable[rng() % initiable.size()];
      OptionResult r = execute_option(map, state, opt, derive_seed(cfg.seed, stream++), cfg.step_budget);
      ++out.executions;
      state = r.state;
      if (admissible(r.sample)) {
        ++counts[opt.id];
        out.samples.push_back(std::move(r.sample));
      }
      if (satisfied()) {
        done = true;
        break;
      }
    }
  }
  for (const OptionDef& o : options) {
    const int n = counts[o.id];
    if (n < cfg.min_per_option) {
      out.warnings.push_back("option " + std::to_string(o.id) + " " + o.label() + " has " + std::to_string(n) +
                             " samples (< " + std::to_string(cfg.min_per_option) + ")");
    }
  }
  return out;
}

}  // namespace s2p
