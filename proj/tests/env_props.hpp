#pragma once

// Simulator invariants checked by random-walk fuzzing; shared by the unit
// tests and the acceptance binary.

#include <cstdint>
#include <random>

#include "s2p/game_env.hpp"

namespace s2p::test {

struct FuzzReport {
  long steps = 0;
  long collision_violations = 0;
  long monotone_violations = 0;
};

/// Random walk over available primitives with periodic resets. Checks that the
/// agent box never overlaps a wall or closed door, and that key_held and
/// treasure_held never revert and bolt_locked never re-locks.
inline FuzzReport fuzz_random_walk(const TileMap& map, long steps, std::uint64_t seed, long episode = 5000) {
  Rng rng(seed);
  FuzzReport r;
  WorldState s = reset(map);
  for (long i = 0; i < steps; ++i) {
    if (i % episode == 0) s = reset(map);
    const auto avail = available_primitives(map, s).to_vector();
    if (avail.empty()) {
      s = reset(map);
      continue;
    }
    const Primitive p = avail[rng() % avail.size()];
    const WorldState n = step_primitive(map, s, p, rng);
    ++r.steps;
    if (!box_is_free(map, n, n.agent_x, n.agent_y)) ++r.collision_violations;
    if ((s.key_held && !n.key_held) || (s.treasure_held && !n.treasure_held) || (!s.bolt_locked && n.bolt_locked)) {
      ++r.monotone_violations;
    }
    s = n;
  }
  return r;
}

struct SoundnessReport {
  long pairs = 0;
  long violations = 0;
};

/// Availability soundness on (state, primitive) pairs sampled along a random
/// walk: an available move shifts the agent by 2-4 px along its axis only, an
/// available interact changes exactly one object flag, and an unavailable
/// primitive is refused.
inline SoundnessReport check_availability(const TileMap& map, long pairs, std::uint64_t seed) {
  Rng rng(seed);
  SoundnessReport r;
  WorldState s = reset(map);
  for (long i = 0; i < pairs; ++i) {
    if (i % 3000 == 0) s = reset(map);
    const PrimitiveSet avail = available_primitives(map, s);
    const Primitive p = kAllPrimitives[rng() % kAllPrimitives.size()];
    const int d = kMinStepPx + static_cast<int>(rng() % (kMaxStepPx - kMinStepPx + 1));
    ++r.pairs;
    if (!avail.contains(p)) {
      try {
        step_primitive_fixed(map, s, p, d);
        ++r.violations;
      } catch (const ContractError&) {
      }
    } else {
      const WorldState n = step_primitive_fixed(map, s, p, d);
      const int dx = n.agent_x - s.agent_x, dy = n.agent_y - s.agent_y;
      bool ok = true;
      switch (p) {
        case Primitive::GoUp: ok = dx == 0 && dy <= -1 && dy >= -d; break;
        case Primitive::GoDown: ok = dx == 0 && dy >= 1 && dy <= d; break;
        case Primitive::GoLeft: ok = dy == 0 && dx <= -1 && dx >= -d; break;
        case Primitive::GoRight: ok = dy == 0 && dx >= 1 && dx <= d; break;
        case Primitive::Interact: {
          int changed = (n.key_held != s.key_held) + (n.bolt_locked != s.bolt_locked) +
                        (n.treasure_held != s.treasure_held);
          for (std::size_t h = 0; h < s.handle_states.size(); ++h) changed += n.handle_states[h] != s.handle_states[h];
          ok = dx == 0 && dy == 0 && changed == 1;
          break;
        }
      }
      if (!ok) ++r.violations;
    }
    // Advance along a random available primitive so sampled states cover the map.
    const auto moves = avail.to_vector();
    if (!moves.empty()) s = step_primitive(map, s, moves[rng() % moves.size()], rng);
  }
  return r;
}

}  // namespace s2p::test
