#include "s2p/game_env.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace s2p {

std::string_view to_string(Primitive p) {
  switch (p) {
    case Primitive::GoUp: return "go_up";
    case Primitive::GoDown: return "go_down";
    case Primitive::GoLeft: return "go_left";
    case Primitive::GoRight: return "go_right";
    case Primitive::Interact: return "interact";
  }
  return "?";
}

std::optional<Primitive> primitive_from_string(std::string_view name) {
  for (Primitive p : kAllPrimitives) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::optional<Primitive> reverse(Primitive p) {
  switch (p) {
    case Primitive::GoUp: return Primitive::GoDown;
    case Primitive::GoDown: return Primitive::GoUp;
    case Primitive::GoLeft: return Primitive::GoRight;
    case Primitive::GoRight: return Primitive::GoLeft;
    case Primitive::Interact: return std::nullopt;
  }
  return std::nullopt;
}

int PrimitiveSet::size() const {
  int n = 0;
  for (Primitive p : kAllPrimitives) n += contains(p) ? 1 : 0;
  return n;
}

std::vector<Primitive> PrimitiveSet::to_vector() const {
  std::vector<Primitive> out;
  for (Primitive p : kAllPrimitives) {
    if (contains(p)) out.push_back(p);
  }
  return out;
}

std::string to_string(PrimitiveSet set) {
  std::string s = "{";
  bool first = true;
  for (Primitive p : set.to_vector()) {
    if (!first) s += ",";
    s += to_string(p);
    first = false;
  }
  return s + "}";
}

namespace {

bool tile_passable(const TileMap& map, const WorldState& state, int row, int col) {
  const Tile& t = map.at(row, col);
  if (t.kind == TileKind::Wall) return false;
  if (t.kind == TileKind::Door) return state.door_open[static_cast<std::size_t>(t.index)] != 0;
  return true;
}

int center2(int x, int size) { return 2 * x + size; }  // doubled to stay integral

// True if the box swept vertically from y_from to y_to at column x overlaps a
// ladder run whose centre is within the alignment tolerance of the box centre.
bool ladder_aligned(const TileMap& map, int x, int y_from, int y_to) {
  const int T = map.tile_size_px;
  const int r0 = std::min(y_from, y_to) / T, r1 = (std::max(y_from, y_to) + T - 1) / T;
  const int c0 = x / T, c1 = (x + T - 1) / T;
  const int agent_c2 = center2(x, T);
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      if (map.at(r, c).kind != TileKind::Ladder) continue;
      int a = c, b = c;
      while (a > 0 && map.at(r, a - 1).kind == TileKind::Ladder) --a;
      while (b + 1 < map.cols && map.at(r, b + 1).kind == TileKind::Ladder) ++b;
      const int run_c2 = (a + b + 1) * T;
      if (std::abs(run_c2 - agent_c2) <= 2 * kLadderAlignPx) return true;
    }
  }
  return false;
}

bool can_shift(const TileMap& map, const WorldState& s, int dx, int dy) {
  const int nx = s.agent_x + dx, ny = s.agent_y + dy;
  if (!box_is_free(map, s, nx, ny)) return false;
  if (dy != 0) return ladder_aligned(map, nx, s.agent_y, ny);
  return true;
}

void recompute_doors(const TileMap& map, WorldState& s) {
  s.door_open.assign(map.doors.size(), 0);
  for (std::size_t h = 0; h < map.handles.size(); ++h) {
    if (!s.handle_states[h]) continue;
    for (int d : map.handles[h].doors) s.door_open[static_cast<std::size_t>(d)] ^= 1;
  }
  if (map.bolt_door) s.door_open[static_cast<std::size_t>(*map.bolt_door)] = s.bolt_locked ? 0 : 1;
}

int chebyshev_to_tile(const TileMap& map, const WorldState& s, GridPos tile) {
  const int T = map.tile_size_px;
  const int dx = std::abs(center2(s.agent_x, T) - center2(tile.col * T, T)) / 2;
  const int dy = std::abs(center2(s.agent_y, T) - center2(tile.row * T, T)) / 2;
  return std::max(dx, dy);
}

enum class ObjectKind { Handle, Key, Bolt, Treasure };

struct Target {
  ObjectKind kind;
  int handle = -1;
  int distance = 0;
};

std::optional<Target> nearest_actionable(const TileMap& map, const WorldState& s) {
  const int radius = map.interaction_radius_px();
  std::optional<Target> best;
  auto consider = [&](ObjectKind kind, GridPos pos, int handle) {
    const int d = chebyshev_to_tile(map, s, pos);
    if (d > radius) return;
    if (!best || d < best->distance) best = Target{kind, handle, d};
  };
  for (std::size_t h = 0; h < map.handles.size(); ++h) {
    if (static_cast<int>(h) == s.latched_handle) continue;
    consider(ObjectKind::Handle, map.handles[h].pos, static_cast<int>(h));
  }
  if (map.key && !s.key_held) consider(ObjectKind::Key, *map.key, -1);
  if (map.bolt && s.bolt_locked && s.key_held) consider(ObjectKind::Bolt, *map.bolt, -1);
  if (map.treasure && !s.treasure_held) consider(ObjectKind::Treasure, *map.treasure, -1);
  return best;
}

void release_latch(const TileMap& map, WorldState& s) {
  if (s.latched_handle < 0) return;
  const GridPos pos = map.handles[static_cast<std::size_t>(s.latched_handle)].pos;
  if (chebyshev_to_tile(map, s, pos) > map.interaction_radius_px()) s.latched_handle = -1;
}

}  // namespace

bool box_is_free(const TileMap& map, const WorldState& state, int x, int y) {
  const int T = map.tile_size_px;
  if (x < 0 || y < 0 || x + T > map.width_px() || y + T > map.height_px()) return false;
  const int r0 = y / T, r1 = (y + T - 1) / T;
  const int c0 = x / T, c1 = (x + T - 1) / T;
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      if (!tile_passable(map, state, r, c)) return false;
    }
  }
  return true;
}

WorldState reset(const TileMap& map) {
  const int T = map.tile_size_px;
  WorldState s;
  s.agent_x = map.start.col * T;
  s.agent_y = map.start.row * T;
  s.handle_states.assign(map.handles.size(), 0);
  if (map.key) {
    s.key_x = map.key->col * T;
    s.key_y = map.key->row * T;
  }
  if (map.treasure) {
    s.treasure_x = map.treasure->col * T;
    s.treasure_y = map.treasure->row * T;
  }
  s.bolt_locked = map.bolt.has_value();
  recompute_doors(map, s);
  return s;
}

PrimitiveSet available_primitives(const TileMap& map, const WorldState& state) {
  PrimitiveSet out;
  if (can_shift(map, state, 0, -1)) out.insert(Primitive::GoUp);
  if (can_shift(map, state, 0, 1)) out.insert(Primitive::GoDown);
  if (can_shift(map, state, -1, 0)) out.insert(Primitive::GoLeft);
  if (can_shift(map, state, 1, 0)) out.insert(Primitive::GoRight);
  if (nearest_actionable(map, state)) out.insert(Primitive::Interact);
  return out;
}

WorldState step_primitive_fixed(const TileMap& map, const WorldState& state, Primitive p, int d) {
  if (!available_primitives(map, state).contains(p)) {
    throw ContractError("primitive " + std::string(to_string(p)) + " is not available");
  }
  if (d < kMinStepPx || d > kMaxStepPx) throw ContractError("step displacement out of range");
  WorldState next = state;
  if (p == Primitive::Interact) {
    const Target target = *nearest_actionable(map, state);
    switch (target.kind) {
      case ObjectKind::Handle:
        next.handle_states[static_cast<std::size_t>(target.handle)] ^= 1;
        next.latched_handle = target.handle;
        break;
      case ObjectKind::Key: next.key_held = true; break;
      case ObjectKind::Bolt: next.bolt_locked = false; break;
      case ObjectKind::Treasure: next.treasure_held = true; break;
    }
    recompute_doors(map, next);
    return next;
  }
  int dx = 0, dy = 0;
  switch (p) {
    case Primitive::GoUp: dy = -1; break;
    case Primitive::GoDown: dy = 1; break;
    case Primitive::GoLeft: dx = -1; break;
    case Primitive::GoRight: dx = 1; break;
    case Primitive::Interact: break;
  }
  for (int i = 0; i < d && can_shift(map, next, dx, dy); ++i) {
    next.agent_x += dx;
    next.agent_y += dy;
  }
  release_latch(map, next);
  return next;
}

WorldState step_primitive(const TileMap& map, const WorldState& state, Primitive p, Rng& rng) {
  const int span = kMaxStepPx - kMinStepPx + 1;
  const int d = kMinStepPx + static_cast<int>(rng() % static_cast<std::uint64_t>(span));
  return step_primitive_fixed(map, state, p, d);
}

std::string StateLayout::name(int index) const {
  if (index == agent_x()) return "agent_x";
  if (index == agent_y()) return "agent_y";
  if (index >= 2 && index < 2 + num_handles) return "handle_" + std::to_string(index - 1);
  if (index == key_held()) return "key_held";
  if (index == bolt_locked()) return "bolt_locked";
  if (index == treasure_held()) return "treasure_held";
  if (index == key_x()) return "key_x";
  if (index == key_y()) return "key_y";
  if (index == treasure_x()) return "treasure_x";
  if (index == treasure_y()) return "treasure_y";
  return "var_" + std::to_string(index);
}

std::optional<int> StateLayout::index_of(std::string_view name) const {
  for (int i = 0; i < size(); ++i) {
    if (this->name(i) == name) return i;
  }
  return std::nullopt;
}

StateLayout layout_for(const TileMap& map) { return StateLayout{static_cast<int>(map.handles.size())}; }

StateVector state_vector(const TileMap& map, const WorldState& s) {
  const StateLayout L = layout_for(map);
  const double wx = map.width_px() - map.tile_size_px;
  const double wy = map.height_px() - map.tile_size_px;
  StateVector v(static_cast<std::size_t>(L.size()), 0.0);
  auto set = [&](int i, double value) { v[static_cast<std::size_t>(i)] = value; };
  set(L.agent_x(), s.agent_x / wx);
  set(L.agent_y(), s.agent_y / wy);
  for (int h = 0; h < L.num_handles; ++h) set(L.handle(h), s.handle_states[static_cast<std::size_t>(h)] ? 1.0 : 0.0);
  set(L.key_held(), s.key_held ? 1.0 : 0.0);
  set(L.bolt_locked(), s.bolt_locked ? 1.0 : 0.0);
  set(L.treasure_held(), s.treasure_held ? 1.0 : 0.0);
  set(L.key_x(), s.key_x / wx);
  set(L.key_y(), s.key_y / wy);
  set(L.treasure_x(), s.treasure_x / wx);
  set(L.treasure_y(), s.treasure_y / wy);
  // Quantize to the 9 significant digits used by the dataset files so that
  // in-memory and on-disk samples are identical.
  for (double& x : v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    x = std::strtod(buf, nullptr);
  }
  return v;
}

WorldState world_from_vector(const TileMap& map, const StateVector& v) {
  const StateLayout L = layout_for(map);
  if (static_cast<int>(v.size()) != L.size()) throw ContractError("state vector dimension mismatch");
  const double wx = map.width_px() - map.tile_size_px;
  const double wy = map.height_px() - map.tile_size_px;
  auto at = [&](int i) { return v[static_cast<std::size_t>(i)]; };
  WorldState s = reset(map);
  s.agent_x = static_cast<int>(std::lround(at(L.agent_x()) * wx));
  s.agent_y = static_cast<int>(std::lround(at(L.agent_y()) * wy));
  for (int h = 0; h < L.num_handles; ++h) s.handle_states[static_cast<std::size_t>(h)] = at(L.handle(h)) > 0.5;
  s.key_held = at(L.key_held()) > 0.5;
  s.bolt_locked = at(L.bolt_locked()) > 0.5;
  s.treasure_held = at(L.treasure_held()) > 0.5;
  recompute_doors(map, s);
  return s;
}

}  // namespace s2p
