#pragma once

// Treasure Game simulator: tile map, motion primitives, interactable objects.
//
// Geometry is axis-aligned. The agent is a tile_size_px square whose top-left
// corner is (agent_x, agent_y). Lateral motion is clamped at the first wall or
// closed door; vertical motion additionally requires the agent to be centred
// (within kLadderAlignPx) on a ladder run it is entering or standing in.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace s2p {

using Rng = std::mt19937_64;

enum class Primitive : std::uint8_t { GoUp = 0, GoDown = 1, GoLeft = 2, GoRight = 3, Interact = 4 };

/// Fixed priority order; also the canonical enumeration order.
inline constexpr std::array<Primitive, 5> kAllPrimitives{
    Primitive::GoUp, Primitive::GoDown, Primitive::GoLeft, Primitive::GoRight, Primitive::Interact};

std::string_view to_string(Primitive p);
std::optional<Primitive> primitive_from_string(std::string_view name);
std::optional<Primitive> reverse(Primitive p);

/// Small value-type set of primitives, iterated in priority order.
class PrimitiveSet {
 public:
  constexpr PrimitiveSet() = default;
  constexpr PrimitiveSet(std::initializer_list<Primitive> ps) {
    for (auto p : ps) insert(p);
  }

  constexpr bool contains(Primitive p) const { return (bits_ >> static_cast<int>(p)) & 1U; }
  constexpr void insert(Primitive p) { bits_ |= static_cast<std::uint8_t>(1U << static_cast<int>(p)); }
  constexpr void erase(Primitive p) { bits_ &= static_cast<std::uint8_t>(~(1U << static_cast<int>(p))); }
  constexpr bool empty() const { return bits_ == 0; }
  int size() const;
  std::vector<Primitive> to_vector() const;

  /// Elements of *this that are not in other.
  constexpr PrimitiveSet minus(PrimitiveSet other) const {
    PrimitiveSet r;
    r.bits_ = static_cast<std::uint8_t>(bits_ & ~other.bits_);
    return r;
  }
  constexpr std::uint8_t bits() const { return bits_; }
  friend constexpr bool operator==(PrimitiveSet, PrimitiveSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

std::string to_string(PrimitiveSet set);

enum class TileKind : std::uint8_t { Wall, Empty, Ladder, Door, Start, Key, Bolt, Treasure, Handle };

struct Tile {
  TileKind kind = TileKind::Wall;
  int index = -1;  // dense handle or door index for Handle / Door tiles
};

struct GridPos {
  int row = 0;
  int col = 0;
  friend bool operator==(const GridPos&, const GridPos&) = default;
};

struct HandleInfo {
  int label = 0;  // the digit in "h<label>"
  GridPos pos;
  std::vector<int> doors;  // dense door indices
};

struct DoorInfo {
  int label = 0;  // the digit in "d<label>"
  std::vector<GridPos> tiles;
};

struct TileMap {
  int rows = 0;
  int cols = 0;
  int tile_size_px = 16;
  std::vector<Tile> grid;  // row-major
  std::vector<HandleInfo> handles;
  std::vector<DoorInfo> doors;
  std::optional<int> bolt_door;  // door index opened by unlocking the bolt
  GridPos start;
  std::optional<GridPos> key;
  std::optional<GridPos> bolt;
  std::optional<GridPos> treasure;
  std::vector<int> floor_of_row;  // 1-based floor label counted from the bottom, 0 for non-corridor rows

  const Tile& at(int row, int col) const { return grid[static_cast<std::size_t>(row * cols + col)]; }
  int width_px() const { return cols * tile_size_px; }
  int height_px() const { return rows * tile_size_px; }
  int interaction_radius_px() const { return tile_size_px / 2; }
};

enum class MapErrorKind { Syntax, Semantic };

class MapError : public std::runtime_error {
 public:
  MapError(MapErrorKind kind, int line, int column, const std::string& message);
  MapErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  MapErrorKind kind_;
  int line_;
  int column_;
};

/// Parses and validates a map file. Throws MapError.
TileMap load_map(std::string_view text);
TileMap load_map_file(const std::string& path);

/// Thrown when an operation is called outside its contract.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct WorldState {
  int agent_x = 0;
  int agent_y = 0;
  std::vector<std::uint8_t> handle_states;  // toggled flags, one per handle
  std::vector<std::uint8_t> door_open;      // derived from handle_states and bolt_locked
  bool key_held = false;
  int key_x = 0;
  int key_y = 0;
  bool bolt_locked = false;
  bool treasure_held = false;
  int treasure_x = 0;
  int treasure_y = 0;
  // Handle toggled while the agent has stayed inside its interaction radius.
  // A latched handle is not actionable; leaving the radius releases it.
  int latched_handle = -1;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

inline constexpr int kLadderAlignPx = 4;
inline constexpr int kMinStepPx = 2;
inline constexpr int kMaxStepPx = 4;

WorldState reset(const TileMap& map);

PrimitiveSet available_primitives(const TileMap& map, const WorldState& state);

/// Applies one primitive. Throws ContractError if p is not available.
WorldState step_primitive(const TileMap& map, const WorldState& state, Primitive p, Rng& rng);

/// Same as step_primitive with a fixed displacement (test hook); d in [kMinStepPx, kMaxStepPx].
WorldState step_primitive_fixed(const TileMap& map, const WorldState& state, Primitive p, int d);

/// True if the agent box at (x, y) overlaps no wall or closed door.
bool box_is_free(const TileMap& map, const WorldState& state, int x, int y);

using StateVector = std::vector<double>;

/// Index layout of StateVector for a given map.
struct StateLayout {
  int num_handles = 0;

  int agent_x() const { return 0; }
  int agent_y() const { return 1; }
  int handle(int i) const { return 2 + i; }
  int key_held() const { return 2 + num_handles; }
  int bolt_locked() const { return 3 + num_handles; }
  int treasure_held() const { return 4 + num_handles; }
  int key_x() const { return 5 + num_handles; }
  int key_y() const { return 6 + num_handles; }
  int treasure_x() const { return 7 + num_handles; }
  int treasure_y() const { return 8 + num_handles; }
  int size() const { return 9 + num_handles; }

  std::string name(int index) const;
  std::optional<int> index_of(std::string_view name) const;
};

StateLayout layout_for(const TileMap& map);

StateVector state_vector(const TileMap& map, const WorldState& state);

/// Inverse of state_vector for states reachable on this map (latch cleared).
WorldState world_from_vector(const TileMap& map, const StateVector& v);

}  // namespace s2p
