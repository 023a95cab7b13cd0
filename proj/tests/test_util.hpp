#pragma once

#include <string>

#include "s2p/game_env.hpp"

namespace s2p::test {

inline std::string data_path(const std::string& name) { return std::string(S2P_DATA_DIR) + "/" + name; }

inline TileMap reference_map() { return load_map_file(data_path("reference.map")); }

/// One horizontal corridor with no ladders or objects.
inline TileMap corridor_map() {
  return load_map(
      "[grid]\n"
      "WWWWWWWW\n"
      "W..S...W\n"
      "WWWWWWWW\n");
}

/// Two floors joined by a ladder, a handle-operated door, key, bolt and treasure.
inline TileMap small_map() {
  return load_map(
      "[grid]\n"
      "WWWWWWWWWW\n"
      "W.S.K..h1.W\n"
      "WWWWLLLWWW\n"
      "W.T.d1..B.W\n"
      "WWWWWWWWWW\n"
      "[links]\n"
      "h1: d1\n");
}

}  // namespace s2p::test
