#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "s2p/game_env.hpp"

namespace s2p {

MapError::MapError(MapErrorKind kind, int line, int column, const std::string& message)
    : std::runtime_error((kind == MapErrorKind::Syntax ? "syntax error at " : "semantic error at ") +
                         std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

namespace {

enum class Section { None, Grid, Links, Meta };

struct RawCell {
  TileKind kind;
  int label;  // handle / door digit, 0 otherwise
  int column;  // 1-based source column
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void syntax(int line, int col, const std::string& msg) {
  throw MapError(MapErrorKind::Syntax, line, col, msg);
}
[[noreturn]] void semantic(int line, int col, const std::string& msg) {
  throw MapError(MapErrorKind::Semantic, line, col, msg);
}

std::vector<RawCell> parse_grid_row(std::string_view row, int line) {
  std::vector<RawCell> cells;
  for (std::size_t i = 0; i < row.size(); ++i) {
    const int col = static_cast<int>(i) + 1;
    const char c = row[i];
    switch (c) {
      case 'W': cells.push_back({TileKind::Wall, 0, col}); break;
      case '.': cells.push_back({TileKind::Empty, 0, col}); break;
      case 'L': cells.push_back({TileKind::Ladder, 0, col}); break;
      case 'S': cells.push_back({TileKind::Start, 0, col}); break;
      case 'K': cells.push_back({TileKind::Key, 0, col}); break;
      case 'B': cells.push_back({TileKind::Bolt, 0, col}); break;
      case 'T': cells.push_back({TileKind::Treasure, 0, col}); break;
      case 'h':
      case 'd': {
        if (i + 1 >= row.size() || row[i + 1] < '1' || row[i + 1] > '9') {
          syntax(line, col, std::string("expected digit 1-9 after '") + c + "'");
        }
        const int label = row[i + 1] - '0';
        cells.push_back({c == 'h' ? TileKind::Handle : TileKind::Door, label, col});
        ++i;
        break;
      }
      default:
        syntax(line, col, std::string("unknown tile character '") + c + "'");
    }
  }
  return cells;
}

int parse_label(std::string_view tok, char prefix, int line, int col) {
  if (tok.size() != 2 || tok[0] != prefix || tok[1] < '1' || tok[1] > '9') {
    syntax(line, col, "expected " + std::string(1, prefix) + "<1-9>, got '" + std::string(tok) + "'");
  }
  return tok[1] - '0';
}

}  // namespace

TileMap load_map(std::string_view text) {
  Section section = Section::None;
  bool saw_grid = false;
  std::vector<std::vector<RawCell>> raw_rows;
  std::vector<int> row_lines;
  struct LinkLine {
    std::string source;  // "h<i>" or "B"
    std::vector<int> door_labels;
    int line;
    int col;
  };
  std::vector<LinkLine> links;
  int tile_size = 16;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    const std::string_view content = trim(line);
    if (content.empty()) continue;

    if (content.front() == '[') {
      if (content == "[grid]") {
        if (saw_grid) syntax(line_no, 1, "duplicate [grid] section");
        section = Section::Grid;
        saw_grid = true;
      } else if (content == "[links]") {
        section = Section::Links;
      } else if (content == "[meta]") {
        section = Section::Meta;
      } else {
        syntax(line_no, 1, "unknown section " + std::string(content));
      }
      continue;
    }

    switch (section) {
      case Section::None:
        syntax(line_no, 1, "content outside of a section");
      case Section::Grid: {
        if (std::isspace(static_cast<unsigned char>(line.front()))) syntax(line_no, 1, "grid rows must not be indented");
        raw_rows.push_back(parse_grid_row(content, line_no));
        row_lines.push_back(line_no);
        break;
      }
      case Section::Links: {
        const auto colon = content.find(':');
        if (colon == std::string_view::npos) syntax(line_no, 1, "expected '<source>: <doors>'");
        LinkLine ll;
        ll.source = std::string(trim(content.substr(0, colon)));
        ll.line = line_no;
        ll.col = 1;
        if (ll.source != "B") parse_label(ll.source, 'h', line_no, 1);
        std::string_view rest = content.substr(colon + 1);
        int col = static_cast<int>(colon) + 2;
        while (true) {
          const auto comma = rest.find(',');
          const std::string_view tok = trim(rest.substr(0, comma));
          if (tok.empty()) syntax(line_no, col, "empty door reference");
          ll.door_labels.push_back(parse_label(tok, 'd', line_no, col));
          if (comma == std::string_view::npos) break;
          col += static_cast<int>(comma) + 1;
          rest = rest.substr(comma + 1);
        }
        links.push_back(std::move(ll));
        break;
      }
      case Section::Meta: {
        const auto eq = content.find('=');
        if (eq == std::string_view::npos) syntax(line_no, 1, "expected 'key = value'");
        const std::string key(trim(content.substr(0, eq)));
        const std::string value(trim(content.substr(eq + 1)));
        if (key != "tile_size_px") syntax(line_no, 1, "unknown meta key '" + key + "'");
        try {
          std::size_t used = 0;
          tile_size = std::stoi(value, &used);
          if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
          syntax(line_no, static_cast<int>(eq) + 2, "tile_size_px must be an integer");
        }
        if (tile_size < 4 || tile_size % 2 != 0) semantic(line_no, 1, "tile_size_px must be even and >= 4");
        break;
      }
    }
  }

  if (!saw_grid || raw_rows.empty()) semantic(line_no, 1, "missing [grid] section");

  TileMap map;
  map.tile_size_px = tile_size;
  map.rows = static_cast<int>(raw_rows.size());
  map.cols = static_cast<int>(raw_rows.front().size());
  for (std::size_t r = 0; r < raw_rows.size(); ++r) {
    if (static_cast<int>(raw_rows[r].size()) != map.cols) {
      syntax(row_lines[r], 1,
             "grid row has " + std::to_string(raw_rows[r].size()) + " cells, expected " + std::to_string(map.cols));
    }
  }
  if (map.rows < 3 || map.cols < 3) semantic(row_lines.front(), 1, "grid must be at least 3x3");

  // Dense indices ordered by label.
  std::map<int, GridPos> handle_pos;
  std::map<int, std::vector<GridPos>> door_tiles;
  int starts = 0;
  for (int r = 0; r < map.rows; ++r) {
    for (int c = 0; c < map.cols; ++c) {
      const RawCell& cell = raw_rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      const bool border = r == 0 || c == 0 || r == map.rows - 1 || c == map.cols - 1;
      if (border && cell.kind != TileKind::Wall) {
        semantic(row_lines[static_cast<std::size_t>(r)], cell.column, "outer boundary must be wall");
      }
      const GridPos gp{r, c};
      switch (cell.kind) {
        case TileKind::Start:
          ++starts;
          if (starts > 1) semantic(row_lines[static_cast<std::size_t>(r)], cell.column, "more than one start");
          map.start = gp;
          break;
        case TileKind::Key:
          if (map.key) semantic(row_lines[static_cast<std::size_t>(r)], cell.column, "more than one key");
          map.key = gp;
          break;
        case TileKind::Bolt:
          if (map.bolt) semantic(row_lines[static_cast<std::size_t>(r)], cell.column, "more than one bolt");
          map.bolt = gp;
          break;
        case TileKind::Treasure:
          if (map.treasure) semantic(row_lines[static_cast<std::size_t>(r)], cell.column, "more than one treasure");
          map.treasure = gp;
          break;
        case TileKind::Handle:
          if (handle_pos.count(cell.label)) {
            semantic(row_lines[static_cast<std::size_t>(r)], cell.column,
                     "handle h" + std::to_string(cell.label) + " appears twice");
          }
          handle_pos[cell.label] = gp;
          break;
        case TileKind::Door:
          door_tiles[cell.label].push_back(gp);
          break;
        default:
          break;
      }
    }
  }
  if (starts == 0) semantic(line_no, 1, "missing start 'S'");
  if ((map.key || map.bolt) && !map.treasure) semantic(line_no, 1, "missing treasure 'T'");
  if (map.bolt && !map.key) semantic(line_no, 1, "bolt without a key can never be unlocked");

  std::map<int, int> handle_index;
  std::map<int, int> door_index;
  for (const auto& [label, gp] : handle_pos) {
    handle_index[label] = static_cast<int>(map.handles.size());
    map.handles.push_back(HandleInfo{label, gp, {}});
  }
  for (const auto& [label, tiles] : door_tiles) {
    door_index[label] = static_cast<int>(map.doors.size());
    map.doors.push_back(DoorInfo{label, tiles});
  }

  map.grid.resize(static_cast<std::size_t>(map.rows * map.cols));
  for (int r = 0; r < map.rows; ++r) {
    for (int c = 0; c < map.cols; ++c) {
      const RawCell& cell = raw_rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      Tile t{cell.kind, -1};
      if (cell.kind == TileKind::Handle) t.index = handle_index.at(cell.label);
      if (cell.kind == TileKind::Door) t.index = door_index.at(cell.label);
      map.grid[static_cast<std::size_t>(r * map.cols + c)] = t;
    }
  }

  std::vector<bool> linked(map.handles.size(), false);
  for (const LinkLine& ll : links) {
    std::vector<int> doors;
    for (int dl : ll.door_labels) {
      const auto it = door_index.find(dl);
      if (it == door_index.end()) semantic(ll.line, ll.col, "dangling door link d" + std::to_string(dl));
      doors.push_back(it->second);
    }
    if (ll.source == "B") {
      if (!map.bolt) semantic(ll.line, ll.col, "bolt link but no bolt 'B' in grid");
      if (map.bolt_door || doors.size() != 1) semantic(ll.line, ll.col, "the bolt links exactly one door");
      map.bolt_door = doors.front();
      continue;
    }
    const int label = ll.source[1] - '0';
    const auto it = handle_index.find(label);
    if (it == handle_index.end()) semantic(ll.line, ll.col, "link for unknown handle " + ll.source);
    if (linked[static_cast<std::size_t>(it->second)]) semantic(ll.line, ll.col, "duplicate links for " + ll.source);
    linked[static_cast<std::size_t>(it->second)] = true;
    map.handles[static_cast<std::size_t>(it->second)].doors = std::move(doors);
  }
  for (std::size_t h = 0; h < map.handles.size(); ++h) {
    if (!linked[h]) {
      const GridPos gp = map.handles[h].pos;
      semantic(row_lines[static_cast<std::size_t>(gp.row)], 1,
               "handle h" + std::to_string(map.handles[h].label) + " links no door");
    }
  }

  map.floor_of_row.assign(static_cast<std::size_t>(map.rows), 0);
  int floor = 0;
  for (int r = map.rows - 1; r >= 0; --r) {
    bool corridor = false;
    for (int c = 0; c < map.cols; ++c) {
      const TileKind k = map.at(r, c).kind;
      if (k != TileKind::Wall && k != TileKind::Ladder) corridor = true;
    }
    if (corridor) map.floor_of_row[static_cast<std::size_t>(r)] = ++floor;
  }
  return map;
}

TileMap load_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open map file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_map(ss.str());
}

}  // namespace s2p
