#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mapfr/instance.hpp"

namespace mapfr {

// Parsed .map grid. Cell (x, y) is column x of row y, matching the scen
// convention; the cell center sits at integer coordinates (x, y).
struct GridMap {
  int width = 0, height = 0;
  std::vector<std::uint8_t> blocked;  // row-major

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  bool passable(int x, int y) const {
    return in_bounds(x, y) &&
           !blocked[static_cast<size_t>(y) * static_cast<size_t>(width) +
                    static_cast<size_t>(x)];
  }
};

struct ScenEntry {
  int sx = 0, sy = 0, gx = 0, gy = 0;
};

// Standard grid text format: header lines (type/height/width), a "map" line,
// then height rows of width cells. Passable '.'/'G'; blocked '@'/'O'/'T'.
// ParseError messages carry 1-based line numbers.
GridMap parse_map(const std::string& text);

// Scen lines: bucket, map, width, height, sx, sy, gx, gy, length. A leading
// "version" line is skipped.
std::vector<ScenEntry> parse_scen(const std::string& text);

// Graph only: vertices are passable cells (id = y*width + x compacted over
// passable cells, position (x, y)); a 2^n-neighborhood edge exists when the
// open straight segment between the two centers crosses no blocked cell
// (supercover test: touching a blocked cell's square counts as crossing).
Instance grid_to_instance(const GridMap& m, int n);

// Full ingestion: graph from the map, first k scen entries as agents of
// radius r. Throws BlockedEndpointError when a start/goal cell is blocked or
// outside the map, ParseError when the scen has fewer than k entries.
Instance ingest_movingai(const std::string& map_path,
                         const std::string& scen_path, int n, int k,
                         const Rational& r);

}  // namespace mapfr
