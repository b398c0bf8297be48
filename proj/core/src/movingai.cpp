#include "mapfr/movingai.hpp"

#include <sstream>

#include "mapfr/io.hpp"
#include "num_util.hpp"

namespace mapfr {

namespace {

std::string strip_cr(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
    s.pop_back();
  return s;
}

[[noreturn]] void fail(int line_no, const std::string& msg) {
  throw ParseError("line " + std::to_string(line_no) + ": " + msg);
}

// Does the closed segment a-b meet the closed unit square centered at c?
// Liang-Barsky slab clipping, exact. Touching counts: the supercover of a
// segment through a square's corner includes that square, so grazing a
// blocked cell rejects the edge (no corner cutting).
bool segment_meets_cell(const Point& a, const Point& b, int cx, int cy) {
  Rational tlo(0), thi(1);
  const Rational half(1, 2);
  const Rational lox[2] = {Rational(cx) - half, Rational(cy) - half};
  const Rational hix[2] = {Rational(cx) + half, Rational(cy) + half};
  const Rational av[2] = {a.x, a.y};
  const Rational dv[2] = {b.x - a.x, b.y - a.y};
  for (int axis = 0; axis < 2; ++axis) {
    if (dv[axis].is_zero()) {
      if (av[axis] < lox[axis] || av[axis] > hix[axis]) return false;
      continue;
    }
    Rational t0 = (lox[axis] - av[axis]) / dv[axis];
    Rational t1 = (hix[axis] - av[axis]) / dv[axis];
    if (t1 < t0) std::swap(t0, t1);
    tlo = max(tlo, t0);
    thi = min(thi, t1);
    if (thi < tlo) return false;
  }
  return true;
}

}  // namespace

GridMap parse_map(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  GridMap m;
  bool have_w = false, have_h = false, in_grid = false;
  int row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (!in_grid) {
      std::istringstream ls(line);
      std::string key;
      ls >> key;
      if (key == "type") continue;
      if (key == "height") {
        if (!(ls >> m.height) || m.height <= 0) fail(line_no, "bad height");
        have_h = true;
      } else if (key == "width") {
        if (!(ls >> m.width) || m.width <= 0) fail(line_no, "bad width");
        have_w = true;
      } else if (key == "map") {
        if (!have_w || !have_h) fail(line_no, "map body before width/height");
        m.blocked.assign(
            static_cast<size_t>(m.width) * static_cast<size_t>(m.height), 0);
        in_grid = true;
      } else if (key.empty()) {
        continue;
      } else {
        fail(line_no, "unknown header field '" + key + "'");
      }
      continue;
    }
    if (row >= m.height) {
      if (line.empty()) continue;
      fail(line_no, "more rows than the declared height");
    }
    if (static_cast<int>(line.size()) != m.width)
      fail(line_no, "row has " + std::to_string(line.size()) +
                        " cells, expected " + std::to_string(m.width));
    for (int x = 0; x < m.width; ++x) {
      const char ch = line[static_cast<size_t>(x)];
      const size_t idx = static_cast<size_t>(row) * static_cast<size_t>(m.width) +
                         static_cast<size_t>(x);
      if (ch == '.' || ch == 'G')
        m.blocked[idx] = 0;
      else if (ch == '@' || ch == 'O' || ch == 'T')
        m.blocked[idx] = 1;
      else
        fail(line_no, std::string("unknown cell character '") + ch + "'");
    }
    ++row;
  }
  if (!in_grid) fail(line_no, "missing 'map' section");
  if (row != m.height) fail(line_no, "fewer rows than the declared height");
  return m;
}

std::vector<ScenEntry> parse_scen(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::vector<ScenEntry> out;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (line.rfind("version", 0) == 0) continue;
    std::istringstream ls(line);
    int bucket, w, h;
    std::string map_name;
    ScenEntry e;
    double opt;
    if (!(ls >> bucket >> map_name >> w >> h >> e.sx >> e.sy >> e.gx >> e.gy >>
          opt))
      fail(line_no, "malformed scen entry");
    out.push_back(e);
  }
  return out;
}

Instance grid_to_instance(const GridMap& m, int n) {
  if (n < 2 || n > 5) throw ParseError("neighborhood exponent must be 2..5");
  Instance ins;
  std::vector<int> vid(
      static_cast<size_t>(m.width) * static_cast<size_t>(m.height), -1);
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x)
      if (m.passable(x, y)) {
        vid[static_cast<size_t>(y) * static_cast<size_t>(m.width) +
            static_cast<size_t>(x)] = ins.n_vertices();
        ins.vertices.push_back(
            {ins.n_vertices(), {Rational(x), Rational(y)}});
      }

  const auto offs = grid_neighborhood(n);
  std::vector<Rational> durs;
  durs.reserve(offs.size());
  for (auto [dx, dy] : offs)
    durs.push_back(euclid_duration({Rational(0), Rational(0)},
                                   {Rational(dx), Rational(dy)}));

  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x) {
      if (!m.passable(x, y)) continue;
      const Point from{Rational(x), Rational(y)};
      for (size_t oi = 0; oi < offs.size(); ++oi) {
        const int tx = x + offs[oi].first, ty = y + offs[oi].second;
        if (!m.passable(tx, ty)) continue;
        const Point to{Rational(tx), Rational(ty)};
        // supercover: scan the cell box around the segment, one cell of
        // slack so grazed squares outside the endpoint box are not missed
        bool clear = true;
        for (int cy = std::min(y, ty) - 1; clear && cy <= std::max(y, ty) + 1;
             ++cy)
          for (int cx = std::min(x, tx) - 1; clear && cx <= std::max(x, tx) + 1;
               ++cx) {
            if (!m.in_bounds(cx, cy) || m.passable(cx, cy)) continue;
            if (segment_meets_cell(from, to, cx, cy)) clear = false;
          }
        if (!clear) continue;
        const size_t fi = static_cast<size_t>(y) * static_cast<size_t>(m.width) +
                          static_cast<size_t>(x);
        const size_t ti = static_cast<size_t>(ty) * static_cast<size_t>(m.width) +
                          static_cast<size_t>(tx);
        ins.edges.push_back({vid[fi], vid[ti], durs[oi]});
      }
    }
  ins.name = "grid-" + std::to_string(m.width) + "x" + std::to_string(m.height) +
             "-n" + std::to_string(n);
  ins.finalize();
  return ins;
}

Instance ingest_movingai(const std::string& map_path,
                         const std::string& scen_path, int n, int k,
                         const Rational& r) {
  if (k < 1) throw ParseError("agent count must be positive");
  if (r.sign() <= 0) throw ParseError("agent radius must be positive");
  const GridMap m = parse_map(read_text_file(map_path));
  const auto entries = parse_scen(read_text_file(scen_path));
  if (static_cast<int>(entries.size()) < k)
    throw ParseError("scen file has " + std::to_string(entries.size()) +
                     " entries, need " + std::to_string(k));

  Instance ins = grid_to_instance(m, n);
  // rebuild the cell -> vertex map (vertices are row-major over passable cells)
  std::vector<int> vid(
      static_cast<size_t>(m.width) * static_cast<size_t>(m.height), -1);
  for (const auto& v : ins.vertices) {
    const long x = v.pos.x.num().get_si(), y = v.pos.y.num().get_si();
    vid[static_cast<size_t>(y) * static_cast<size_t>(m.width) +
        static_cast<size_t>(x)] = v.id;
  }
  auto cell_vertex = [&](int x, int y, const char* what, int idx) {
    if (!m.passable(x, y))
      throw BlockedEndpointError("scen entry " + std::to_string(idx) + ": " +
                                 what + " cell (" + std::to_string(x) + "," +
                                 std::to_string(y) + ") is blocked or outside");
    return vid[static_cast<size_t>(y) * static_cast<size_t>(m.width) +
               static_cast<size_t>(x)];
  };
  for (int i = 0; i < k; ++i) {
    const ScenEntry& e = entries[static_cast<size_t>(i)];
    ins.agents.push_back({i, cell_vertex(e.sx, e.sy, "start", i),
                          cell_vertex(e.gx, e.gy, "goal", i), r});
  }
  std::string base = map_path;
  if (auto p = base.find_last_of('/'); p != std::string::npos)
    base = base.substr(p + 1);
  ins.name = base + "-n" + std::to_string(n) + "-k" + std::to_string(k);
  ins.finalize();
  return ins;
}

}  // namespace mapfr
