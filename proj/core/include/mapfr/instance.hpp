#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "mapfr/geom.hpp"

namespace mapfr {

struct Vertex {
  int id = 0;
  Point pos;
};

// Directed timed edge; traversal takes `duration` at constant velocity.
struct EdgeAction {
  int from = 0, to = 0;
  Rational duration;
};

// Open-disk agent. Touching disks are allowed; strict overlap is a collision.
struct Agent {
  int id = 0;
  int start = 0, goal = 0;
  Rational radius;
};

struct Instance {
  std::string name;
  std::vector<Vertex> vertices;
  std::vector<EdgeAction> edges;
  std::vector<Agent> agents;

  // Validates structure (dense ids, edge endpoints, positive durations and
  // radii, no duplicate directed edges) and builds adjacency. Throws
  // InvalidInstance. Call after filling the public fields.
  void finalize();

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_agents() const { return static_cast<int>(agents.size()); }
  const Point& coord(int v) const { return vertices[static_cast<size_t>(v)].pos; }

  // Edge indices leaving v.
  const std::vector<int>& out(int v) const { return out_[static_cast<size_t>(v)]; }
  // Edge indices entering v.
  const std::vector<int>& in(int v) const { return in_[static_cast<size_t>(v)]; }
  // Index into edges, or -1.
  int edge_index(int from, int to) const;

 private:
  std::vector<std::vector<int>> out_, in_;
  std::unordered_map<long long, int> edge_map_;
};

}  // namespace mapfr
