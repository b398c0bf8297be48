#pragma once

#include <optional>

#include "mapfr/plan.hpp"

namespace mapfr {

struct GoalDistEntry {
  std::optional<Rational> dist;  // shortest duration to the goal; nullopt = unreachable
  int hops_at_opt = -1;          // fewest edges among duration-optimal paths
  int hops_min = -1;             // fewest edges over all paths
};

struct GoalDistanceTable {
  int agent = 0;
  std::vector<GoalDistEntry> at;  // indexed by vertex id

  bool reachable(int v) const { return at[static_cast<size_t>(v)].dist.has_value(); }
};

// Exact Dijkstra toward agent's goal over reversed edges, with (duration,
// hops) lexicographic keys, plus a plain BFS for hop-minimal counts.
GoalDistanceTable shortest_path_table(const Instance& ins, int agent);

struct OptPreplan {
  PrePlan pre;       // per-agent duration-optimal paths, no waits
  int h0 = 0;        // max over agents of the hop-minimal path length
  Rational t_min;    // cost of `pre` under the requested cost kind
  std::vector<GoalDistanceTable> tables;
};

// Throws UnreachableError when some agent cannot reach its goal.
OptPreplan opt_preplan(const Instance& ins, CostKind kind);

}  // namespace mapfr
