#include "mapfr/shortest_path.hpp"

#include <algorithm>
#include <deque>
#include <queue>

#include "mapfr/errors.hpp"

namespace mapfr {

GoalDistanceTable shortest_path_table(const Instance& ins, int agent) {
  const int n = ins.n_vertices();
  const int goal = ins.agents[static_cast<size_t>(agent)].goal;
  GoalDistanceTable tab;
  tab.agent = agent;
  tab.at.assign(static_cast<size_t>(n), {});

  // Dijkstra from the goal over reversed edges, key = (duration, hops).
  struct QItem {
    Rational d;
    int hops;
    int v;
  };
  auto worse = [](const QItem& a, const QItem& b) {
    if (a.d != b.d) return a.d > b.d;
    return a.hops > b.hops;
  };
  std::priority_queue<QItem, std::vector<QItem>, decltype(worse)> pq(worse);
  tab.at[static_cast<size_t>(goal)] = {Rational(0), 0, 0};
  pq.push({Rational(0), 0, goal});
  while (!pq.empty()) {
    QItem it = pq.top();
    pq.pop();
    auto& cur = tab.at[static_cast<size_t>(it.v)];
    if (!cur.dist || it.d != *cur.dist || it.hops != cur.hops_at_opt) continue;  // stale
    for (int ei : ins.in(it.v)) {
      const EdgeAction& e = ins.edges[static_cast<size_t>(ei)];
      Rational nd = it.d + e.duration;
      int nh = it.hops + 1;
      auto& dst = tab.at[static_cast<size_t>(e.from)];
      if (!dst.dist || nd < *dst.dist || (nd == *dst.dist && nh < dst.hops_at_opt)) {
        dst.dist = nd;
        dst.hops_at_opt = nh;
        pq.push({nd, nh, e.from});
      }
    }
  }

  // BFS for hop-minimal counts, same reversed orientation.
  std::deque<int> q;
  tab.at[static_cast<size_t>(goal)].hops_min = 0;
  q.push_back(goal);
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    int h = tab.at[static_cast<size_t>(v)].hops_min;
    for (int ei : ins.in(v)) {
      int u = ins.edges[static_cast<size_t>(ei)].from;
      auto& du = tab.at[static_cast<size_t>(u)];
      if (du.hops_min < 0) {
        du.hops_min = h + 1;
        q.push_back(u);
      }
    }
  }
  return tab;
}

OptPreplan opt_preplan(const Instance& ins, CostKind kind) {
  OptPreplan out;
  out.pre.cost_kind = kind;
  out.pre.timelines.resize(static_cast<size_t>(ins.n_agents()));
  out.tables.reserve(static_cast<size_t>(ins.n_agents()));

  int h0 = 0, steps = 0;
  for (int a = 0; a < ins.n_agents(); ++a) {
    out.tables.push_back(shortest_path_table(ins, a));
    const GoalDistanceTable& tab = out.tables.back();
    const Agent& ag = ins.agents[static_cast<size_t>(a)];
    if (!tab.reachable(ag.start))
      throw UnreachableError("agent " + std::to_string(a) + " cannot reach its goal");
    h0 = std::max(h0, tab.at[static_cast<size_t>(ag.start)].hops_min);

    AgentTimeline& tl = out.pre.timelines[static_cast<size_t>(a)];
    tl.agent = a;
    // Follow the duration-optimal path; ties by (hops at optimum, vertex id).
    Rational t(0);
    int at = ag.start;
    while (at != ag.goal) {
      const Rational& here = *tab.at[static_cast<size_t>(at)].dist;
      int best_edge = -1, best_hops = -1, best_v = -1;
      for (int ei : ins.out(at)) {
        const EdgeAction& e = ins.edges[static_cast<size_t>(ei)];
        const auto& dv = tab.at[static_cast<size_t>(e.to)];
        if (!dv.dist || e.duration + *dv.dist != here) continue;  // not optimal
        if (best_edge < 0 || dv.hops_at_opt < best_hops ||
            (dv.hops_at_opt == best_hops && e.to < best_v)) {
          best_edge = ei;
          best_hops = dv.hops_at_opt;
          best_v = e.to;
        }
      }
      if (best_edge < 0) throw InternalError("optimal path extraction lost the gradient");
      const EdgeAction& e = ins.edges[static_cast<size_t>(best_edge)];
      tl.entries.push_back({t, Rational(0), at, best_edge, e.duration});
      t += e.duration;
      at = e.to;
    }
    steps = std::max(steps, tl.move_count());
  }
  out.pre.steps = steps;
  out.pre.cost = evaluate_cost(out.pre.timelines, kind);
  out.h0 = h0;
  out.t_min = out.pre.cost;
  return out;
}

}  // namespace mapfr
