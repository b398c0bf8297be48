#include "mapfr/validate.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "mapfr/errors.hpp"
#include "mapfr/shortest_path.hpp"

namespace mapfr {

Point MotionSegment::pos(const Rational& t) const {
  if (constant() || t1 == t0) return p0;
  Rational s = (t - t0) / (t1 - t0);
  return p0 + s * (p1 - p0);
}

std::vector<std::vector<MotionSegment>> segmentize(const Instance& ins, const PrePlan& plan) {
  if (static_cast<int>(plan.timelines.size()) != ins.n_agents())
    throw StructuralError("plan has " + std::to_string(plan.timelines.size()) +
                          " timelines for " + std::to_string(ins.n_agents()) + " agents");

  std::vector<std::vector<MotionSegment>> out;
  out.reserve(plan.timelines.size());
  for (size_t a = 0; a < plan.timelines.size(); ++a) {
    const AgentTimeline& tl = plan.timelines[a];
    if (tl.agent != static_cast<int>(a))
      throw StructuralError("timeline " + std::to_string(a) + " claims agent " +
                            std::to_string(tl.agent));
    try {
      check_timeline(ins, tl);
    } catch (const InvalidPlan& e) {
      throw StructuralError("agent " + std::to_string(a) + ": " + e.what());
    }

    std::vector<MotionSegment> segs;
    int at = ins.agents[a].start;
    for (const auto& e : tl.entries) {
      if (e.wait.sign() > 0)
        segs.push_back({static_cast<int>(a), e.arrive, e.depart(), ins.coord(at),
                        ins.coord(at), false});
      if (e.is_move()) {
        const EdgeAction& ed = ins.edges[static_cast<size_t>(e.edge)];
        segs.push_back({static_cast<int>(a), e.depart(), e.end(), ins.coord(ed.from),
                        ins.coord(ed.to), false});
        at = ed.to;
      }
    }
    Rational rest = tl.end_time();
    segs.push_back({static_cast<int>(a), rest, rest, ins.coord(at), ins.coord(at), true});
    out.push_back(std::move(segs));
  }
  return out;
}

PairMin min_pair_distance_sq(const MotionSegment& a, const MotionSegment& b) {
  Rational lo = max(a.t0, b.t0);
  if (a.unbounded && b.unbounded) {
    if (a.constant() && b.constant()) return {dist_sq(a.p0, b.p0), lo};
    throw StructuralError("unbounded segment is not constant");
  }
  Rational hi;
  if (a.unbounded)
    hi = b.t1;
  else if (b.unbounded)
    hi = a.t1;
  else
    hi = min(a.t1, b.t1);
  if (lo > hi) throw NoOverlapError("segments do not overlap in time");

  // relative motion: delta(t) = C + t * W, an upward parabola in t
  auto velocity = [](const MotionSegment& s) -> Point {
    if (s.constant() || s.t1 == s.t0) return Point{Rational(0), Rational(0)};
    Rational inv = Rational(1) / (s.t1 - s.t0);
    return inv * (s.p1 - s.p0);
  };
  Point va = velocity(a), vb = velocity(b);
  Point W = va - vb;
  Point C = (a.p0 - a.t0 * va) - (b.p0 - b.t0 * vb);

  Rational a2 = norm_sq(W);
  Rational t = lo;
  if (a2.sign() != 0) {
    t = -dot(C, W) / a2;
    if (t < lo) t = lo;
    if (t > hi) t = hi;
  }
  return {norm_sq(C + t * W), t};
}

ValidationReport validate(const Instance& ins, const PrePlan& plan) {
  ValidationReport rep;
  if (static_cast<int>(plan.timelines.size()) != ins.n_agents()) {
    rep.structural.push_back("plan covers " + std::to_string(plan.timelines.size()) +
                             " of " + std::to_string(ins.n_agents()) + " agents");
    return rep;
  }
  for (size_t a = 0; a < plan.timelines.size(); ++a) {
    const AgentTimeline& tl = plan.timelines[a];
    if (tl.agent != static_cast<int>(a)) {
      rep.structural.push_back("timeline " + std::to_string(a) + " claims agent " +
                               std::to_string(tl.agent));
      continue;
    }
    try {
      check_timeline(ins, tl);
    } catch (const InvalidPlan& e) {
      rep.structural.push_back("agent " + std::to_string(a) + ": " + e.what());
      continue;
    }
    int at = ins.agents[a].start;
    for (const auto& e : tl.entries)
      if (e.is_move()) at = ins.edges[static_cast<size_t>(e.edge)].to;
    if (at != ins.agents[a].goal)
      rep.structural.push_back("agent " + std::to_string(a) + " ends at vertex " +
                               std::to_string(at) + ", goal is " +
                               std::to_string(ins.agents[a].goal));
  }
  if (!rep.structural.empty()) return rep;

  auto segs = segmentize(ins, plan);
  for (size_t i = 0; i < segs.size(); ++i) {
    for (size_t j = i + 1; j < segs.size(); ++j) {
      Rational rsum = ins.agents[i].radius + ins.agents[j].radius;
      Rational rsum2 = rsum * rsum;
      Rational M = max(plan.timelines[i].end_time(), plan.timelines[j].end_time());

      // bounded pieces, with each rest clipped to the later agent's horizon
      auto clipped = [&](const std::vector<MotionSegment>& ss) {
        std::vector<MotionSegment> v = ss;
        v.back().t1 = M;
        v.back().unbounded = false;
        return v;
      };
      std::vector<MotionSegment> si = clipped(segs[i]);
      std::vector<MotionSegment> sj = clipped(segs[j]);
      for (const auto& sa : si) {
        for (const auto& sb : sj) {
          if (sa.t1 < sb.t0 || sb.t1 < sa.t0) continue;
          PairMin pm = min_pair_distance_sq(sa, sb);
          if (pm.dist_sq < rsum2)
            rep.violations.push_back({static_cast<int>(i), static_cast<int>(j),
                                      max(sa.t0, sb.t0), min(sa.t1, sb.t1), pm.at,
                                      pm.dist_sq});
        }
      }
      // both at rest from M on
      Rational tail = dist_sq(segs[i].back().p0, segs[j].back().p0);
      if (tail < rsum2)
        rep.violations.push_back({static_cast<int>(i), static_cast<int>(j), M, M, M, tail});
    }
  }
  rep.valid = rep.violations.empty();
  return rep;
}

Plan certify(const Instance& ins, const PrePlan& plan) {
  ValidationReport rep = validate(ins, plan);
  if (!rep.structural.empty()) throw InvalidPlan(rep.structural.front());
  if (!rep.violations.empty()) {
    const Violation& v = rep.violations.front();
    throw InvalidPlan("agents " + std::to_string(v.agent_a) + " and " +
                      std::to_string(v.agent_b) + " collide near t = " + v.at.str() +
                      " (squared distance " + v.dist_sq.str() + ")");
  }
  return Plan{plan};
}

namespace {

struct OraclePath {
  std::vector<TimedMotion> moves;  // nominal start at 0, back to back
  Point start, goal;
  Rational dur;  // total path duration
};

// Delay needed for `b` (shifted by d) to clear the committed agent `a`
// (shifted by d_a). Returns the new d, or nullopt when more delay cannot
// help (b would cross a's final resting place, or a sweeps b's start).
std::optional<Rational> clear_pair(const OraclePath& pb, const Rational& d, const Rational& rb,
                                   const OraclePath& pa, const Rational& da, const Rational& ra,
                                   const Rational& eps) {
  for (const TimedMotion& bm : pb.moves) {
    TimedMotion mb = bm.shifted(bm.start + d);
    for (const TimedMotion& am : pa.moves) {
      TimedMotion ma = am.shifted(am.start + da);
      if (in_conflict(mb, rb, ma, ra)) {
        Rational safe = safe_delay(mb, rb, ma, ra, eps);
        return d + (safe - mb.start);
      }
    }
    // b moving vs a resting: before departure at its start, after arrival at
    // its goal (forever)
    try {
      ConflictWindow w = wait_conflict_window(pa.start, ra, mb, rb, eps);
      if (w.lo < da) return d + (da - w.lo);  // wait out a's departure
    } catch (const NoConflictError&) {
    }
    try {
      ConflictWindow w = wait_conflict_window(pa.goal, ra, mb, rb, eps);
      if (w.hi > da + pa.dur) return std::nullopt;  // parked for good; hopeless
    } catch (const NoConflictError&) {
    }
  }
  // b resting vs a moving
  for (const TimedMotion& am : pa.moves) {
    TimedMotion ma = am.shifted(am.start + da);
    try {
      ConflictWindow w = wait_conflict_window(pb.start, rb, ma, ra, eps);
      if (w.lo < d && w.hi.sign() > 0) return std::nullopt;  // sits in a's way
    } catch (const NoConflictError&) {
    }
    try {
      ConflictWindow w = wait_conflict_window(pb.goal, rb, ma, ra, eps);
      if (w.hi > d + pb.dur) return d + (w.hi - (d + pb.dur));  // arrive later
    } catch (const NoConflictError&) {
    }
  }
  return d;  // unchanged == clear
}

}  // namespace

Rational permutation_oracle(const Instance& ins, CostKind kind, const Rational& eps) {
  const int k = ins.n_agents();
  if (k > 8) throw TooLargeError("permutation oracle is limited to 8 agents");
  if (k == 0) return Rational(0);

  OptPreplan opt = opt_preplan(ins, kind);
  std::vector<OraclePath> paths;
  paths.reserve(static_cast<size_t>(k));
  for (int a = 0; a < k; ++a) {
    OraclePath p;
    p.start = ins.coord(ins.agents[static_cast<size_t>(a)].start);
    p.goal = ins.coord(ins.agents[static_cast<size_t>(a)].goal);
    for (const auto& e : opt.pre.timelines[static_cast<size_t>(a)].entries) {
      const EdgeAction& ed = ins.edges[static_cast<size_t>(e.edge)];
      p.moves.push_back({ins.coord(ed.from), ins.coord(ed.to), e.depart(), e.move_dur});
    }
    p.dur = opt.pre.timelines[static_cast<size_t>(a)].end_time();
    paths.push_back(std::move(p));
  }

  std::optional<Rational> best;
  std::vector<int> order(static_cast<size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  do {
    std::vector<std::pair<int, Rational>> committed;  // (agent, delay)
    bool feasible = true;
    for (int b : order) {
      Rational d(0);
      bool settled = false;
      for (int rounds = 0; rounds < 10000 && !settled; ++rounds) {
        settled = true;
        for (const auto& [a, da] : committed) {
          auto nd = clear_pair(paths[static_cast<size_t>(b)], d,
                               ins.agents[static_cast<size_t>(b)].radius,
                               paths[static_cast<size_t>(a)], da,
                               ins.agents[static_cast<size_t>(a)].radius, eps);
          if (!nd) {
            feasible = false;
            break;
          }
          if (*nd != d) {
            d = *nd;
            settled = false;
            break;  // recheck everyone against the new delay
          }
        }
        if (!feasible) break;
      }
      if (!feasible) break;
      if (!settled) throw InternalError("priority scheduling did not settle");
      committed.emplace_back(b, d);
    }
    if (!feasible) continue;

    Rational cost(0);
    for (const auto& [a, da] : committed) {
      const Rational& P = paths[static_cast<size_t>(a)].dur;
      switch (kind) {
        case CostKind::SumOfCosts: cost += da + P; break;
        case CostKind::Makespan: cost = max(cost, da + P); break;
        case CostKind::Power: cost += Rational(2) * P + da; break;
      }
    }
    if (!best || cost < *best) best = cost;
  } while (std::next_permutation(order.begin(), order.end()));

  if (!best) throw InternalError("no priority order could be scheduled");
  return *best;
}

}  // namespace mapfr
