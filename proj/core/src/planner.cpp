#include "mapfr/planner.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <string>
#include <utility>

namespace mapfr {

using Clock = std::chrono::steady_clock;

namespace {

// per-agent motion picture of a pre-plan, entry indices kept as steps
struct MoveRec {
  TimedMotion motion;
  int step = 0;
  int edge = -1;
};
struct WaitRec {
  Rational start, end;  // end > start
  int vertex = 0;
  int step = 0;
};
struct RestRec {
  Rational start;
  int vertex = 0;
  int step = 0;  // the arrival step, informational
};

struct AgentTrace {
  std::vector<MoveRec> moves;
  std::vector<WaitRec> waits;
  RestRec rest;
};

AgentTrace trace_agent(const Instance& ins, const AgentTimeline& tl) {
  AgentTrace tr;
  for (size_t j = 0; j < tl.entries.size(); ++j) {
    const TimelineEntry& e = tl.entries[j];
    if (e.wait > 0)
      tr.waits.push_back({e.arrive, e.depart(), e.vertex, static_cast<int>(j)});
    if (e.is_move()) {
      const EdgeAction& ed = ins.edges[static_cast<size_t>(e.edge)];
      tr.moves.push_back({TimedMotion{ins.coord(ed.from), ins.coord(ed.to),
                                      e.depart(), e.move_dur},
                          static_cast<int>(j), e.edge});
    }
  }
  int rest_vertex;
  if (tl.entries.empty()) {
    rest_vertex = ins.agents[static_cast<size_t>(tl.agent)].start;
  } else {
    const TimelineEntry& last = tl.entries.back();
    rest_vertex = last.is_move()
                      ? ins.edges[static_cast<size_t>(last.edge)].to
                      : last.vertex;
  }
  tr.rest = {tl.end_time(), rest_vertex, static_cast<int>(tl.entries.size())};
  return tr;
}

// wait-vs-move conflicts from x's perspective (x waits, y moves)
void collect_wm(const Instance& ins, const AgentTrace& tx, int x_id,
                const Rational& rx, const AgentTrace& ty, int y_id,
                const Rational& ry, std::vector<Conflict>& out) {
  for (const MoveRec& m : ty.moves) {
    ConflictWindow w;
    auto window_for = [&](int vertex, ConflictWindow& win) {
      try {
        win = wait_conflict_window(ins.coord(vertex), rx, m.motion, ry);
        return true;
      } catch (const NoConflictError&) {
        return false;
      }
    };
    for (const WaitRec& wr : tx.waits) {
      if (!window_for(wr.vertex, w)) continue;
      if (wr.start < w.hi && wr.end > w.lo) {
        Conflict c;
        c.kind = ConflictKind::WaitMove;
        c.a = x_id;
        c.b = y_id;
        c.ja = wr.step;
        c.jb = m.step;
        c.eb = m.edge;
        c.u = wr.vertex;
        c.tau_a = wr.start;
        c.tau_b = m.motion.start;
        c.wait_end = wr.end;
        out.push_back(std::move(c));
      }
    }
    if (window_for(tx.rest.vertex, w) && tx.rest.start < w.hi) {
      Conflict c;
      c.kind = ConflictKind::WaitMove;
      c.a = x_id;
      c.b = y_id;
      c.ja = tx.rest.step;
      c.jb = m.step;
      c.eb = m.edge;
      c.u = tx.rest.vertex;
      c.tau_a = tx.rest.start;
      c.tau_b = m.motion.start;
      c.terminal = true;
      out.push_back(std::move(c));
    }
  }
}

}  // namespace

std::vector<Conflict> detect_conflicts(const Instance& ins,
                                       const PrePlan& pre) {
  std::vector<AgentTrace> traces;
  traces.reserve(pre.timelines.size());
  for (const AgentTimeline& tl : pre.timelines)
    traces.push_back(trace_agent(ins, tl));

  std::vector<Conflict> out;
  for (size_t i = 0; i + 1 < pre.timelines.size(); ++i) {
    for (size_t j = i + 1; j < pre.timelines.size(); ++j) {
      const int a = pre.timelines[i].agent, b = pre.timelines[j].agent;
      const Rational& ra = ins.agents[static_cast<size_t>(a)].radius;
      const Rational& rb = ins.agents[static_cast<size_t>(b)].radius;
      for (const MoveRec& ma : traces[i].moves)
        for (const MoveRec& mb : traces[j].moves)
          if (in_conflict(ma.motion, ra, mb.motion, rb)) {
            Conflict c;
            c.kind = ConflictKind::MoveMove;
            c.a = a;
            c.b = b;
            c.ja = ma.step;
            c.jb = mb.step;
            c.ea = ma.edge;
            c.eb = mb.edge;
            c.tau_a = ma.motion.start;
            c.tau_b = mb.motion.start;
            out.push_back(std::move(c));
          }
      collect_wm(ins, traces[i], a, ra, traces[j], b, rb, out);
      collect_wm(ins, traces[j], b, rb, traces[i], a, ra, out);
      // wait-wait pairs carry no timing freedom and are left to the
      // validator; overlapping rests reduce to start/goal overlap
    }
  }
  return out;
}

namespace {

std::string key_mm(const ClauseMM& c) {
  return "M|" + std::to_string(c.a) + "|" + std::to_string(c.b) + "|" +
         std::to_string(c.ja) + "|" + std::to_string(c.jb) + "|" +
         std::to_string(c.ea) + "|" + std::to_string(c.eb) + "|" + c.L.str() +
         "|" + c.U.str();
}

std::string key_wm(const ClauseWM& c) {
  // terminal clauses are step-independent, so ja stays out of their key
  return "W|" + std::to_string(c.a) + "|" +
         (c.terminal ? std::string("T") : std::to_string(c.ja)) + "|" +
         std::to_string(c.u) + "|" + std::to_string(c.b) + "|" +
         std::to_string(c.jb) + "|" + std::to_string(c.eb) + "|" +
         c.lo.str() + "|" + c.hi.str();
}

std::string key_of(const LearnedClause& lc) {
  return lc.mm ? key_mm(*lc.mm) : key_wm(*lc.wm);
}

}  // namespace

std::vector<LearnedClause> generalize(const Instance& ins, const PrePlan&,
                                      const Conflict& c, const Rational& eps) {
  std::vector<LearnedClause> out;
  const Rational& ra = ins.agents[static_cast<size_t>(c.a)].radius;
  const Rational& rb = ins.agents[static_cast<size_t>(c.b)].radius;

  if (c.kind == ConflictKind::MoveMove) {
    const EdgeAction& Ea = ins.edges[static_cast<size_t>(c.ea)];
    const EdgeAction& Eb = ins.edges[static_cast<size_t>(c.eb)];
    const TimedMotion ma{ins.coord(Ea.from), ins.coord(Ea.to), c.tau_a,
                         Ea.duration};
    const TimedMotion mb{ins.coord(Eb.from), ins.coord(Eb.to), c.tau_b,
                         Eb.duration};

    auto emit = [&](int ea_idx, const TimedMotion& A, int eb_idx,
                    const TimedMotion& B, bool variant) {
      Rational safe_ab, safe_ba;
      try {
        safe_ab = safe_delay(A, ra, B, rb, eps);
        safe_ba = safe_delay(B, rb, A, ra, eps);
      } catch (const NoConflictError& e) {
        throw InternalError(std::string("conflict witness did not reproduce: ") +
                            e.what());
      }
      ClauseMM cl;
      cl.a = c.a;
      cl.b = c.b;
      cl.ja = c.ja;
      cl.jb = c.jb;
      cl.ea = ea_idx;
      cl.eb = eb_idx;
      cl.L = A.start - safe_ba;  // rounded down: safe_ba overshoots
      cl.U = safe_ab - B.start;  // rounded up
      out.push_back({cl, std::nullopt, variant});
    };

    emit(c.ea, ma, c.eb, mb, false);
    for (int e2 : ins.out(Ea.from)) {
      if (e2 == c.ea) continue;
      const EdgeAction& alt = ins.edges[static_cast<size_t>(e2)];
      const TimedMotion am{ins.coord(alt.from), ins.coord(alt.to), c.tau_a,
                           alt.duration};
      if (in_conflict(am, ra, mb, rb)) emit(e2, am, c.eb, mb, true);
    }
    for (int e2 : ins.out(Eb.from)) {
      if (e2 == c.eb) continue;
      const EdgeAction& alt = ins.edges[static_cast<size_t>(e2)];
      const TimedMotion bm{ins.coord(alt.from), ins.coord(alt.to), c.tau_b,
                           alt.duration};
      if (in_conflict(ma, ra, bm, rb)) emit(c.ea, ma, e2, bm, true);
    }
    return out;
  }

  // WaitMove: a sits at u, b moves along eb (or an alternative edge)
  const Point& p = ins.coord(c.u);
  auto emit = [&](int eb_idx, const TimedMotion& B, bool variant) {
    ConflictWindow w;
    try {
      w = wait_conflict_window(p, ra, B, rb, eps);
    } catch (const NoConflictError& e) {
      if (variant) return;
      throw InternalError(std::string("conflict witness did not reproduce: ") +
                          e.what());
    }
    const bool overlap =
        c.terminal ? c.tau_a < w.hi : (c.tau_a < w.hi && c.wait_end > w.lo);
    if (!overlap) {
      if (variant) return;
      throw InternalError("wait conflict witness missed its own window");
    }
    ClauseWM cl;
    cl.a = c.a;
    cl.ja = c.ja;
    cl.u = c.u;
    cl.b = c.b;
    cl.jb = c.jb;
    cl.eb = eb_idx;
    cl.lo = w.lo - c.tau_b;  // window relative to b's move start
    cl.hi = w.hi - c.tau_b;
    cl.terminal = c.terminal;
    out.push_back({std::nullopt, cl, variant});
  };

  const EdgeAction& Eb = ins.edges[static_cast<size_t>(c.eb)];
  emit(c.eb,
       TimedMotion{ins.coord(Eb.from), ins.coord(Eb.to), c.tau_b, Eb.duration},
       false);
  for (int e2 : ins.out(Eb.from)) {
    if (e2 == c.eb) continue;
    const EdgeAction& alt = ins.edges[static_cast<size_t>(e2)];
    emit(e2,
         TimedMotion{ins.coord(alt.from), ins.coord(alt.to), c.tau_b,
                     alt.duration},
         true);
  }
  return out;
}

FindplanResult findplan(
    Encoder& enc, ClauseSet& seen, const Rational& eps,
    std::optional<std::chrono::steady_clock::time_point> deadline) {
  const Instance& ins = enc.instance();
  FindplanResult res;
  while (true) {
    std::optional<std::chrono::milliseconds> budget;
    if (deadline) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          *deadline - Clock::now());
      if (left.count() < 1) {
        res.status = FindplanStatus::Unknown;
        return res;
      }
      budget = left;
    }
    ++res.sat_calls;
    smt::CheckOutcome got = enc.session().check_sat(budget);
    if (got.status == smt::CheckResult::Unknown) {
      res.status = FindplanStatus::Unknown;
      return res;
    }
    if (got.status == smt::CheckResult::Unsat) {
      res.status = FindplanStatus::Bottom;
      return res;
    }

    ExtractedPlan ex = enc.extract_preplan(got.model);
    std::vector<Conflict> conflicts = detect_conflicts(ins, ex.pre);
    if (conflicts.empty()) {
      res.status = FindplanStatus::Plan;
      res.plan = std::move(ex);
      return res;
    }

    int added = 0;
    for (const Conflict& c : conflicts) {
      for (const LearnedClause& lc : generalize(ins, ex.pre, c, eps)) {
        if (!seen.keys.insert(key_of(lc)).second) continue;
        if (lc.mm) {
          enc.assert_conflict_mm(*lc.mm);
          ++seen.mm;
        } else {
          enc.assert_conflict_wm(*lc.wm);
          ++seen.wm;
        }
        if (lc.variant) ++seen.variants;
        ++added;
      }
    }
    res.clauses_added += added;
    if (added == 0)
      throw InternalError(
          "findplan stalled: a conflicting pre-plan produced no new clause");
  }
}

int apply_hints(smt::SolverSession& session, const Instance& ins,
                const StepVars& vars, const OptPreplan& opt, int from_step) {
  const int nv = ins.n_vertices();
  int issued = 0;
  for (size_t a = 0; a < ins.agents.size(); ++a) {
    const GoalDistanceTable& tab = opt.tables[a];
    std::vector<int> order;
    order.reserve(static_cast<size_t>(nv));
    for (int v = 0; v < nv; ++v)
      if (tab.reachable(v)) order.push_back(v);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      const Rational& dx = *tab.at[static_cast<size_t>(x)].dist;
      const Rational& dy = *tab.at[static_cast<size_t>(y)].dist;
      if (dx != dy) return dx < dy;
      return x < y;
    });
    std::vector<int> prio(static_cast<size_t>(nv), -1);
    for (size_t r = 0; r < order.size(); ++r)
      prio[static_cast<size_t>(order[r])] = nv - static_cast<int>(r);

    const auto& entries = opt.pre.timelines[a].entries;
    const int goal = ins.agents[a].goal;
    for (int j = from_step; j <= vars.h; ++j) {
      const int on_path =
          j < static_cast<int>(entries.size()) ? entries[static_cast<size_t>(j)].vertex : goal;
      for (int v = 0; v < nv; ++v) {
        if (prio[static_cast<size_t>(v)] < 0) continue;
        const int p = v == on_path ? nv + 1 : prio[static_cast<size_t>(v)];
        session.hint_branching(vars.V[a][static_cast<size_t>(j)][static_cast<size_t>(v)], p);
        ++issued;
      }
    }
  }
  return issued;
}

namespace {

void check_config(const SolveConfig& cfg) {
  if (!(cfg.delta > 0)) throw ParseError("delta must be positive");
  if (!(cfg.bisect_c > 0 && cfg.bisect_c < 1))
    throw ParseError("bisect-c must lie strictly between 0 and 1");
  if (!(cfg.eps > 0)) throw ParseError("eps must be positive");
  if (cfg.budget.count() <= 0) throw ParseError("budget must be positive");
}

void check_static_feasibility(const Instance& ins) {
  for (size_t i = 0; i + 1 < ins.agents.size(); ++i)
    for (size_t j = i + 1; j < ins.agents.size(); ++j) {
      const Agent& x = ins.agents[i];
      const Agent& y = ins.agents[j];
      const Rational rr = (x.radius + y.radius) * (x.radius + y.radius);
      if (dist_sq(ins.coord(x.start), ins.coord(y.start)) < rr)
        throw Infeasible("agents " + std::to_string(x.id) + " and " +
                         std::to_string(y.id) + " start in overlap");
      if (dist_sq(ins.coord(x.goal), ins.coord(y.goal)) < rr)
        throw Infeasible("agents " + std::to_string(x.id) + " and " +
                         std::to_string(y.id) + " have overlapping goals");
    }
}

double ms_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

}  // namespace

SolveResult solve(const Instance& ins, const SolveConfig& cfg,
                  smt::SolverSession& session) {
  check_config(cfg);
  check_static_feasibility(ins);

  const auto t0 = Clock::now();
  const auto deadline = t0 + cfg.budget;

  OptPreplan opt;
  try {
    opt = opt_preplan(ins, cfg.cost_kind);
  } catch (const UnreachableError& e) {
    throw Infeasible(e.what());
  }

  SolveResult res;
  SolveStats& st = res.stats;
  st.h0 = opt.h0;
  st.t_min_initial = opt.t_min;

  Encoder enc(session, ins);
  enc.encode_base(opt.h0);
  if (cfg.hints_enabled)
    st.hint_calls += apply_hints(session, ins, enc.vars(), opt, 0);

  ClauseSet seen;
  int h = opt.h0;
  Rational t_min = opt.t_min;

  // first loop: smallest h admitting a collision-free plan at any cost
  std::optional<ExtractedPlan> first;
  while (true) {
    enc.assert_h_scope(cfg.cost_kind, t_min, std::nullopt);
    ++st.findplan_calls;
    FindplanResult r = findplan(enc, seen, cfg.eps, deadline);
    st.sat_calls += r.sat_calls;
    if (r.status == FindplanStatus::Unknown) {
      st.h_final = h;
      st.t_min_final = t_min;
      st.wall_first_ms = ms_between(t0, Clock::now());
      st.wall_total_ms = st.wall_first_ms;
      st.clauses_mm = seen.mm;
      st.clauses_wm = seen.wm;
      st.clause_variants = seen.variants;
      res.status = SolveStatus::Timeout;
      return res;
    }
    if (r.status == FindplanStatus::Plan) {
      first = std::move(r.plan);
      break;
    }
    enc.pop_h_scope();
    ++h;
    enc.extend_to(h);
    if (cfg.hints_enabled)
      st.hint_calls += apply_hints(session, ins, enc.vars(), opt, h);
  }
  const auto t_first = Clock::now();
  st.wall_first_ms = ms_between(t0, t_first);

  Plan best = certify(ins, first->pre);
  Rational cost = best.pre.cost;
  if (cost < t_min)
    throw InternalError("plan cost fell below the proven lower bound");

  // second loop: contract [t_min, cost] until within 1 + delta
  const Rational bound_factor = Rational(1) + cfg.delta;
  int refine_calls = 0;
  bool interrupted = false;
  while (cost > bound_factor * t_min) {
    if (cfg.refine_call_limit >= 0 && refine_calls >= cfg.refine_call_limit) {
      interrupted = true;
      break;
    }
    if (Clock::now() >= deadline) {
      interrupted = true;
      break;
    }
    const Rational gap = cost - t_min;
    Rational t_hat = (Rational(1) - cfg.bisect_c) * t_min + cfg.bisect_c * cost;
    // outward simplification of the split point; the slack stays well under
    // the contraction margin so the loop still converges geometrically
    const Rational slack =
        min(cfg.eps, (Rational(1) - cfg.bisect_c) * gap / Rational(4));
    t_hat = approx_rational(t_hat, Round::Up, slack);

    enc.assert_h_scope(cfg.cost_kind, t_min, t_hat);
    ++st.findplan_calls;
    ++refine_calls;
    FindplanResult r = findplan(enc, seen, cfg.eps, deadline);
    st.sat_calls += r.sat_calls;
    if (r.status == FindplanStatus::Unknown) {
      interrupted = true;
      break;
    }
    ++st.refine_iterations;
    if (r.status == FindplanStatus::Bottom) {
      t_min = t_hat;
    } else {
      best = certify(ins, r.plan->pre);
      cost = best.pre.cost;
      if (cost < t_min)
        throw InternalError("plan cost fell below the proven lower bound");
    }
    st.gap_trace.push_back({t_min, cost});
  }
  const auto t_end = Clock::now();
  st.wall_refine_ms = ms_between(t_first, t_end);
  st.wall_total_ms = ms_between(t0, t_end);

  st.h_final = h;
  st.t_min_final = t_min;
  st.cost_final = cost;
  st.guaranteed_ratio = t_min > 0 ? cost / t_min : Rational(1);
  st.clauses_mm = seen.mm;
  st.clauses_wm = seen.wm;
  st.clause_variants = seen.variants;
  res.plan = std::move(best);
  res.status = interrupted ? SolveStatus::Timeout : SolveStatus::Solved;
  return res;
}

SolveResult solve(const Instance& ins, const SolveConfig& cfg) {
  auto session = smt::make_session("");
  return solve(ins, cfg, *session);
}

}  // namespace mapfr
