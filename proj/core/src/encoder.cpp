#include "mapfr/encoder.hpp"

#include <string>

#include "mapfr/errors.hpp"

namespace mapfr {

using smt::Term;

namespace {

std::string vname(int a, int j, int v) {
  return "v" + std::to_string(a) + "_" + std::to_string(j) + "_" + std::to_string(v);
}
std::string rname(char prefix, int a, int j) {
  return std::string(1, prefix) + std::to_string(a) + "_" + std::to_string(j);
}

}  // namespace

Encoder::Encoder(smt::SolverSession& session, const Instance& ins)
    : session_(session), ins_(ins) {}

void Encoder::encode_base(int h0) {
  if (based_) throw ScopeMisuse("encode_base called twice");
  if (h0 < 0) throw ScopeMisuse("encode_base with negative h");
  based_ = true;

  const int k = ins_.n_agents();
  const int nv = ins_.n_vertices();
  vars_.lambda = smt::real_var("cost");  // declared lazily by the h-scope
  vars_.V.resize(k);
  vars_.T.resize(k);
  vars_.w.resize(k);
  vars_.m.resize(k);

  for (int a = 0; a < k; ++a) {
    auto& row = vars_.V[a].emplace_back();
    row.reserve(nv);
    for (int v = 0; v < nv; ++v) row.push_back(smt::bool_var(vname(a, 0, v)));
    vars_.T[a].push_back(smt::real_var(rname('t', a, 0)));
  }
  for (int a = 0; a < k; ++a) {
    session_.assert_term(smt::exactly_one(vars_.V[a][0]));
    session_.assert_term(vars_.V[a][0][ins_.agents[a].start]);
    session_.assert_term(smt::eq(vars_.T[a][0], smt::rat(0)));
  }
  while (vars_.h < h0) grow();
}

// One more step for every agent: fresh vertex/time variables, the one-hot
// row, transition and duration clauses for step h, and the time chain.
void Encoder::grow() {
  const int j = vars_.h;  // transitions leave step j, arrive at j + 1
  const int k = ins_.n_agents();
  const int nv = ins_.n_vertices();

  for (int a = 0; a < k; ++a) {
    auto& row = vars_.V[a].emplace_back();
    row.reserve(nv);
    for (int v = 0; v < nv; ++v) row.push_back(smt::bool_var(vname(a, j + 1, v)));
    vars_.T[a].push_back(smt::real_var(rname('t', a, j + 1)));
    vars_.w[a].push_back(smt::real_var(rname('w', a, j)));
    vars_.m[a].push_back(smt::real_var(rname('m', a, j)));
  }

  for (int a = 0; a < k; ++a) {
    const int goal = ins_.agents[a].goal;
    session_.assert_term(smt::exactly_one(vars_.V[a][j + 1]));
    session_.assert_term(smt::ge(vars_.w[a][j], smt::rat(0)));
    session_.assert_term(smt::ge(vars_.m[a][j], smt::rat(0)));
    session_.assert_term(smt::eq(
        vars_.T[a][j + 1],
        smt::add({vars_.T[a][j], vars_.w[a][j], vars_.m[a][j]})));

    for (int u = 0; u < nv; ++u) {
      // successors: out-edges, plus staying put when already at the goal
      std::vector<Term> lits{smt::not_(vars_.V[a][j][u])};
      for (int e : ins_.out(u)) lits.push_back(vars_.V[a][j + 1][ins_.edges[e].to]);
      if (u == goal) lits.push_back(vars_.V[a][j + 1][u]);
      session_.assert_term(smt::or_(std::move(lits)));

      for (int e : ins_.out(u)) {
        const int v = ins_.edges[e].to;
        const Term guard_u = smt::not_(vars_.V[a][j][u]);
        const Term guard_v = smt::not_(vars_.V[a][j + 1][v]);
        session_.assert_term(smt::or_(
            {guard_u, guard_v, smt::le(vars_.m[a][j], smt::rat(ins_.edges[e].duration))}));
        session_.assert_term(smt::or_(
            {guard_u, guard_v, smt::ge(vars_.m[a][j], smt::rat(ins_.edges[e].duration))}));
      }
    }
    // a stay step spends no move time
    session_.assert_term(smt::or_({smt::not_(vars_.V[a][j][goal]),
                                   smt::not_(vars_.V[a][j + 1][goal]),
                                   smt::le(vars_.m[a][j], smt::rat(0))}));
  }

  vars_.h = j + 1;
  if (vars_.h == 1) {
    // somebody moves first: at least one agent starts with no initial wait
    std::vector<Term> zero;
    zero.reserve(k);
    for (int a = 0; a < k; ++a) zero.push_back(smt::le(vars_.w[a][0], smt::rat(0)));
    session_.assert_term(smt::or_(std::move(zero)));
  }

  // terminal-wait clauses learned earlier now also cover the new stay step
  for (const auto& c : terminal_wm_) session_.assert_term(build_wm_step_term(c, j));
}

void Encoder::extend_to(int h_new) {
  if (!based_) throw ScopeMisuse("extend_to before encode_base");
  if (h_active_ || window_active_)
    throw ScopeMisuse("extend_to with h-scoped assertions active");
  if (h_new != vars_.h + 1)
    throw ScopeMisuse("extend_to must advance h by exactly one");
  grow();
}

void Encoder::ground_floaters() {
  // only valid at permanent level
  for (size_t i = grounded_; i < conflict_terms_.size(); ++i)
    session_.assert_term(conflict_terms_[i]);
  grounded_ = conflict_terms_.size();
}

void Encoder::assert_h_scope(CostKind cost_kind, const Rational& t_lo,
                             const std::optional<Rational>& t_hi) {
  if (!based_) throw ScopeMisuse("assert_h_scope before encode_base");
  // an inverted window is simply unsatisfiable, not an error

  if (window_active_) {
    session_.pop();
    window_active_ = false;
  }
  if (h_active_ && active_kind_ != cost_kind) {
    session_.pop();
    h_active_ = false;
  }

  const int k = ins_.n_agents();
  const int h = vars_.h;
  if (!h_active_) {
    ground_floaters();  // at permanent level now
    session_.push();
    for (int a = 0; a < k; ++a)
      session_.assert_term(vars_.V[a][h][ins_.agents[a].goal]);

    switch (cost_kind) {
      case CostKind::SumOfCosts: {
        std::vector<Term> ends;
        ends.reserve(k);
        for (int a = 0; a < k; ++a) ends.push_back(vars_.T[a][h]);
        session_.assert_term(smt::eq(vars_.lambda, smt::add(std::move(ends))));
        break;
      }
      case CostKind::Makespan: {
        std::vector<Term> pins;
        pins.reserve(k);
        for (int a = 0; a < k; ++a) {
          session_.assert_term(smt::ge(vars_.lambda, vars_.T[a][h]));
          pins.push_back(smt::eq(vars_.lambda, vars_.T[a][h]));
        }
        session_.assert_term(smt::or_(std::move(pins)));  // pin to the max
        break;
      }
      case CostKind::Power: {
        std::vector<Term> parts;
        parts.reserve(2 * k * h);
        for (int a = 0; a < k; ++a)
          for (int j = 0; j < h; ++j) {
            parts.push_back(smt::mul(Rational(2), vars_.m[a][j]));
            parts.push_back(vars_.w[a][j]);
          }
        session_.assert_term(smt::eq(vars_.lambda, smt::add(std::move(parts))));
        break;
      }
    }
    h_active_ = true;
    active_kind_ = cost_kind;
    last_kind_ = cost_kind;
  }

  session_.push();
  window_active_ = true;
  session_.assert_term(smt::ge(vars_.lambda, smt::rat(t_lo)));
  if (t_hi) session_.assert_term(smt::le(vars_.lambda, smt::rat(*t_hi)));

  // clauses learned under a previous window live on in the new one
  for (size_t i = grounded_; i < conflict_terms_.size(); ++i)
    session_.assert_term(conflict_terms_[i]);
  for (const auto& c : terminal_wm_)
    session_.assert_term(build_wm_terminal_term(c));
}

void Encoder::pop_h_scope() {
  if (window_active_) {
    session_.pop();
    window_active_ = false;
  }
  if (h_active_) {
    session_.pop();
    h_active_ = false;
  }
  ground_floaters();
}

// after asserting a conflict clause at the current depth, remember whether it
// is already permanent
void Encoder::note_asserted() {
  if (!h_active_ && !window_active_) grounded_ = conflict_terms_.size();
}

Term Encoder::build_mm_term(const ClauseMM& c) const {
  const auto& ea = ins_.edges[c.ea];
  const auto& eb = ins_.edges[c.eb];
  const Term tau_a = smt::add(vars_.T[c.a][c.ja], vars_.w[c.a][c.ja]);
  const Term tau_b = smt::add(vars_.T[c.b][c.jb], vars_.w[c.b][c.jb]);
  const Term diff = smt::sub(tau_a, tau_b);
  return smt::or_({smt::not_(vars_.V[c.a][c.ja][ea.from]),
                   smt::not_(vars_.V[c.a][c.ja + 1][ea.to]),
                   smt::not_(vars_.V[c.b][c.jb][eb.from]),
                   smt::not_(vars_.V[c.b][c.jb + 1][eb.to]),
                   smt::le(diff, smt::rat(c.L)),
                   smt::ge(diff, smt::rat(c.U))});
}

// wait of a at step ja against b's move; sound for any horizon
Term Encoder::build_wm_step_term(const ClauseWM& c, int ja) const {
  const auto& eb = ins_.edges[c.eb];
  const Term tau_b = smt::add(vars_.T[c.b][c.jb], vars_.w[c.b][c.jb]);
  return smt::or_({smt::not_(vars_.V[c.a][ja][c.u]),
                   smt::not_(vars_.V[c.b][c.jb][eb.from]),
                   smt::not_(vars_.V[c.b][c.jb + 1][eb.to]),
                   smt::ge(smt::sub(vars_.T[c.a][ja], tau_b), smt::rat(c.hi)),
                   smt::le(smt::sub(smt::add(vars_.T[c.a][ja], vars_.w[c.a][ja]), tau_b),
                           smt::rat(c.lo))});
}

// the rest after the last step never ends, so only the entry side is bounded;
// anchored to the current h and therefore rebuilt per horizon
Term Encoder::build_wm_terminal_term(const ClauseWM& c) const {
  const int h = vars_.h;
  const auto& eb = ins_.edges[c.eb];
  const Term tau_b = smt::add(vars_.T[c.b][c.jb], vars_.w[c.b][c.jb]);
  return smt::or_({smt::not_(vars_.V[c.a][h][c.u]),
                   smt::not_(vars_.V[c.b][c.jb][eb.from]),
                   smt::not_(vars_.V[c.b][c.jb + 1][eb.to]),
                   smt::ge(smt::sub(vars_.T[c.a][h], tau_b), smt::rat(c.hi))});
}

void Encoder::assert_conflict_mm(const ClauseMM& c) {
  if (!based_) throw ScopeMisuse("conflict before encode_base");
  if (c.a == c.b || c.a < 0 || c.b < 0 || c.a >= ins_.n_agents() ||
      c.b >= ins_.n_agents())
    throw InternalError("mm clause agents out of range");
  if (c.ja < 0 || c.jb < 0 || c.ja + 1 > vars_.h || c.jb + 1 > vars_.h)
    throw InternalError("mm clause step out of range");
  if (c.ea < 0 || c.eb < 0 || c.ea >= static_cast<int>(ins_.edges.size()) ||
      c.eb >= static_cast<int>(ins_.edges.size()))
    throw InternalError("mm clause edge out of range");
  if (!(c.L < c.U)) throw DegenerateClause("mm band is empty");

  Term t = build_mm_term(c);
  conflict_terms_.push_back(t);
  session_.assert_term(t);
  note_asserted();
}

void Encoder::assert_conflict_wm(const ClauseWM& c) {
  if (!based_) throw ScopeMisuse("conflict before encode_base");
  if (c.a == c.b || c.a < 0 || c.b < 0 || c.a >= ins_.n_agents() ||
      c.b >= ins_.n_agents())
    throw InternalError("wm clause agents out of range");
  if (c.u < 0 || c.u >= ins_.n_vertices())
    throw InternalError("wm clause vertex out of range");
  if (c.jb < 0 || c.jb + 1 > vars_.h)
    throw InternalError("wm clause move step out of range");
  if (c.eb < 0 || c.eb >= static_cast<int>(ins_.edges.size()))
    throw InternalError("wm clause edge out of range");
  if (!(c.lo < c.hi)) throw DegenerateClause("wm window is empty");

  if (c.terminal) {
    // permanent guards for every finite stay step; the unbounded tail is
    // covered by the h-anchored clause, which cannot outlive this horizon
    for (int j = 0; j < vars_.h; ++j) {
      Term t = build_wm_step_term(c, j);
      conflict_terms_.push_back(t);
      session_.assert_term(t);
    }
    note_asserted();
    terminal_wm_.push_back(c);
    if (h_active_ || window_active_)
      session_.assert_term(build_wm_terminal_term(c));
  } else {
    if (c.ja < 0 || c.ja >= vars_.h)
      throw InternalError("wm clause wait step out of range");
    Term t = build_wm_step_term(c, c.ja);
    conflict_terms_.push_back(t);
    session_.assert_term(t);
    note_asserted();
  }
}

ExtractedPlan Encoder::extract_preplan(const smt::Model& model) const {
  if (!based_) throw ScopeMisuse("extract before encode_base");
  const int k = ins_.n_agents();
  const int h = vars_.h;

  ExtractedPlan out;
  out.pre.cost_kind = last_kind_;
  out.pre.steps = 0;
  for (int a = 0; a < k; ++a) {
    std::vector<int> at(h + 1, -1);
    for (int j = 0; j <= h; ++j) {
      for (int v = 0; v < ins_.n_vertices(); ++v) {
        if (!model.eval_bool(vars_.V[a][j][v])) continue;
        if (at[j] != -1) throw MalformedModel("one-hot violated");
        at[j] = v;
      }
      if (at[j] == -1) throw MalformedModel("no vertex assigned");
    }

    AgentTimeline tl;
    tl.agent = a;
    for (int j = 0; j < h; ++j) {
      TimelineEntry e;
      e.arrive = model.eval_real(vars_.T[a][j]);
      e.wait = model.eval_real(vars_.w[a][j]);
      e.vertex = at[j];
      if (at[j + 1] == at[j]) {
        if (at[j] != ins_.agents[a].goal)
          throw MalformedModel("stay away from goal");
        e.edge = -1;
        e.move_dur = Rational(0);
      } else {
        e.edge = ins_.edge_index(at[j], at[j + 1]);
        if (e.edge < 0) throw MalformedModel("transition leaves the graph");
        e.move_dur = model.eval_real(vars_.m[a][j]);
      }
      tl.entries.push_back(std::move(e));
    }
    {
      TimelineEntry last;
      last.arrive = model.eval_real(vars_.T[a][h]);
      last.wait = Rational(0);
      last.vertex = at[h];
      tl.entries.push_back(std::move(last));
    }
    tl = trim(tl);
    check_timeline(ins_, tl);
    out.pre.steps = std::max(out.pre.steps, tl.move_count());
    out.pre.timelines.push_back(std::move(tl));
  }

  out.pre.cost = evaluate_cost(out.pre.timelines, out.pre.cost_kind);
  auto it = model.reals.find("cost");
  out.lambda = it != model.reals.end() ? it->second : out.pre.cost;
  return out;
}

}  // namespace mapfr
