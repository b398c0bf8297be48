#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "mapfr/instance.hpp"
#include "mapfr/plan.hpp"
#include "mapfr/smt/session.hpp"

namespace mapfr {

// Generalized move-move collision: whenever both agents take these edges at
// these steps, any relative start offset tau_a - tau_b inside (L, U) collides.
struct ClauseMM {
  int a = 0, b = 0;    // agents
  int ja = 0, jb = 0;  // their move steps
  int ea = 0, eb = 0;  // edge indices into Instance::edges
  Rational L, U;       // excluded open band, L < U
};

// Generalized wait-move collision: agent a waiting at u at step ja collides
// with b moving along eb at step jb whenever the wait interval meets the open
// window (lo, hi), both bounds relative to b's move start.
struct ClauseWM {
  int a = 0, ja = 0, u = 0;
  int b = 0, jb = 0, eb = 0;
  Rational lo, hi;
  bool terminal = false;  // the wait has no following move (rest at goal)
};

struct StepVars {
  int h = 0;
  // V[a][j][v] vertex one-hots, j in 0..h; T[a][j] arrival times, j in 0..h;
  // w[a][j] wait and m[a][j] move durations, j in 0..h-1.
  std::vector<std::vector<std::vector<smt::Term>>> V;
  std::vector<std::vector<smt::Term>> T, w, m;
  smt::Term lambda;
};

struct ExtractedPlan {
  PrePlan pre;      // trimmed, re-costed
  Rational lambda;  // cost variable as assigned by the model
};

// Incrementally builds phi_{P,h,t_lo,t_hi} over one solver session.
// Three layers: permanent (start, transitions, time chain, conflict clauses),
// an h-scope (goals at h, lambda definition), and a nested window scope (cost
// bounds, h-anchored terminal-wait clauses). Conflict clauses learned while
// scopes are active are re-asserted automatically after scope churn.
class Encoder {
 public:
  Encoder(smt::SolverSession& session, const Instance& ins);

  // Permanent layer for steps 0..h0. Call exactly once.
  void encode_base(int h0);

  // Adds one step to the permanent layer. Requires h_new == h() + 1 and no
  // active h-scope, else ScopeMisuse.
  void extend_to(int h_new);

  // Ensures the h-scope (goals, lambda for cost_kind) and replaces the window
  // scope with [t_lo, t_hi]; no upper bound when t_hi is empty.
  void assert_h_scope(CostKind cost_kind, const Rational& t_lo,
                      const std::optional<Rational>& t_hi);

  // Pops window and h scopes; permanent layer stays. Required before extend_to.
  void pop_h_scope();

  // Conflict clauses; permanently scoped. DegenerateClause on empty bands.
  void assert_conflict_mm(const ClauseMM& c);
  void assert_conflict_wm(const ClauseWM& c);

  // Decodes a model into a trimmed pre-plan. MalformedModel if the one-hot
  // invariant breaks or the vertex chain leaves the graph.
  ExtractedPlan extract_preplan(const smt::Model& model) const;

  const StepVars& vars() const { return vars_; }
  int h() const { return vars_.h; }
  bool h_scope_active() const { return h_active_; }
  const Instance& instance() const { return ins_; }
  smt::SolverSession& session() { return session_; }
  void dump(std::ostream& os) const { session_.dump_assertions(os); }

 private:
  void grow();
  void ground_floaters();
  smt::Term build_mm_term(const ClauseMM& c) const;
  smt::Term build_wm_step_term(const ClauseWM& c, int ja) const;
  smt::Term build_wm_terminal_term(const ClauseWM& c) const;
  void note_asserted();

  smt::SolverSession& session_;
  const Instance& ins_;
  StepVars vars_;
  bool based_ = false;
  bool h_active_ = false;
  bool window_active_ = false;
  CostKind active_kind_ = CostKind::SumOfCosts;
  CostKind last_kind_ = CostKind::SumOfCosts;

  // every conflict clause term ever built; the prefix [0, grounded_) is
  // asserted at the permanent level, the rest is re-asserted after scope pops
  std::vector<smt::Term> conflict_terms_;
  size_t grounded_ = 0;
  std::vector<ClauseWM> terminal_wm_;  // rebuilt against the current h
};

}  // namespace mapfr
