#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "mapfr/collision.hpp"
#include "mapfr/encoder.hpp"
#include "mapfr/shortest_path.hpp"
#include "mapfr/validate.hpp"

namespace mapfr {

// Tunables for solve(). Defaults mirror the CLI defaults.
struct SolveConfig {
  CostKind cost_kind = CostKind::SumOfCosts;
  Rational delta = 1;                  // suboptimality slack, > 0
  Rational bisect_c = Rational(1, 2);  // gap split point, in (0, 1)
  Rational eps = default_eps();        // outward rounding slack, > 0
  std::chrono::milliseconds budget{60000};
  bool hints_enabled = true;
  unsigned long seed = 0;  // reserved for stochastic backends; unused here
  // Test hook (CLI: --debug-refine-limit): behave as if the budget ran out
  // after this many refinement-loop findplan calls. -1 = no limit.
  int refine_call_limit = -1;
};

enum class ConflictKind { MoveMove, WaitMove };

// One geometric collision witnessed in a pre-plan. For WaitMove, agent a is
// the waiting one and b the moving one. Witness times are exact model
// rationals; re-running the geometric test on them reproduces the conflict.
struct Conflict {
  ConflictKind kind = ConflictKind::MoveMove;
  int a = 0, b = 0;
  int ja = 0, jb = 0;
  int ea = -1, eb = -1;   // move edges (MoveMove: both; WaitMove: b's only)
  int u = -1;             // wait vertex (WaitMove)
  Rational tau_a;         // a's move start, or the wait begin
  Rational tau_b;         // b's move start
  Rational wait_end;      // WaitMove, bounded waits only
  bool terminal = false;  // the wait is the unbounded rest at the goal
};

// One clause learned from a conflict; exactly one of mm/wm is engaged.
struct LearnedClause {
  std::optional<ClauseMM> mm;
  std::optional<ClauseWM> wm;
  bool variant = false;  // derived for an alternative target vertex
};

// Persistent clause store C: dedup keys plus counters of what was asserted.
struct ClauseSet {
  std::unordered_set<std::string> keys;
  int mm = 0, wm = 0, variants = 0;
};

// All move-move and wait-move conflicts of a structurally valid pre-plan,
// in deterministic order. Timeline entry indices double as encoding steps;
// wait-wait pairs are skipped and goal rests are treated as terminal waits.
std::vector<Conflict> detect_conflicts(const Instance& ins, const PrePlan& pre);

// The main clause for one conflict plus alternative-target variants that
// also collide against the same witness (capped by the source out-degree).
// Constants are outward-rounded rationals. A witness that fails to reproduce
// geometrically raises InternalError.
std::vector<LearnedClause> generalize(const Instance& ins, const PrePlan&,
                                      const Conflict& c,
                                      const Rational& eps = default_eps());

enum class FindplanStatus { Plan, Bottom, Unknown };

struct FindplanResult {
  FindplanStatus status = FindplanStatus::Unknown;
  std::optional<ExtractedPlan> plan;  // set iff status == Plan
  int sat_calls = 0;
  int clauses_added = 0;
};

// Algorithm 2 against an encoder whose h-scope and cost window are already
// asserted: solve, detect, generalize, re-solve, until the model is
// collision-free (Plan), the formula is unsatisfiable (Bottom), or the
// deadline passes (Unknown). Learned clauses persist in `seen` and in the
// encoder across calls.
FindplanResult findplan(
    Encoder& enc, ClauseSet& seen, const Rational& eps,
    std::optional<std::chrono::steady_clock::time_point> deadline = {});

// Positive-polarity branching hints for V[a][j][v], steps from_step..h: the
// opt_pre path vertex of each step outranks everything else; the rest rank
// by goal distance (closer = higher). Returns the number of hints issued.
int apply_hints(smt::SolverSession& session, const Instance& ins,
                const StepVars& vars, const OptPreplan& opt, int from_step = 0);

enum class SolveStatus { Solved, Timeout };

struct GapSample {
  Rational t_min, cost;
};

struct SolveStats {
  int h0 = 0, h_final = 0;
  Rational t_min_initial, t_min_final;
  Rational cost_final;        // 0 when no plan was found
  Rational guaranteed_ratio;  // cost_final / t_min_final (1 when t_min == 0)
  int sat_calls = 0;
  int findplan_calls = 0;
  int refine_iterations = 0;
  int clauses_mm = 0, clauses_wm = 0, clause_variants = 0;
  int hint_calls = 0;
  std::vector<GapSample> gap_trace;  // after each refinement iteration
  double wall_first_ms = 0.0, wall_refine_ms = 0.0, wall_total_ms = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Timeout;
  std::optional<Plan> plan;  // validator-certified; may accompany Timeout
  SolveStats stats;
};

// Algorithm 1: minimal-step search from h0 upward, then cost bisection down
// to delta-optimality. Throws Infeasible on unreachable goals or overlapping
// start/goal disks, ParseError on an out-of-range config. The session
// overload injects a backend (tests); the other consults MAPFR_SMT_BACKEND.
SolveResult solve(const Instance& ins, const SolveConfig& cfg,
                  smt::SolverSession& session);
SolveResult solve(const Instance& ins, const SolveConfig& cfg = {});

}  // namespace mapfr
