#include "mapfr/smt/lra_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <limits>
#include <cmath>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mapfr/errors.hpp"

namespace mapfr::smt {

namespace {

using Lit = int;  // var << 1 | sign, sign 1 = negated
inline int var_of(Lit l) { return l >> 1; }
inline bool sign_of(Lit l) { return l & 1; }
inline Lit mk_lit(int v, bool neg = false) { return (v << 1) | (neg ? 1 : 0); }
inline Lit neg_lit(Lit l) { return l ^ 1; }
constexpr Lit LIT_UNDEF = -2;

// c + k * delta, the standard trick for strict LRA bounds.
struct DRat {
  Rational c, k;
  DRat() = default;
  DRat(Rational cc, Rational kk) : c(std::move(cc)), k(std::move(kk)) {}
  bool operator<(const DRat& o) const { return c < o.c || (c == o.c && k < o.k); }
  bool operator>(const DRat& o) const { return o < *this; }
  bool operator<=(const DRat& o) const { return !(o < *this); }
  bool operator==(const DRat& o) const { return c == o.c && k == o.k; }
  DRat operator+(const DRat& o) const { return {c + o.c, k + o.k}; }
  DRat operator-(const DRat& o) const { return {c - o.c, k - o.k}; }
  DRat operator*(const Rational& s) const { return {c * s, k * s}; }
  DRat& operator+=(const DRat& o) {
    c += o.c;
    k += o.k;
    return *this;
  }
};

// rcode: >= 0 is the asserting literal, -1 a free fact (level 0), <= -2 an
// index (-2 - i) into theory_expl_ holding pre-negated contributor literals.
struct Bound {
  DRat v;
  int rcode = -1;
  bool active = false;
};

struct Clause {
  std::vector<Lit> lits;
  double act = 0.0;
  bool learnt = false;
  bool deleted = false;
};

struct Watcher {
  int cref;
  Lit blocker;
};

// Linear expression over simplex variable ids.
struct LinExpr {
  std::map<int, Rational> c;
  Rational k;
};

struct Row {
  int basic = -1;
  std::unordered_map<int, Rational> a;  // basic = sum a[j] * x_j
};

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

class InternalLraSession final : public SolverSession {
 public:
  InternalLraSession() {
    asserted_terms_.emplace_back();
    int v = new_sat_var();  // var 0 is the constant "true"
    unchecked_enqueue(mk_lit(v, false), -1);
  }

  void declare_real(const std::string& name) override { real_id(name); }
  void declare_bool(const std::string& name) override { bool_id(name); }

  void assert_term(const Term& t) override {
    if (!t) throw BackendError("assert of a null term");
    asserted_terms_.back().push_back(t);
    assert_top(t);
  }

  void push() override {
    int act = new_sat_var();
    act_stack_.push_back(act);
    asserted_terms_.emplace_back();
  }

  void pop() override {
    if (act_stack_.empty()) throw ScopeUnderflow("pop at scope depth 0");
    int act = act_stack_.back();
    act_stack_.pop_back();
    asserted_terms_.pop_back();
    add_clause({mk_lit(act, true)}, false);  // permanently disable the scope
    need_simplify_ = true;
  }

  int scope_depth() const override { return static_cast<int>(act_stack_.size()); }

  CheckOutcome check_sat(std::optional<std::chrono::milliseconds> budget) override {
    CheckOutcome out;
    if (budget)
      deadline_ = std::chrono::steady_clock::now() + *budget;
    else
      deadline_.reset();

    cancel_until(0);
    theory_dirty_ = true;
    rp_quota_ = 2000000;
    if (const char* cad = std::getenv("MAPFR_EAGER_CADENCE")) {
      long v = std::atol(cad);
      eager_cadence_ = v >= 1 ? v : std::numeric_limits<long>::max();
    }
    if (ok_ && propagate_() != 0) ok_ = false;
    if (!ok_) {
      out.status = CheckResult::Unsat;
      return out;
    }
    if (need_simplify_) simplify_level0();
    if (!ok_) {
      out.status = CheckResult::Unsat;
      return out;
    }
    apply_hints();

    int status = 0;
    for (int curr_restarts = 0; status == 0; ++curr_restarts) {
      if (out_of_budget()) {
        cancel_until(0);
        out.status = CheckResult::Unknown;
        return out;
      }
      int lim = static_cast<int>(luby(2.0, curr_restarts) * 100);
      status = search(lim);
    }

    if (status == 1) {
      build_model(out.model);
      out.status = CheckResult::Sat;
    } else if (status == -1) {
      out.status = CheckResult::Unsat;
    } else {
      out.status = CheckResult::Unknown;
    }
    cancel_until(0);
    if (std::getenv("MAPFR_SMT_DEBUG"))
      std::cerr << "[lra] conflicts=" << conflicts_ << " decisions=" << decisions_
                << " props=" << propagations_ << " checks=" << simplex_checks_
                << " pivots=" << pivots_ << " rows=" << rows_.size()
                << " learnts=" << n_learnts_ << "\n";
    return out;
  }

  void hint_branching(const Term& literal, int priority) override {
    const TermNode* n = literal.get();
    bool positive = true;
    if (n && n->kind == Kind::Not) {
      positive = false;
      n = n->args[0].get();
    }
    if (!n || n->kind != Kind::BoolVar)
      throw BackendError("hint_branching expects a Boolean variable or its negation");
    if (!bool_ids_.count(n->name)) {
      if (warned_hints_.insert(n->name).second)
        std::cerr << "warning: branching hint for unregistered variable '" << n->name
                  << "' ignored\n";
      return;
    }
    hints_[n->name] = {positive, priority};  // duplicates keep the latest
  }

  void dump_assertions(std::ostream& os) const override {
    os << "(set-logic QF_LRA)\n";
    for (const auto& [name, is_real] : decl_order_)
      os << "(declare-fun " << name << " () " << (is_real ? "Real" : "Bool") << ")\n";
    for (size_t s = 0; s < asserted_terms_.size(); ++s) {
      if (s > 0) os << "(push 1)\n";
      for (const auto& t : asserted_terms_[s]) os << "(assert " << to_smt2(t) << ")\n";
    }
    os << "(check-sat)\n";
  }

  const char* backend_name() const override { return "internal"; }

 private:
  // ---- registries ----------------------------------------------------
  std::unordered_map<std::string, int> real_ids_;  // name -> simplex var
  std::unordered_map<std::string, int> bool_ids_;  // name -> SAT var
  std::vector<std::pair<std::string, bool>> decl_order_;

  int real_id(const std::string& name) {
    auto it = real_ids_.find(name);
    if (it != real_ids_.end()) return it->second;
    if (bool_ids_.count(name)) throw BackendError("'" + name + "' is already a Bool");
    int s = new_svar();
    real_ids_.emplace(name, s);
    decl_order_.emplace_back(name, true);
    return s;
  }

  int bool_id(const std::string& name) {
    auto it = bool_ids_.find(name);
    if (it != bool_ids_.end()) return it->second;
    if (real_ids_.count(name)) throw BackendError("'" + name + "' is already a Real");
    int v = new_sat_var();
    bool_ids_.emplace(name, v);
    decl_order_.emplace_back(name, false);
    return v;
  }

  // ---- SAT state -----------------------------------------------------
  std::vector<int8_t> assign_;  // var -> 1 true, -1 false, 0 undef
  std::vector<int> level_, reason_;
  std::vector<double> activity_;
  std::vector<int8_t> phase_;
  std::vector<char> seen_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  size_t qhead_ = 0;
  std::vector<Clause> clauses_;
  std::vector<std::vector<Watcher>> watch_;
  std::vector<Lit> conflict_lits_;
  bool ok_ = true;
  bool need_simplify_ = false;
  double var_inc_ = 1.0, cla_inc_ = 1.0;
  int n_learnts_ = 0;
  double max_learnts_ = 8000.0;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  uint64_t conflicts_ = 0, decisions_ = 0, propagations_ = 0, simplex_checks_ = 0,
      pivots_ = 0;

  // atom payload per SAT var (-1 svar = plain Boolean)
  std::vector<int> atom_svar_;
  std::vector<Rational> atom_bound_;
  std::vector<char> atom_strict_;

  std::vector<int> act_stack_;
  std::vector<std::vector<Term>> asserted_terms_;
  std::unordered_map<std::string, std::pair<bool, int>> hints_;
  std::unordered_set<std::string> warned_hints_;

  // decision heap (max-activity)
  std::vector<int> heap_, heap_pos_;

  bool heap_lt(int a, int b) const { return activity_[a] > activity_[b]; }
  void heap_up(size_t i) {
    int v = heap_[i];
    while (i > 0) {
      size_t p = (i - 1) >> 1;
      if (!heap_lt(v, heap_[p])) break;
      heap_[i] = heap_[p];
      heap_pos_[heap_[i]] = static_cast<int>(i);
      i = p;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<int>(i);
  }
  void heap_down(size_t i) {
    int v = heap_[i];
    size_t n = heap_.size();
    for (;;) {
      size_t l = 2 * i + 1, r = l + 1, best = i;
      if (l < n && heap_lt(heap_[l], v)) best = l;
      if (r < n && heap_lt(heap_[r], best == i ? v : heap_[best])) best = r;
      if (best == i) break;
      heap_[i] = heap_[best];
      heap_pos_[heap_[i]] = static_cast<int>(i);
      i = best;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<int>(i);
  }
  bool heap_contains(int v) const {
    return v < static_cast<int>(heap_pos_.size()) && heap_pos_[v] >= 0;
  }
  void heap_insert(int v) {
    if (heap_contains(v)) return;
    if (v >= static_cast<int>(heap_pos_.size())) heap_pos_.resize(v + 1, -1);
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
  }
  int heap_pop() {
    int v = heap_[0];
    heap_pos_[v] = -1;
    heap_[0] = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_pos_[heap_[0]] = 0;
      heap_down(0);
    }
    return v;
  }
  void heap_update(int v) {
    if (!heap_contains(v))
      heap_insert(v);
    else {
      heap_up(heap_pos_[v]);
      heap_down(heap_pos_[v]);
    }
  }

  // ---- theory state ----------------------------------------------------
  std::vector<DRat> beta_;
  std::vector<Bound> lower_, upper_;
  std::vector<int> basic_row_;  // svar -> row index or -1
  std::vector<Row> rows_;
  std::vector<std::unordered_set<int>> col_rows_;  // svar -> rows using it as a column
  std::unordered_map<std::string, int> form_map_;  // normalized form -> slack svar
  std::vector<std::map<std::pair<Rational, bool>, int>> atom_map_;  // per svar

  struct BoundUndo {
    int svar;
    bool is_upper;
    Bound old;
  };
  std::vector<BoundUndo> bound_trail_;
  std::vector<int> bound_lim_;
  bool theory_dirty_ = false;  // a bound moved since the last simplex check
  long fixpoints_ = 0;
  long eager_cadence_ = 1;  // run the fixpoint check every Nth dirty fixpoint
  long rp_quota_ = 0;       // per-check_sat cap on row propagations; fractional
                            // pivot coefficients could otherwise tighten forever
  std::set<int> suspect_;     // basic vars whose beta or bounds moved; superset
                              // of the bound-violating ones

  // lazy reasons for theory propagations; entries used as atom reasons are
  // clause-shaped ([propagated lit, false lits...]), entries used as bound
  // explanations hold just the false literals. Trimmed with the trail.
  std::vector<std::vector<Lit>> theory_expl_;
  std::vector<int> expl_lim_;

  int mk_expl(std::vector<Lit> lits) {
    theory_expl_.push_back(std::move(lits));
    return -2 - static_cast<int>(theory_expl_.size() - 1);
  }

  void append_bound_reason(int rcode, std::vector<Lit>& out) const {
    if (rcode >= 0) {
      out.push_back(neg_lit(rcode));
    } else if (rcode <= -2) {
      const auto& e = theory_expl_[static_cast<size_t>(-2 - rcode)];
      out.insert(out.end(), e.begin(), e.end());
    }
  }

  // rows whose implied bounds may have tightened since the last propagation
  std::vector<char> rp_flag_;
  std::vector<int> rp_rows_;

  void mark_row(int ri) {
    if (!rp_flag_[static_cast<size_t>(ri)]) {
      rp_flag_[static_cast<size_t>(ri)] = 1;
      rp_rows_.push_back(ri);
    }
  }

  int new_sat_var() {
    int v = static_cast<int>(assign_.size());
    assign_.push_back(0);
    level_.push_back(0);
    reason_.push_back(-1);
    activity_.push_back(0.0);
    phase_.push_back(0);
    seen_.push_back(0);
    atom_svar_.push_back(-1);
    atom_bound_.emplace_back(0);
    atom_strict_.push_back(0);
    watch_.resize(2 * assign_.size());
    heap_insert(v);
    return v;
  }

  int new_svar() {
    int s = static_cast<int>(beta_.size());
    beta_.emplace_back();
    lower_.emplace_back();
    upper_.emplace_back();
    basic_row_.push_back(-1);
    col_rows_.emplace_back();
    atom_map_.emplace_back();
    return s;
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  int lit_value(Lit l) const {  // +1 true, -1 false, 0 unassigned
    int8_t a = assign_[var_of(l)];
    if (a == 0) return 0;
    return ((a == 1) != sign_of(l)) ? 1 : -1;
  }

  void unchecked_enqueue(Lit l, int cr) {
    int v = var_of(l);
    assign_[v] = sign_of(l) ? -1 : 1;
    level_[v] = decision_level();
    reason_[v] = cr;
    trail_.push_back(l);
  }

  void new_decision_level() {
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    bound_lim_.push_back(static_cast<int>(bound_trail_.size()));
    expl_lim_.push_back(static_cast<int>(theory_expl_.size()));
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (int i = static_cast<int>(trail_.size()) - 1; i >= trail_lim_[lvl]; --i) {
      int v = var_of(trail_[i]);
      phase_[v] = assign_[v] == 1 ? 1 : 0;
      assign_[v] = 0;
      reason_[v] = -1;
      heap_insert(v);
    }
    qhead_ = static_cast<size_t>(trail_lim_[lvl]);
    trail_.resize(static_cast<size_t>(trail_lim_[lvl]));
    trail_lim_.resize(static_cast<size_t>(lvl));
    for (int i = static_cast<int>(bound_trail_.size()) - 1; i >= bound_lim_[lvl]; --i) {
      BoundUndo& u = bound_trail_[static_cast<size_t>(i)];
      (u.is_upper ? upper_ : lower_)[static_cast<size_t>(u.svar)] = u.old;
    }
    bound_trail_.resize(static_cast<size_t>(bound_lim_[lvl]));
    bound_lim_.resize(static_cast<size_t>(lvl));
    theory_expl_.resize(static_cast<size_t>(expl_lim_[lvl]));
    expl_lim_.resize(static_cast<size_t>(lvl));
  }

  void bump_var(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    heap_update(v);
  }

  void bump_clause(Clause& c) {
    c.act += cla_inc_;
    if (c.act > 1e20) {
      for (auto& cl : clauses_)
        if (cl.learnt) cl.act *= 1e-20;
      cla_inc_ *= 1e-20;
    }
  }

  // ---- clauses ---------------------------------------------------------
  void attach(int cref) {
    const Clause& c = clauses_[cref];
    watch_[neg_lit(c.lits[0])].push_back({cref, c.lits[1]});
    watch_[neg_lit(c.lits[1])].push_back({cref, c.lits[0]});
  }

  void detach(int cref) {
    const Clause& c = clauses_[cref];
    for (int w = 0; w < 2; ++w) {
      auto& ws = watch_[neg_lit(c.lits[w])];
      for (size_t i = 0; i < ws.size(); ++i)
        if (ws[i].cref == cref) {
          ws[i] = ws.back();
          ws.pop_back();
          break;
        }
    }
  }

  // Problem clauses pass through level-0 simplification; learnt clauses are
  // attached as produced by analyze (lits[0] asserting, lits[1] at the
  // backjump level).
  int add_clause(std::vector<Lit> lits, bool learnt) {
    if (!learnt) {
      std::sort(lits.begin(), lits.end());
      lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
      for (size_t i = 0; i + 1 < lits.size(); ++i)
        if (lits[i + 1] == neg_lit(lits[i])) return -1;  // tautology
      std::vector<Lit> kept;
      for (Lit l : lits) {
        int val = lit_value(l);
        if (val == 1 && level_[var_of(l)] == 0) return -1;  // already satisfied
        if (val == -1 && level_[var_of(l)] == 0) continue;  // drop dead literal
        kept.push_back(l);
      }
      lits = std::move(kept);
    }
    if (lits.empty()) {
      ok_ = false;
      return -1;
    }
    if (lits.size() == 1) {
      int val = lit_value(lits[0]);
      if (val == -1)
        ok_ = false;
      else if (val == 0)
        unchecked_enqueue(lits[0], -1);
      return -1;
    }
    int cref = static_cast<int>(clauses_.size());
    Clause c;
    c.lits = std::move(lits);
    c.learnt = learnt;
    if (learnt) {
      c.act = cla_inc_;
      ++n_learnts_;
    }
    clauses_.push_back(std::move(c));
    attach(cref);
    return cref;
  }

  // ---- theory: bounds --------------------------------------------------
  void update_nonbasic(int x, const DRat& v) {
    DRat d = v - beta_[x];
    beta_[x] = v;
    for (int r : col_rows_[x]) {
      const Row& rr = rows_[static_cast<size_t>(r)];
      beta_[rr.basic] += d * rr.a.at(x);
      suspect_.insert(rr.basic);
    }
  }

  bool assert_bound(int svar, bool is_upper, const DRat& v, int rcode) {
    Bound& mine = (is_upper ? upper_ : lower_)[svar];
    Bound& other = (is_upper ? lower_ : upper_)[svar];
    if (mine.active && (is_upper ? mine.v <= v : !(mine.v < v))) return false;  // weaker
    if (other.active && (is_upper ? v < other.v : other.v < v)) {
      conflict_lits_.clear();
      append_bound_reason(rcode, conflict_lits_);
      append_bound_reason(other.rcode, conflict_lits_);
      return true;
    }
    bound_trail_.push_back({svar, is_upper, mine});
    mine = {v, rcode, true};
    if (basic_row_[svar] < 0) {
      if (is_upper ? beta_[svar] > v : beta_[svar] < v) update_nonbasic(svar, v);
      for (int r : col_rows_[svar]) mark_row(r);
    } else {
      suspect_.insert(svar);
      mark_row(basic_row_[svar]);
    }
    theory_dirty_ = true;
    imply_chain(svar, is_upper, v, rcode);
    return false;
  }

  // Atoms on svar that the freshly installed bound decides get enqueued, so
  // the Boolean search never branches on them. An upper bound makes every
  // weaker upper atom true; a lower bound falsifies upper atoms below it.
  void imply_chain(int svar, bool is_upper, const DRat& v, int rcode) {
    auto& m = atom_map_[static_cast<size_t>(svar)];
    if (m.empty()) return;
    std::vector<Lit> contrib;
    append_bound_reason(rcode, contrib);
    auto reason_for = [&](Lit q) {
      if (decision_level() == 0) return -1;
      std::vector<Lit> e;
      e.reserve(contrib.size() + 1);
      e.push_back(q);
      e.insert(e.end(), contrib.begin(), contrib.end());
      return mk_expl(std::move(e));
    };
    int trigger = rcode >= 0 ? var_of(rcode) : -1;
    if (is_upper) {
      for (auto it = m.lower_bound({v.c, false}); it != m.end(); ++it) {
        if (it->second == trigger) continue;
        DRat point{it->first.first, Rational(it->first.second ? -1 : 0)};
        if (point < v) continue;  // only the strict twin at v.c can land here
        Lit q = mk_lit(it->second, false);
        int val = lit_value(q);
        if (val != 0) break;  // its own assertion covered everything beyond
        unchecked_enqueue(q, reason_for(q));
      }
    } else {
      auto it = m.upper_bound({v.c, true});
      while (it != m.begin()) {
        --it;
        if (it->second == trigger) continue;
        DRat point{it->first.first, Rational(it->first.second ? -1 : 0)};
        if (!(point < v)) continue;  // the non-strict twin at v.c may survive
        Lit q = mk_lit(it->second, true);
        int val = lit_value(q);
        if (val != 0) break;
        unchecked_enqueue(q, reason_for(q));
      }
    }
  }

  // Called as each theory literal crosses the propagation head.
  bool theory_assert_lit(Lit p) {
    int v = var_of(p);
    int f = atom_svar_[v];
    const Rational& c = atom_bound_[v];
    bool strict = atom_strict_[v] != 0;
    if (!sign_of(p))  // f <= c  /  f < c
      return assert_bound(f, true, {c, Rational(strict ? -1 : 0)}, p);
    // not (f <= c) is f > c; not (f < c) is f >= c
    return assert_bound(f, false, {c, Rational(strict ? 0 : 1)}, p);
  }

  // ---- theory: simplex ---------------------------------------------------
  void pivot(int ri, int j) {
    ++pivots_;
    mark_row(ri);
    Row& row = rows_[static_cast<size_t>(ri)];
    int i = row.basic;
    Rational aij = row.a.at(j);
    Rational inv = aij.reciprocal();
    std::unordered_map<int, Rational> nr;
    nr.emplace(i, inv);
    for (const auto& [k2, c2] : row.a)
      if (k2 != j) {
        Rational nc = -(c2 * inv);
        if (!nc.is_zero()) nr.emplace(k2, nc);
      }
    for (const auto& [k2, c2] : row.a) col_rows_[k2].erase(ri);
    row.a = std::move(nr);
    row.basic = j;
    for (const auto& [k2, c2] : row.a) col_rows_[k2].insert(ri);
    basic_row_[i] = -1;
    basic_row_[j] = ri;

    std::vector<int> occ(col_rows_[j].begin(), col_rows_[j].end());
    for (int r2 : occ) {
      if (r2 == ri) continue;
      mark_row(r2);
      Row& rr = rows_[static_cast<size_t>(r2)];
      auto it = rr.a.find(j);
      Rational cj = it->second;
      rr.a.erase(it);
      col_rows_[j].erase(r2);
      for (const auto& [k2, c2] : row.a) {
        auto f = rr.a.find(k2);
        if (f == rr.a.end()) {
          Rational nv = cj * c2;
          if (!nv.is_zero()) {
            rr.a.emplace(k2, nv);
            col_rows_[k2].insert(r2);
          }
        } else {
          f->second += cj * c2;
          if (f->second.is_zero()) {
            rr.a.erase(f);
            col_rows_[k2].erase(r2);
          }
        }
      }
    }
  }

  void pivot_and_update(int ri, int j, const DRat& v) {
    Row& row = rows_[static_cast<size_t>(ri)];
    int i = row.basic;
    DRat theta = (v - beta_[i]) * row.a.at(j).reciprocal();
    beta_[i] = v;
    beta_[j] += theta;
    suspect_.insert(j);
    for (int r2 : col_rows_[j]) {
      if (r2 == ri) continue;
      const Row& rr = rows_[static_cast<size_t>(r2)];
      beta_[rr.basic] += theta * rr.a.at(j);
      suspect_.insert(rr.basic);
    }
    pivot(ri, j);
  }

  // Dutertre-de Moura check with Bland's rule. On infeasibility fills `out`
  // with a falsified explanation clause. Only vars in suspect_ can violate
  // their bounds (every beta / bound movement inserts there), so the scan is
  // confined to that set; taking its minimum keeps Bland's anti-cycling order.
  bool simplex_check(std::vector<Lit>& out) {
    ++simplex_checks_;
    for (;;) {
      int vi = -1;
      bool below = false;
      while (!suspect_.empty()) {
        int v = *suspect_.begin();
        suspect_.erase(suspect_.begin());
        if (basic_row_[v] < 0) continue;
        if (lower_[v].active && beta_[v] < lower_[v].v) {
          vi = v;
          below = true;
          break;
        }
        if (upper_[v].active && beta_[v] > upper_[v].v) {
          vi = v;
          below = false;
          break;
        }
      }
      if (vi < 0) return true;
      const Row& row = rows_[static_cast<size_t>(basic_row_[vi])];
      int enter = -1;
      for (const auto& [j, a] : row.a) {
        bool ok;
        if (below)
          ok = a.sign() > 0 ? (!upper_[j].active || beta_[j] < upper_[j].v)
                            : (!lower_[j].active || beta_[j] > lower_[j].v);
        else
          ok = a.sign() > 0 ? (!lower_[j].active || beta_[j] > lower_[j].v)
                            : (!upper_[j].active || beta_[j] < upper_[j].v);
        if (ok && (enter < 0 || j < enter)) enter = j;
      }
      if (enter < 0) {
        out.clear();
        append_bound_reason(below ? lower_[vi].rcode : upper_[vi].rcode, out);
        for (const auto& [j, a] : row.a) {
          bool pos = a.sign() > 0;
          const Bound& b = (below == pos) ? upper_[j] : lower_[j];
          append_bound_reason(b.rcode, out);
        }
        // backjumping retracts bounds but leaves beta alone, so vi may still
        // violate a surviving bound; keep it queued for the next check
        suspect_.insert(vi);
        return false;
      }
      pivot_and_update(basic_row_[vi], enter, below ? lower_[vi].v : upper_[vi].v);
    }
  }

  // Interval propagation over queued rows: bounds on all but one term of a
  // row imply a bound on the remaining one. Deriving those bounds (and the
  // atoms they decide, via imply_chain) lets additive chains resolve during
  // propagation instead of by case analysis. Returns 0 quiet, 1 progressed,
  // 2 conflict (conflict_lits_ filled).
  int row_propagate() {
    if (rp_quota_ <= 0) return 0;
    int budget = 400;
    int did = 0;
    const Rational minus_one(-1);
    while (!rp_rows_.empty() && budget-- > 0 && rp_quota_-- > 0) {
      int ri = rp_rows_.back();
      rp_rows_.pop_back();
      rp_flag_[static_cast<size_t>(ri)] = 0;
      const Row& r = rows_[static_cast<size_t>(ri)];

      auto for_each_term = [&](auto&& f) {
        f(r.basic, minus_one);
        for (const auto& [j, a] : r.a) f(j, a);
      };

      // 0 = sum of terms; one pass collects both one-sided sums
      DRat sum_hi, sum_lo;
      int hi_inf = 0, lo_inf = 0;
      int hi_miss = -1, lo_miss = -1;
      for_each_term([&](int v, const Rational& c) {
        bool pos = c.sign() > 0;
        const Bound& bh = (pos ? upper_ : lower_)[static_cast<size_t>(v)];
        if (bh.active)
          sum_hi += bh.v * c;
        else {
          ++hi_inf;
          hi_miss = v;
        }
        const Bound& bl = (pos ? lower_ : upper_)[static_cast<size_t>(v)];
        if (bl.active)
          sum_lo += bl.v * c;
        else {
          ++lo_inf;
          lo_miss = v;
        }
      });
      if (hi_inf > 1 && lo_inf > 1) continue;

      bool conflicted = false;
      for_each_term([&](int v, const Rational& c) {
        if (conflicted) return;
        bool pos = c.sign() > 0;
        Rational neg_recip = -c.reciprocal();

        // hi side: sum over the others <= rest, so c*x_v >= -rest
        if (hi_inf == 0 || (hi_inf == 1 && hi_miss == v)) {
          const Bound& own = (pos ? upper_ : lower_)[static_cast<size_t>(v)];
          DRat rest = sum_hi;
          if (hi_inf == 0) rest = rest - own.v * c;
          DRat cand = rest * neg_recip;
          const Bound& cur = (pos ? lower_ : upper_)[static_cast<size_t>(v)];
          bool tighter = !cur.active || (pos ? cur.v < cand : cand < cur.v);
          if (tighter) {
            std::vector<Lit> expl;
            for_each_term([&](int u, const Rational& cu) {
              if (u == v) return;
              const Bound& bu = (cu.sign() > 0 ? upper_ : lower_)[static_cast<size_t>(u)];
              append_bound_reason(bu.rcode, expl);
            });
            int rc = decision_level() ? mk_expl(std::move(expl)) : -1;
            if (assert_bound(v, !pos, cand, rc)) {
              conflicted = true;
              return;
            }
            did = 1;
          }
        }

        // lo side: sum over the others >= rest, so c*x_v <= -rest
        if (lo_inf == 0 || (lo_inf == 1 && lo_miss == v)) {
          const Bound& own = (pos ? lower_ : upper_)[static_cast<size_t>(v)];
          DRat rest = sum_lo;
          if (lo_inf == 0) rest = rest - own.v * c;
          DRat cand = rest * neg_recip;
          const Bound& cur = (pos ? upper_ : lower_)[static_cast<size_t>(v)];
          bool tighter = !cur.active || (pos ? cand < cur.v : cur.v < cand);
          if (tighter) {
            std::vector<Lit> expl;
            for_each_term([&](int u, const Rational& cu) {
              if (u == v) return;
              const Bound& bu = (cu.sign() > 0 ? lower_ : upper_)[static_cast<size_t>(u)];
              append_bound_reason(bu.rcode, expl);
            });
            int rc = decision_level() ? mk_expl(std::move(expl)) : -1;
            if (assert_bound(v, pos, cand, rc)) {
              conflicted = true;
              return;
            }
            did = 1;
          }
        }
      });
      if (conflicted) return 2;
    }
    return did;
  }

  // ---- linearization and atoms -------------------------------------------
  LinExpr linearize(const Term& t) {
    LinExpr e;
    lin_acc(t, Rational(1), e);
    return e;
  }

  void lin_acc(const Term& t, const Rational& mult, LinExpr& e) {
    switch (t->kind) {
      case Kind::RatConst:
        e.k += mult * t->value;
        return;
      case Kind::RealVar: {
        int s = real_id(t->name);
        auto [it, fresh] = e.c.emplace(s, mult);
        if (!fresh) {
          it->second += mult;
          if (it->second.is_zero()) e.c.erase(it);
        }
        return;
      }
      case Kind::Add:
        for (const auto& a : t->args) lin_acc(a, mult, e);
        return;
      case Kind::ScalarMul:
        lin_acc(t->args[0], mult * t->value, e);
        return;
      default:
        throw BackendError("non-numeric term inside an arithmetic expression");
    }
  }

  // Simplex variable standing for a normalized linear form.
  int form_of(const std::vector<std::pair<int, mpz_class>>& coeffs) {
    if (coeffs.size() == 1 && coeffs[0].second == 1) return coeffs[0].first;
    std::ostringstream key;
    for (const auto& [v, c] : coeffs) key << v << ":" << c.get_str() << ",";
    auto it = form_map_.find(key.str());
    if (it != form_map_.end()) return it->second;
    int s = new_svar();
    form_map_.emplace(key.str(), s);
    Row r;
    r.basic = s;
    for (const auto& [v, c] : coeffs) {
      Rational rc{mpz_class(c), mpz_class(1)};
      if (basic_row_[v] >= 0) {
        const Row& src = rows_[static_cast<size_t>(basic_row_[v])];
        for (const auto& [j, cj] : src.a) {
          auto f = r.a.find(j);
          if (f == r.a.end()) {
            Rational nv = rc * cj;
            if (!nv.is_zero()) r.a.emplace(j, nv);
          } else {
            f->second += rc * cj;
            if (f->second.is_zero()) r.a.erase(f);
          }
        }
      } else {
        auto f = r.a.find(v);
        if (f == r.a.end())
          r.a.emplace(v, rc);
        else {
          f->second += rc;
          if (f->second.is_zero()) r.a.erase(f);
        }
      }
    }
    DRat b;
    for (const auto& [j, cj] : r.a) b += beta_[j] * cj;
    beta_[s] = b;
    int ri = static_cast<int>(rows_.size());
    rows_.push_back(std::move(r));
    basic_row_[s] = ri;
    for (const auto& [j, cj] : rows_[static_cast<size_t>(ri)].a) col_rows_[j].insert(ri);
    rp_flag_.push_back(0);
    mark_row(ri);
    return s;
  }

  // Literal for (e <= 0) or (e < 0).
  Lit intern_atom(const LinExpr& e, bool strict) {
    if (e.c.empty()) {
      bool truth = strict ? e.k.sign() < 0 : e.k.sign() <= 0;
      return mk_lit(0, !truth);
    }
    // integerize: multiply by lcm(denominators)/gcd(numerators), sign so the
    // lowest-id coefficient is positive
    mpz_class lcm(1);
    for (const auto& [v, c] : e.c)
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.den().get_mpz_t());
    mpz_class g(0);
    std::vector<std::pair<int, mpz_class>> ic;
    ic.reserve(e.c.size());
    for (const auto& [v, c] : e.c) {
      mpz_class n = c.num() * (lcm / c.den());
      ic.emplace_back(v, n);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    }
    bool flip = ic.front().second < 0;
    for (auto& [v, n] : ic) {
      n /= g;
      if (flip) n = -n;
    }
    // e <= 0  <=>  sum c x <= -k;  scaled by lcm/g (and maybe -1)
    Rational scale{lcm, g};
    Rational rhs = -e.k * scale;
    if (flip) rhs = -rhs;
    int f = form_of(ic);
    if (!flip) {
      int av = atom_var(f, rhs, strict);
      return mk_lit(av, false);
    }
    // flipped: constraint became (f >= rhs) or (f > rhs)
    int av = atom_var(f, rhs, !strict);
    return mk_lit(av, true);
  }

  int atom_var(int svar, const Rational& bound, bool strict) {
    auto key = std::make_pair(bound, strict);
    auto& m = atom_map_[static_cast<size_t>(svar)];
    auto it = m.find(key);
    if (it != m.end()) return it->second;
    int v = new_sat_var();
    atom_svar_[v] = svar;
    atom_bound_[v] = bound;
    atom_strict_[v] = strict ? 1 : 0;
    m.emplace(key, v);
    return v;
  }

  // ---- compilation -------------------------------------------------------
  Lit guard_lit() const {
    return act_stack_.empty() ? LIT_UNDEF : mk_lit(act_stack_.back(), true);
  }

  void add_guarded(std::vector<Lit> lits) {
    Lit g = guard_lit();
    if (g != LIT_UNDEF) lits.push_back(g);
    add_clause(std::move(lits), false);
  }

  bool literal_shape(const Term& t) const {
    switch (t->kind) {
      case Kind::BoolVar:
      case Kind::BoolConst:
      case Kind::Le:
      case Kind::Lt:
        return true;
      case Kind::Not:
        return literal_shape(t->args[0]);
      default:
        return false;
    }
  }

  Lit compile_bool(const Term& t) {
    switch (t->kind) {
      case Kind::BoolConst:
        return mk_lit(0, !t->bval);
      case Kind::BoolVar:
        return mk_lit(bool_id(t->name), false);
      case Kind::Not:
        return neg_lit(compile_bool(t->args[0]));
      case Kind::Le:
      case Kind::Lt: {
        LinExpr e = linearize(t->args[0]);
        LinExpr r = linearize(t->args[1]);
        for (const auto& [v, c] : r.c) {
          auto [it, fresh] = e.c.emplace(v, -c);
          if (!fresh) {
            it->second -= c;
            if (it->second.is_zero()) e.c.erase(it);
          }
        }
        e.k -= r.k;
        return intern_atom(e, t->kind == Kind::Lt);
      }
      case Kind::Eq: {
        Lit a = compile_bool(le(t->args[0], t->args[1]));
        Lit b = compile_bool(le(t->args[1], t->args[0]));
        return tseitin_and({a, b});
      }
      case Kind::And: {
        std::vector<Lit> ls;
        ls.reserve(t->args.size());
        for (const auto& a : t->args) ls.push_back(compile_bool(a));
        return tseitin_and(ls);
      }
      case Kind::Or: {
        std::vector<Lit> ls;
        ls.reserve(t->args.size());
        for (const auto& a : t->args) ls.push_back(compile_bool(a));
        return tseitin_or(ls);
      }
      case Kind::ExactlyOne:
        throw BackendError("exactly-one is only supported as a top-level conjunct");
      default:
        throw BackendError("arithmetic term used as a Boolean");
    }
  }

  // Definitional clauses are tautologies; they stay unguarded on purpose.
  Lit tseitin_and(const std::vector<Lit>& ls) {
    int g = new_sat_var();
    Lit lg = mk_lit(g, false);
    std::vector<Lit> big{lg};
    for (Lit l : ls) {
      add_clause({neg_lit(lg), l}, false);
      big.push_back(neg_lit(l));
    }
    add_clause(std::move(big), false);
    return lg;
  }

  Lit tseitin_or(const std::vector<Lit>& ls) {
    int g = new_sat_var();
    Lit lg = mk_lit(g, false);
    std::vector<Lit> big{neg_lit(lg)};
    for (Lit l : ls) {
      add_clause({lg, neg_lit(l)}, false);
      big.push_back(l);
    }
    add_clause(std::move(big), false);
    return lg;
  }

  void emit_exactly_one(const Term& t) {
    std::vector<Lit> ls;
    ls.reserve(t->args.size());
    for (const auto& a : t->args) ls.push_back(compile_bool(a));
    add_guarded(ls);  // at least one
    if (ls.size() <= 8) {
      for (size_t i = 0; i < ls.size(); ++i)
        for (size_t j = i + 1; j < ls.size(); ++j)
          add_guarded({neg_lit(ls[i]), neg_lit(ls[j])});
      return;
    }
    // sequential at-most-one
    std::vector<Lit> s(ls.size() - 1);
    for (auto& l : s) l = mk_lit(new_sat_var(), false);
    add_guarded({neg_lit(ls[0]), s[0]});
    for (size_t i = 1; i < ls.size(); ++i) {
      if (i < s.size()) {
        add_guarded({neg_lit(s[i - 1]), s[i]});
        add_guarded({neg_lit(ls[i]), s[i]});
      }
      add_guarded({neg_lit(ls[i]), neg_lit(s[i - 1])});
    }
  }

  void assert_top(const Term& t) {
    switch (t->kind) {
      case Kind::And:
        for (const auto& a : t->args) assert_top(a);
        return;
      case Kind::BoolConst:
        if (!t->bval) add_guarded({});
        return;
      case Kind::ExactlyOne:
        emit_exactly_one(t);
        return;
      case Kind::Eq: {
        add_guarded({compile_bool(le(t->args[0], t->args[1]))});
        add_guarded({compile_bool(le(t->args[1], t->args[0]))});
        return;
      }
      case Kind::Or: {
        bool flat = true;
        for (const auto& a : t->args)
          if (!literal_shape(a)) {
            flat = false;
            break;
          }
        if (flat) {
          std::vector<Lit> ls;
          ls.reserve(t->args.size());
          for (const auto& a : t->args) ls.push_back(compile_bool(a));
          add_guarded(std::move(ls));
          return;
        }
        add_guarded({compile_bool(t)});
        return;
      }
      case Kind::BoolVar:
      case Kind::Not:
      case Kind::Le:
      case Kind::Lt:
        add_guarded({compile_bool(t)});
        return;
      default:
        throw BackendError("asserted term is not Boolean");
    }
  }

  // ---- search ------------------------------------------------------------
  int propagate_() {  // 0 ok, 1 conflict (conflict_lits_ holds a false clause)
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];
      ++propagations_;
      if (atom_svar_[var_of(p)] >= 0 && theory_assert_lit(p)) return 1;
      auto& ws = watch_[p];
      size_t i = 0, j = 0;
      while (i < ws.size()) {
        Watcher w = ws[i++];
        if (lit_value(w.blocker) == 1) {
          ws[j++] = w;
          continue;
        }
        Clause& c = clauses_[static_cast<size_t>(w.cref)];
        if (c.deleted) continue;
        Lit false_lit = neg_lit(p);
        if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
        Lit first = c.lits[0];
        if (first != w.blocker && lit_value(first) == 1) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < c.lits.size(); ++k)
          if (lit_value(c.lits[k]) != -1) {
            std::swap(c.lits[1], c.lits[k]);
            watch_[neg_lit(c.lits[1])].push_back({w.cref, first});
            moved = true;
            break;
          }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (lit_value(first) == -1) {
          conflict_lits_ = c.lits;
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          qhead_ = trail_.size();
          return 1;
        }
        unchecked_enqueue(first, w.cref);
      }
      ws.resize(j);
    }
    return 0;
  }

  void analyze(std::vector<Lit> cvec, std::vector<Lit>& out, int& out_bt) {
    out.clear();
    out.push_back(0);  // slot for the asserting literal
    int pathC = 0;
    Lit p = LIT_UNDEF;
    int index = static_cast<int>(trail_.size()) - 1;
    std::vector<int> to_clear;

    for (;;) {
      for (size_t qi = (p == LIT_UNDEF) ? 0 : 1; qi < cvec.size(); ++qi) {
        Lit q = cvec[qi];
        int v = var_of(q);
        if (!seen_[v] && level_[v] > 0) {
          seen_[v] = 1;
          to_clear.push_back(v);
          bump_var(v);
          if (level_[v] >= decision_level())
            ++pathC;
          else
            out.push_back(q);
        }
      }
      while (!seen_[var_of(trail_[static_cast<size_t>(index)])]) --index;
      p = trail_[static_cast<size_t>(index)];
      --index;
      int pv = var_of(p);
      seen_[pv] = 0;
      --pathC;
      if (pathC <= 0) break;
      int cr = reason_[pv];
      if (cr <= -2) {  // lazy theory reason, already clause-shaped with p first
        cvec = theory_expl_[static_cast<size_t>(-2 - cr)];
        continue;
      }
      Clause& rc = clauses_[static_cast<size_t>(cr)];
      if (rc.learnt) bump_clause(rc);
      cvec = rc.lits;  // rc.lits[0] == p by the enqueue convention
    }
    out[0] = neg_lit(p);

    // cheap minimization: drop literals whose whole reason is already seen
    size_t keep = 1;
    for (size_t i2 = 1; i2 < out.size(); ++i2) {
      int v = var_of(out[i2]);
      int cr = reason_[v];
      bool redundant = false;
      if (cr >= 0) {
        redundant = true;
        const Clause& rc = clauses_[static_cast<size_t>(cr)];
        for (size_t k = 1; k < rc.lits.size(); ++k) {
          int v2 = var_of(rc.lits[k]);
          if (!seen_[v2] && level_[v2] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant) out[keep++] = out[i2];
    }
    out.resize(keep);

    if (out.size() == 1) {
      out_bt = 0;
    } else {
      size_t mi = 1;
      for (size_t i2 = 2; i2 < out.size(); ++i2)
        if (level_[var_of(out[i2])] > level_[var_of(out[mi])]) mi = i2;
      std::swap(out[1], out[mi]);
      out_bt = level_[var_of(out[1])];
    }
    for (int v : to_clear) seen_[v] = 0;
  }

  void reduce_db() {
    std::vector<int> learnts;
    for (size_t i = 0; i < clauses_.size(); ++i)
      if (clauses_[i].learnt && !clauses_[i].deleted) learnts.push_back(static_cast<int>(i));
    std::sort(learnts.begin(), learnts.end(),
              [&](int a, int b) { return clauses_[a].act < clauses_[b].act; });
    size_t target = learnts.size() / 2;
    for (size_t i = 0; i < target; ++i) {
      Clause& c = clauses_[static_cast<size_t>(learnts[i])];
      if (c.lits.size() <= 2) continue;
      int v0 = var_of(c.lits[0]);
      if (reason_[v0] == learnts[i] && assign_[v0] != 0) continue;  // locked
      c.deleted = true;
      detach(learnts[i]);
      --n_learnts_;
    }
    max_learnts_ *= 1.05;
  }

  void simplify_level0() {
    // full watch rebuild; called only with an empty trail prefix pending
    for (auto& ws : watch_) ws.clear();
    for (Lit l : trail_) reason_[var_of(l)] = -1;
    for (size_t i = 0; i < clauses_.size(); ++i) {
      Clause& c = clauses_[i];
      if (c.deleted) continue;
      bool sat = false;
      size_t keep = 0;
      for (size_t k = 0; k < c.lits.size(); ++k) {
        int val = lit_value(c.lits[k]);
        if (val == 1) {
          sat = true;
          break;
        }
        if (val == 0) c.lits[keep++] = c.lits[k];
      }
      if (sat) {
        c.deleted = true;
        if (c.learnt) --n_learnts_;
        continue;
      }
      c.lits.resize(keep);
      if (keep == 0) {
        ok_ = false;
        return;
      }
      if (keep == 1) {
        unchecked_enqueue(c.lits[0], -1);
        c.deleted = true;
        if (c.learnt) --n_learnts_;
        continue;
      }
      attach(static_cast<int>(i));
    }
    if (propagate_() != 0) {
      ok_ = false;
      return;
    }
    need_simplify_ = false;
  }

  void apply_hints() {
    for (const auto& [name, pp] : hints_) {
      auto it = bool_ids_.find(name);
      if (it == bool_ids_.end()) continue;
      int v = it->second;
      phase_[v] = pp.first ? 1 : 0;
      activity_[v] += var_inc_ * (1.0 + static_cast<double>(pp.second));
      heap_update(v);
    }
  }

  bool out_of_budget() const {
    return deadline_ && std::chrono::steady_clock::now() > *deadline_;
  }

  // Returns +1 Sat, -1 Unsat, 0 restart, 2 budget exhausted.
  int search(int nof_conflicts) {
    int conflictC = 0;
    std::vector<Lit> learnt;
    for (;;) {
      bool have_conflict = propagate_() != 0;
      if (!have_conflict && theory_dirty_ && ++fixpoints_ >= eager_cadence_) {
        // incremental feasibility check at the propagation fixpoint; catching
        // row infeasibility here (not at full assignments) keeps the learned
        // explanations near the root of the search
        fixpoints_ = 0;
        theory_dirty_ = false;
        if (!simplex_check(conflict_lits_)) {
          have_conflict = true;
        } else {
          int rp = row_propagate();
          if (rp == 2) {
            have_conflict = true;
          } else if (rp == 1) {
            // new bounds or enqueued atoms: propagate them, then re-check
            fixpoints_ = eager_cadence_;
            continue;
          }
        }
      }
      if (!have_conflict) {
        // re-establish scope assumptions, then decide
        Lit next = LIT_UNDEF;
        while (decision_level() < static_cast<int>(act_stack_.size())) {
          Lit p = mk_lit(act_stack_[static_cast<size_t>(decision_level())], false);
          int val = lit_value(p);
          if (val == 1) {
            new_decision_level();
          } else if (val == -1) {
            return -1;  // a disabled-scope unit contradicts this scope
          } else {
            next = p;
            break;
          }
        }
        if (next == LIT_UNDEF) {
          if (conflictC >= nof_conflicts) {
            cancel_until(0);
            return 0;
          }
          if (n_learnts_ >= static_cast<int>(max_learnts_)) reduce_db();
          while (!heap_.empty()) {
            int v = heap_[0];
            if (assign_[v] == 0) break;
            heap_pop();
          }
          if (heap_.empty()) {
            // complete Boolean assignment: ask the simplex
            if (simplex_check(conflict_lits_)) return 1;
            have_conflict = true;
          } else {
            ++decisions_;
            if ((decisions_ & 2047) == 0 && out_of_budget()) return 2;
            int v = heap_pop();
            next = mk_lit(v, phase_[v] == 0);
          }
        }
        if (!have_conflict) {
          new_decision_level();
          unchecked_enqueue(next, -1);
          continue;
        }
      }

      // conflict handling (from propagation or from the theory)
      ++conflicts_;
      ++conflictC;
      if ((conflicts_ & 255) == 0 && out_of_budget()) return 2;
      int maxl = 0;
      for (Lit q : conflict_lits_) maxl = std::max(maxl, level_[var_of(q)]);
      if (maxl == 0) {
        ok_ = false;
        return -1;
      }
      cancel_until(maxl);
      int bt = 0;
      analyze(conflict_lits_, learnt, bt);
      cancel_until(bt);
      if (learnt.size() == 1) {
        unchecked_enqueue(learnt[0], -1);
      } else {
        int cref = add_clause(learnt, true);
        unchecked_enqueue(learnt[0], cref);
      }
      var_inc_ /= 0.95;
      cla_inc_ /= 0.999;
    }
  }

  // ---- models --------------------------------------------------------------
  void build_model(Model& m) {
    // concrete delta: small enough for every bound that separates on k
    Rational delta(1);
    int n = static_cast<int>(beta_.size());
    for (int v = 0; v < n; ++v) {
      const DRat& b = beta_[v];
      if (lower_[v].active) {
        const DRat& lo = lower_[v].v;
        if (lo.k > b.k && b.c > lo.c) delta = min(delta, (b.c - lo.c) / (lo.k - b.k));
      }
      if (upper_[v].active) {
        const DRat& up = upper_[v].v;
        if (b.k > up.k && up.c > b.c) delta = min(delta, (up.c - b.c) / (b.k - up.k));
      }
    }
    delta = delta / Rational(2);
    for (const auto& [name, sv] : real_ids_)
      m.reals[name] = beta_[sv].c + beta_[sv].k * delta;
    for (const auto& [name, bv] : bool_ids_) m.bools[name] = assign_[bv] == 1;
  }
};

}  // namespace

std::unique_ptr<SolverSession> make_internal_session() {
  return std::make_unique<InternalLraSession>();
}

}  // namespace mapfr::smt
