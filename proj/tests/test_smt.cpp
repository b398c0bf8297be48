#include <doctest.h>

#include <cstdlib>
#include <random>
#include <sstream>
#include <vector>

#include "mapfr/errors.hpp"
#include "mapfr/smt/session.hpp"

using mapfr::BackendError;
using mapfr::MalformedModel;
using mapfr::Rational;
using mapfr::ScopeUnderflow;
using namespace mapfr::smt;

namespace {

Term R(long n) { return rat(n); }
Term Q(long p, long q) { return rat(Rational(p, q)); }

CheckResult check(SolverSession& s) { return s.check_sat().status; }

// Pigeonhole: p pigeons into h holes, one variable per (pigeon, hole).
void assert_pigeonhole(SolverSession& s, int pigeons, int holes) {
  auto pv = [](int i, int j) {
    return bool_var("p" + std::to_string(i) + "_" + std::to_string(j));
  };
  for (int i = 0; i < pigeons; ++i) {
    std::vector<Term> row;
    for (int j = 0; j < holes; ++j) row.push_back(pv(i, j));
    s.assert_term(or_(row));
  }
  for (int j = 0; j < holes; ++j)
    for (int i = 0; i < pigeons; ++i)
      for (int k = i + 1; k < pigeons; ++k)
        s.assert_term(or_(not_(pv(i, j)), not_(pv(k, j))));
}

}  // namespace

TEST_CASE("smt: trivial checks") {
  auto s = make_session("internal");
  CHECK(std::string(s->backend_name()) == "internal");
  CHECK(s->check_sat().status == CheckResult::Sat);  // empty stack

  s->declare_real("free");
  Term x = real_var("x");
  s->assert_term(ge(x, R(0)));
  auto out = s->check_sat();
  REQUIRE(out.status == CheckResult::Sat);
  CHECK(out.model.real("x") >= Rational(0));
  CHECK_NOTHROW(out.model.real("free"));  // full assignment, even unconstrained
  CHECK_THROWS_AS(out.model.real("nope"), MalformedModel);
  CHECK_THROWS_AS(out.model.boolean("nope"), MalformedModel);
}

TEST_CASE("smt: bound conflicts and point solutions") {
  Term x = real_var("x");
  {
    auto s = make_session("internal");
    s->assert_term(ge(x, R(1)));
    s->assert_term(le(x, R(0)));
    CHECK(check(*s) == CheckResult::Unsat);
  }
  {
    auto s = make_session("internal");
    s->assert_term(lt(x, R(1)));
    s->assert_term(gt(x, R(1)));
    CHECK(check(*s) == CheckResult::Unsat);
  }
  {
    auto s = make_session("internal");
    s->assert_term(lt(x, R(1)));
    s->assert_term(ge(x, R(1)));
    CHECK(check(*s) == CheckResult::Unsat);
  }
  {
    auto s = make_session("internal");
    s->assert_term(le(x, R(1)));
    s->assert_term(ge(x, R(1)));
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    CHECK(out.model.real("x") == Rational(1));
  }
}

TEST_CASE("smt: strict interiors get exact rational witnesses") {
  Term x = real_var("x");
  {
    auto s = make_session("internal");
    s->assert_term(gt(x, R(0)));
    s->assert_term(lt(x, R(1)));
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    Rational v = out.model.real("x");
    CHECK(v > Rational(0));
    CHECK(v < Rational(1));
  }
  {
    // very thin strict window
    auto s = make_session("internal");
    s->assert_term(gt(x, Q(1, 3)));
    s->assert_term(lt(x, Q(1000001, 3000000)));
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    Rational v = out.model.real("x");
    CHECK(v > Rational(1, 3));
    CHECK(v < Rational(1000001, 3000000));
  }
}

TEST_CASE("smt: equalities and linear arithmetic") {
  Term x = real_var("x");
  Term y = real_var("y");
  {
    auto s = make_session("internal");
    s->assert_term(eq(x, R(3)));
    s->assert_term(eq(y, add(x, R(1))));
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    CHECK(out.model.real("x") == Rational(3));
    CHECK(out.model.real("y") == Rational(4));
  }
  {
    // x + 2y = 7, x - y = 1  =>  x = 3, y = 2 (unique)
    auto s = make_session("internal");
    s->assert_term(eq(add(x, mul(Rational(2), y)), R(7)));
    s->assert_term(eq(sub(x, y), R(1)));
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    CHECK(out.model.real("x") == Rational(3));
    CHECK(out.model.real("y") == Rational(2));
  }
  {
    // fractional coefficients: (2/3) x <= 1 and x >= 3/2 pin x = 3/2
    auto s = make_session("internal");
    s->assert_term(le(mul(Rational(2, 3), x), R(1)));
    s->assert_term(ge(x, Q(3, 2)));
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    CHECK(out.model.real("x") == Rational(3, 2));
  }
  {
    // x >= 1, y >= 1, x + y <= 1 infeasible through a shared slack
    auto s = make_session("internal");
    s->assert_term(ge(x, R(1)));
    s->assert_term(ge(y, R(1)));
    s->assert_term(le(add(x, y), R(1)));
    CHECK(check(*s) == CheckResult::Unsat);
  }
  {
    // same linear form under two names must alias to one theory variable
    auto s = make_session("internal");
    s->assert_term(le(add(x, y), R(5)));
    s->assert_term(ge(add(y, x), R(3)));
    s->assert_term(eq(sub(x, y), R(0)));
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    Rational sum = out.model.real("x") + out.model.real("y");
    CHECK(sum >= Rational(3));
    CHECK(sum <= Rational(5));
    CHECK(out.model.real("x") == out.model.real("y"));
  }
}

TEST_CASE("smt: unit-triangular systems solve exactly") {
  // x_i + sum_{j<i} a_ij x_j = c_i always has a unique rational solution;
  // the model must reproduce it literally.
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> val(-4, 4);
  const int n = 5;
  for (int round = 0; round < 20; ++round) {
    std::vector<Rational> sol(n);
    for (auto& v : sol) v = Rational(val(rng));
    std::vector<Term> xs;
    for (int i = 0; i < n; ++i)
      xs.push_back(real_var("t" + std::to_string(round) + "_" + std::to_string(i)));

    auto s = make_session("internal");
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (int oi : order) {
      std::vector<Term> terms{xs[oi]};
      Rational rhs = sol[oi];
      for (int j = 0; j < oi; ++j) {
        int a = coef(rng);
        if (a == 0) continue;
        terms.push_back(mul(Rational(a), xs[j]));
        rhs += Rational(a) * sol[j];
      }
      s->assert_term(eq(add(terms), rat(rhs)));
    }
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    for (int i = 0; i < n; ++i)
      CHECK(out.model.real("t" + std::to_string(round) + "_" + std::to_string(i)) == sol[i]);
  }
}

TEST_CASE("smt: disjunctions over atoms") {
  Term x = real_var("x");
  {
    auto s = make_session("internal");
    s->assert_term(or_(le(x, R(0)), ge(x, R(5))));
    s->assert_term(ge(x, R(1)));
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    CHECK(out.model.real("x") >= Rational(5));
  }
  {
    // implication as a clause: b -> x >= 5
    auto s = make_session("internal");
    Term b = bool_var("b");
    s->assert_term(or_(not_(b), ge(x, R(5))));
    s->assert_term(b);
    s->assert_term(le(x, R(4)));
    CHECK(check(*s) == CheckResult::Unsat);
  }
  {
    // equality nested under a disjunction goes through tseitin
    auto s = make_session("internal");
    s->assert_term(or_(eq(x, R(2)), eq(x, R(5))));
    s->assert_term(ge(x, R(3)));
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    CHECK(out.model.real("x") == Rational(5));
  }
  {
    auto s = make_session("internal");
    Term y = real_var("y");
    s->assert_term(and_(ge(x, R(0)), or_(and_(ge(y, R(2)), le(y, R(3))), le(x, R(-1)))));
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    CHECK(out.model.real("x") >= Rational(0));
    CHECK(out.model.real("y") >= Rational(2));
    CHECK(out.model.real("y") <= Rational(3));
  }
}

TEST_CASE("smt: exactly-one") {
  {
    auto s = make_session("internal");
    s->assert_term(exactly_one({bool_var("b1"), bool_var("b2")}));
    s->assert_term(bool_var("b1"));
    s->assert_term(bool_var("b2"));
    CHECK(check(*s) == CheckResult::Unsat);
  }
  {
    // wide instance exercises the sequential at-most-one ladder
    std::vector<Term> sel;
    for (int i = 0; i < 12; ++i) sel.push_back(bool_var("s" + std::to_string(i)));
    auto s = make_session("internal");
    s->assert_term(exactly_one(sel));
    s->assert_term(bool_var("s7"));
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    int trues = 0;
    for (int i = 0; i < 12; ++i)
      if (out.model.boolean("s" + std::to_string(i))) ++trues;
    CHECK(trues == 1);
    CHECK(out.model.boolean("s7"));

    auto s2 = make_session("internal");
    s2->assert_term(exactly_one(sel));
    s2->assert_term(bool_var("s3"));
    s2->assert_term(bool_var("s7"));
    CHECK(check(*s2) == CheckResult::Unsat);
  }
  CHECK_THROWS_AS(exactly_one({}), BackendError);
  {
    // only supported as a top-level conjunct
    auto s = make_session("internal");
    CHECK_THROWS_AS(
        s->assert_term(or_(exactly_one({bool_var("a"), bool_var("b")}), bool_var("c"))),
        BackendError);
  }
}

TEST_CASE("smt: strict order chains") {
  auto mkx = [](int i) { return real_var("c" + std::to_string(i)); };
  {
    auto s = make_session("internal");
    for (int i = 0; i < 7; ++i) s->assert_term(lt(mkx(i), mkx(i + 1)));
    s->assert_term(lt(mkx(7), mkx(0)));  // closes the cycle
    CHECK(check(*s) == CheckResult::Unsat);
  }
  {
    auto s = make_session("internal");
    for (int i = 0; i < 7; ++i) s->assert_term(lt(mkx(i), mkx(i + 1)));
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    for (int i = 0; i < 7; ++i)
      CHECK(out.model.real("c" + std::to_string(i)) <
            out.model.real("c" + std::to_string(i + 1)));
  }
}

TEST_CASE("smt: scopes") {
  auto s = make_session("internal");
  CHECK_THROWS_AS(s->pop(), ScopeUnderflow);
  CHECK(s->scope_depth() == 0);

  Term x = real_var("x");
  s->assert_term(ge(x, R(3)));
  CHECK(check(*s) == CheckResult::Sat);

  s->push();
  CHECK(s->scope_depth() == 1);
  s->assert_term(le(x, R(2)));
  CHECK(check(*s) == CheckResult::Unsat);
  s->pop();
  CHECK(s->scope_depth() == 0);
  CHECK(check(*s) == CheckResult::Sat);

  // a popped contradiction must not poison a fresh identical scope
  s->push();
  s->assert_term(le(x, R(2)));
  CHECK(check(*s) == CheckResult::Unsat);
  s->pop();

  s->push();
  s->assert_term(le(x, R(10)));
  auto out = s->check_sat();
  REQUIRE(out.status == CheckResult::Sat);
  CHECK(out.model.real("x") >= Rational(3));
  CHECK(out.model.real("x") <= Rational(10));

  // nested scope kills, inner pop revives
  s->push();
  CHECK(s->scope_depth() == 2);
  s->assert_term(ge(x, R(20)));
  CHECK(check(*s) == CheckResult::Unsat);
  s->pop();
  CHECK(check(*s) == CheckResult::Sat);
  s->push();
  s->assert_term(ge(x, R(4)));
  out = s->check_sat();
  REQUIRE(out.status == CheckResult::Sat);
  CHECK(out.model.real("x") >= Rational(4));
  CHECK(out.model.real("x") <= Rational(10));
  s->pop();
  s->pop();
  CHECK(s->scope_depth() == 0);
  CHECK(check(*s) == CheckResult::Sat);
  CHECK_THROWS_AS(s->pop(), ScopeUnderflow);
}

TEST_CASE("smt: deep push pop cycles keep state consistent") {
  auto s = make_session("internal");
  Term x = real_var("x");
  s->assert_term(ge(x, R(0)));
  for (int i = 1; i <= 10; ++i) {
    s->push();
    s->assert_term(le(x, R(100 - i)));
    s->assert_term(ge(x, R(i)));
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    CHECK(out.model.real("x") >= Rational(i));
    CHECK(out.model.real("x") <= Rational(100 - i));
  }
  CHECK(s->scope_depth() == 10);
  for (int i = 0; i < 10; ++i) s->pop();
  CHECK(s->scope_depth() == 0);
  auto out = s->check_sat();
  REQUIRE(out.status == CheckResult::Sat);
}

namespace {

// Random formulas that are satisfiable by construction: every clause gets at
// least one literal chosen to agree with a hidden target assignment.
struct RandomFormula {
  std::vector<Term> asserted;
  bool expect_sat = true;
};

RandomFormula random_formula(std::mt19937_64& rng, bool inject_unsat) {
  std::uniform_int_distribution<int> pick_bool(0, 3), pick_real(0, 2);
  std::uniform_int_distribution<int> coin(0, 1), coefd(1, 3), offd(0, 3);
  std::uniform_int_distribution<int> vald(-5, 5), lit_count(0, 2);

  bool tb[4];
  Rational tr[3];
  for (auto& b : tb) b = coin(rng) == 1;
  for (auto& r : tr) r = Rational(vald(rng));

  auto bvar = [](int i) { return bool_var("rb" + std::to_string(i)); };
  auto rvar = [](int i) { return real_var("rx" + std::to_string(i)); };

  auto random_expr = [&](Rational& value_out) {
    int a = pick_real(rng);
    int ca = coefd(rng) * (coin(rng) ? 1 : -1);
    std::vector<Term> ts{mul(Rational(ca), rvar(a))};
    value_out = Rational(ca) * tr[a];
    if (coin(rng)) {
      int b = pick_real(rng);
      if (b != a) {
        int cb = coefd(rng) * (coin(rng) ? 1 : -1);
        ts.push_back(mul(Rational(cb), rvar(b)));
        value_out += Rational(cb) * tr[b];
      }
    }
    return add(ts);
  };

  auto true_literal = [&]() -> Term {
    if (coin(rng)) {
      int i = pick_bool(rng);
      return tb[i] ? bvar(i) : not_(bvar(i));
    }
    Rational v;
    Term e = random_expr(v);
    bool strict = coin(rng);
    int off = offd(rng) + (strict ? 1 : 0);
    if (coin(rng)) return strict ? lt(e, rat(v + Rational(off))) : le(e, rat(v + Rational(off)));
    return strict ? gt(e, rat(v - Rational(off))) : ge(e, rat(v - Rational(off)));
  };

  auto any_literal = [&]() -> Term {
    if (coin(rng)) {
      int i = pick_bool(rng);
      return coin(rng) ? Term(bvar(i)) : not_(bvar(i));
    }
    Rational v;
    Term e = random_expr(v);
    Term bound = rat(Rational(vald(rng)));
    switch (offd(rng)) {
      case 0: return le(e, bound);
      case 1: return lt(e, bound);
      case 2: return ge(e, bound);
      default: return gt(e, bound);
    }
  };

  RandomFormula f;
  for (int c = 0; c < 12; ++c) {
    std::vector<Term> lits{true_literal()};
    int extra = lit_count(rng);
    for (int k = 0; k < extra; ++k) lits.push_back(any_literal());
    std::shuffle(lits.begin(), lits.end(), rng);
    f.asserted.push_back(or_(lits));
  }
  f.asserted.push_back(exactly_one({bvar(4), bvar(5), bvar(6)}));
  if (inject_unsat) {
    Rational v;
    Term e = random_expr(v);
    f.asserted.push_back(le(e, R(3)));
    f.asserted.push_back(gt(e, R(3)));
    f.expect_sat = false;
  }
  return f;
}

}  // namespace

TEST_CASE("smt: random satisfiable formulas with model re-evaluation") {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 40; ++round) {
    RandomFormula f = random_formula(rng, false);
    auto s = make_session("internal");
    for (const auto& t : f.asserted) s->assert_term(t);
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    for (const auto& t : f.asserted) CHECK(out.model.eval_bool(t));
  }
}

TEST_CASE("smt: injected contradictions are unsat") {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 20; ++round) {
    RandomFormula f = random_formula(rng, true);
    auto s = make_session("internal");
    for (const auto& t : f.asserted) s->assert_term(t);
    CHECK(check(*s) == CheckResult::Unsat);
  }
}

TEST_CASE("smt: branching hints") {
  {
    // a free registered boolean follows the hinted phase
    auto s = make_session("internal");
    s->declare_bool("h");
    s->assert_term(ge(real_var("x"), R(0)));
    s->hint_branching(bool_var("h"), 1);
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    CHECK(out.model.boolean("h"));
  }
  {
    // duplicates keep the latest
    auto s = make_session("internal");
    s->declare_bool("h");
    s->assert_term(ge(real_var("x"), R(0)));
    s->hint_branching(bool_var("h"), 1);
    s->hint_branching(not_(bool_var("h")), 2);
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    CHECK_FALSE(out.model.boolean("h"));
  }
  {
    // unregistered names warn and are ignored; malformed literals throw
    auto s = make_session("internal");
    s->assert_term(ge(real_var("x"), R(0)));
    CHECK_NOTHROW(s->hint_branching(bool_var("never_declared"), 3));
    CHECK_NOTHROW(s->hint_branching(bool_var("never_declared"), 3));
    CHECK_THROWS_AS(s->hint_branching(le(real_var("x"), R(1)), 1), BackendError);
    CHECK(check(*s) == CheckResult::Sat);
  }
}

TEST_CASE("smt: hints do not change verdicts") {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> coin(0, 1), prio(1, 5);
  for (int round = 0; round < 15; ++round) {
    RandomFormula f = random_formula(rng, round % 2 == 1);
    auto plain = make_session("internal");
    auto hinted = make_session("internal");
    for (const auto& t : f.asserted) {
      plain->assert_term(t);
      hinted->assert_term(t);
    }
    for (int i = 0; i < 7; ++i) {
      Term b = bool_var("rb" + std::to_string(i));
      hinted->hint_branching(coin(rng) ? b : not_(b), prio(rng));
    }
    auto a = plain->check_sat();
    auto b = hinted->check_sat();
    CHECK(a.status == b.status);
    CHECK(a.status == (f.expect_sat ? CheckResult::Sat : CheckResult::Unsat));
    if (b.status == CheckResult::Sat)
      for (const auto& t : f.asserted) CHECK(b.model.eval_bool(t));
  }
}

TEST_CASE("smt: pigeonhole exercises the sat core") {
  {
    auto s = make_session("internal");
    assert_pigeonhole(*s, 6, 5);
    CHECK(check(*s) == CheckResult::Unsat);
  }
  {
    auto s = make_session("internal");
    assert_pigeonhole(*s, 5, 5);
    auto out = s->check_sat();
    REQUIRE(out.status == CheckResult::Sat);
    // verify it is a permutation
    for (int j = 0; j < 5; ++j) {
      int in_hole = 0;
      for (int i = 0; i < 5; ++i)
        if (out.model.boolean("p" + std::to_string(i) + "_" + std::to_string(j))) ++in_hole;
      CHECK(in_hole == 1);
    }
  }
}

TEST_CASE("smt: budget exhaustion reports unknown") {
  auto s = make_session("internal");
  assert_pigeonhole(*s, 11, 10);
  auto out = s->check_sat(std::chrono::milliseconds(30));
  CHECK(out.status == CheckResult::Unknown);
  // the session stays usable after an unknown
  auto s2 = make_session("internal");
  s2->assert_term(ge(real_var("x"), R(0)));
  CHECK(s2->check_sat(std::chrono::milliseconds(10000)).status == CheckResult::Sat);
}

TEST_CASE("smt: dump and backend dispatch") {
  auto s = make_session();
  CHECK(std::string(s->backend_name()) == "internal");
  s->assert_term(ge(real_var("x"), R(0)));
  s->push();
  s->assert_term(le(real_var("x"), Q(1, 2)));
  std::ostringstream os;
  s->dump_assertions(os);
  std::string text = os.str();
  CHECK(text.find("(set-logic QF_LRA)") != std::string::npos);
  CHECK(text.find("(declare-fun x () Real)") != std::string::npos);
  CHECK(text.find("(push 1)") != std::string::npos);
  CHECK(text.find("(assert") != std::string::npos);
  CHECK(text.find("(check-sat)") != std::string::npos);

  CHECK_THROWS_AS(make_session("no-such-backend"), BackendError);
  setenv("MAPFR_SMT_BACKEND", "no-such-backend", 1);
  CHECK_THROWS_AS(make_session(), BackendError);
  setenv("MAPFR_SMT_BACKEND", "internal", 1);
  CHECK(std::string(make_session()->backend_name()) == "internal");
  unsetenv("MAPFR_SMT_BACKEND");
}

TEST_CASE("smt: type errors surface as backend errors") {
  auto s = make_session("internal");
  CHECK_THROWS_AS(s->assert_term(add(real_var("x"), R(1))), BackendError);
  CHECK_THROWS_AS(s->assert_term(le(bool_var("b"), R(1))), BackendError);
  // a name cannot be both sorts
  s->declare_real("dual");
  CHECK_THROWS_AS(s->declare_bool("dual"), BackendError);
}
