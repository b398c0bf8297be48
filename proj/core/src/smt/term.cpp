#include "mapfr/smt/term.hpp"

#include <sstream>

#include "mapfr/errors.hpp"
#include "mapfr/smt/session.hpp"

namespace mapfr::smt {

namespace {

std::shared_ptr<TermNode> node(Kind k) {
  auto n = std::make_shared<TermNode>();
  n->kind = k;
  return n;
}

std::shared_ptr<TermNode> node(Kind k, std::vector<Term> args) {
  auto n = node(k);
  for (const auto& a : args)
    if (!a) throw BackendError("null term argument");
  n->args = std::move(args);
  return n;
}

}  // namespace

Term rat(const Rational& v) {
  auto n = std::make_shared<TermNode>();
  n->kind = Kind::RatConst;
  n->value = v;
  return n;
}

Term rat(long v) { return rat(Rational(v)); }

Term btrue() {
  static const Term t = [] {
    auto n = std::make_shared<TermNode>();
    n->kind = Kind::BoolConst;
    n->bval = true;
    return Term(n);
  }();
  return t;
}

Term bfalse() {
  static const Term t = [] {
    auto n = std::make_shared<TermNode>();
    n->kind = Kind::BoolConst;
    n->bval = false;
    return Term(n);
  }();
  return t;
}

Term real_var(const std::string& name) {
  if (name.empty()) throw BackendError("empty variable name");
  auto n = node(Kind::RealVar);
  n->name = name;
  return n;
}

Term bool_var(const std::string& name) {
  if (name.empty()) throw BackendError("empty variable name");
  auto n = node(Kind::BoolVar);
  n->name = name;
  return n;
}

Term add(std::vector<Term> args) {
  if (args.empty()) return rat(0);
  if (args.size() == 1) return args[0];
  return node(Kind::Add, std::move(args));
}

Term add(const Term& a, const Term& b) { return add(std::vector<Term>{a, b}); }

Term mul(const Rational& c, const Term& a) {
  auto n = node(Kind::ScalarMul, {a});
  n->value = c;
  return n;
}

Term neg(const Term& a) { return mul(Rational(-1), a); }

Term sub(const Term& a, const Term& b) { return add(a, neg(b)); }

Term eq(const Term& a, const Term& b) { return node(Kind::Eq, {a, b}); }
Term le(const Term& a, const Term& b) { return node(Kind::Le, {a, b}); }
Term lt(const Term& a, const Term& b) { return node(Kind::Lt, {a, b}); }
Term ge(const Term& a, const Term& b) { return le(b, a); }
Term gt(const Term& a, const Term& b) { return lt(b, a); }

Term not_(const Term& a) {
  if (a && a->kind == Kind::Not) return a->args[0];
  return node(Kind::Not, {a});
}

Term and_(std::vector<Term> args) {
  if (args.empty()) return btrue();
  if (args.size() == 1) return args[0];
  return node(Kind::And, std::move(args));
}

Term and_(const Term& a, const Term& b) { return and_(std::vector<Term>{a, b}); }

Term or_(std::vector<Term> args) {
  if (args.empty()) return bfalse();
  if (args.size() == 1) return args[0];
  return node(Kind::Or, std::move(args));
}

Term or_(const Term& a, const Term& b) { return or_(std::vector<Term>{a, b}); }

Term exactly_one(std::vector<Term> vars) {
  if (vars.empty()) throw BackendError("exactly_one over nothing");
  return node(Kind::ExactlyOne, std::move(vars));
}

bool is_numeric_kind(Kind k) {
  switch (k) {
    case Kind::RatConst:
    case Kind::RealVar:
    case Kind::Add:
    case Kind::ScalarMul:
      return true;
    default:
      return false;
  }
}

namespace {

void render(const Term& t, std::ostream& os) {
  switch (t->kind) {
    case Kind::RatConst: {
      const Rational& v = t->value;
      bool neg = v.sign() < 0;
      Rational a = v.abs();
      if (neg) os << "(- ";
      if (a.is_integer())
        os << a.num().get_str() << ".0";
      else
        os << "(/ " << a.num().get_str() << ".0 " << a.den().get_str() << ".0)";
      if (neg) os << ")";
      return;
    }
    case Kind::BoolConst:
      os << (t->bval ? "true" : "false");
      return;
    case Kind::RealVar:
    case Kind::BoolVar:
      os << t->name;
      return;
    case Kind::Add:
      os << "(+";
      for (const auto& a : t->args) { os << " "; render(a, os); }
      os << ")";
      return;
    case Kind::ScalarMul:
      os << "(* ";
      render(rat(t->value), os);
      os << " ";
      render(t->args[0], os);
      os << ")";
      return;
    case Kind::Eq: case Kind::Le: case Kind::Lt: {
      os << (t->kind == Kind::Eq ? "(= " : t->kind == Kind::Le ? "(<= " : "(< ");
      render(t->args[0], os);
      os << " ";
      render(t->args[1], os);
      os << ")";
      return;
    }
    case Kind::Not:
      os << "(not ";
      render(t->args[0], os);
      os << ")";
      return;
    case Kind::And:
    case Kind::Or:
      os << (t->kind == Kind::And ? "(and" : "(or");
      for (const auto& a : t->args) { os << " "; render(a, os); }
      os << ")";
      return;
    case Kind::ExactlyOne: {
      // ((_ pbeq 1 1 ... 1) b1 ... bn) is not universal; spell it out
      os << "(and (or";
      for (const auto& a : t->args) { os << " "; render(a, os); }
      os << ")";
      for (size_t i = 0; i < t->args.size(); ++i)
        for (size_t j = i + 1; j < t->args.size(); ++j) {
          os << " (or (not ";
          render(t->args[i], os);
          os << ") (not ";
          render(t->args[j], os);
          os << "))";
        }
      os << ")";
      return;
    }
  }
}

}  // namespace

std::string to_smt2(const Term& t) {
  std::ostringstream os;
  render(t, os);
  return os.str();
}

const Rational& Model::real(const std::string& name) const {
  auto it = reals.find(name);
  if (it == reals.end()) throw MalformedModel("model has no real '" + name + "'");
  return it->second;
}

bool Model::boolean(const std::string& name) const {
  auto it = bools.find(name);
  if (it == bools.end()) throw MalformedModel("model has no boolean '" + name + "'");
  return it->second;
}

Rational Model::eval_real(const Term& t) const {
  switch (t->kind) {
    case Kind::RatConst:
      return t->value;
    case Kind::RealVar:
      return real(t->name);
    case Kind::Add: {
      Rational acc(0);
      for (const auto& a : t->args) acc += eval_real(a);
      return acc;
    }
    case Kind::ScalarMul:
      return t->value * eval_real(t->args[0]);
    default:
      throw MalformedModel("eval_real on a non-numeric term");
  }
}

bool Model::eval_bool(const Term& t) const {
  switch (t->kind) {
    case Kind::BoolConst:
      return t->bval;
    case Kind::BoolVar:
      return boolean(t->name);
    case Kind::Eq:
      return eval_real(t->args[0]) == eval_real(t->args[1]);
    case Kind::Le:
      return eval_real(t->args[0]) <= eval_real(t->args[1]);
    case Kind::Lt:
      return eval_real(t->args[0]) < eval_real(t->args[1]);
    case Kind::Not:
      return !eval_bool(t->args[0]);
    case Kind::And:
      for (const auto& a : t->args)
        if (!eval_bool(a)) return false;
      return true;
    case Kind::Or:
      for (const auto& a : t->args)
        if (eval_bool(a)) return true;
      return false;
    case Kind::ExactlyOne: {
      int n = 0;
      for (const auto& a : t->args) n += eval_bool(a) ? 1 : 0;
      return n == 1;
    }
    default:
      throw MalformedModel("eval_bool on a non-boolean term");
  }
}

}  // namespace mapfr::smt
