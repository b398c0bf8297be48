#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mapfr/rational.hpp"

namespace mapfr::smt {

// Expression tree for QF_LRA: rational constants, named real and Boolean
// variables, linear arithmetic, the three predicates, the connectives, and a
// pseudo-Boolean exactly-one helper. Nodes are immutable and shared.
enum class Kind {
  RatConst,
  BoolConst,
  RealVar,
  BoolVar,
  Add,        // n-ary sum
  ScalarMul,  // value * args[0]
  Eq,
  Le,
  Lt,
  Not,
  And,
  Or,
  ExactlyOne,
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  Kind kind;
  Rational value;    // RatConst payload, ScalarMul coefficient
  bool bval = false; // BoolConst payload
  std::string name;  // RealVar / BoolVar
  std::vector<Term> args;
};

Term rat(const Rational& v);
Term rat(long v);
Term btrue();
Term bfalse();
Term real_var(const std::string& name);
Term bool_var(const std::string& name);

Term add(std::vector<Term> args);
Term add(const Term& a, const Term& b);
Term sub(const Term& a, const Term& b);
Term neg(const Term& a);
Term mul(const Rational& c, const Term& a);

Term eq(const Term& a, const Term& b);
Term le(const Term& a, const Term& b);
Term lt(const Term& a, const Term& b);
Term ge(const Term& a, const Term& b);  // sugar: le swapped
Term gt(const Term& a, const Term& b);  // sugar: lt swapped

Term not_(const Term& a);
Term and_(std::vector<Term> args);
Term and_(const Term& a, const Term& b);
Term or_(std::vector<Term> args);
Term or_(const Term& a, const Term& b);
Term exactly_one(std::vector<Term> vars);

bool is_numeric_kind(Kind k);

// SMT-LIB style rendering of one term (debug dumps).
std::string to_smt2(const Term& t);

}  // namespace mapfr::smt
