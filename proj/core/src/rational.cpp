#include "mapfr/rational.hpp"

#include <cctype>
#include <cmath>
#include <ostream>
#include <vector>

namespace mapfr {

Rational::Rational(long num, long den) {
  if (den == 0) throw ParseError("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw ParseError("rational with zero denominator");
  v_ = mpq_class(num) / mpq_class(den);
}

Rational::Rational(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw ParseError("rational division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(v_))); }

Rational Rational::reciprocal() const {
  if (is_zero()) throw ParseError("reciprocal of zero");
  return Rational(mpq_class(1) / v_);
}

mpz_class Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
  return q;
}

mpz_class Rational::ceil() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
  return q;
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

// base 10 always; the default base 0 would read leading zeros as octal
mpz_class to_mpz(const std::string& s) {
  std::string t = (!s.empty() && s[0] == '+') ? s.substr(1) : s;
  return mpz_class(t, 10);
}

// "-12.0625e-3" style decimal, parsed exactly as num / 10^k * 10^exp.
Rational parse_decimal(const std::string& s) {
  size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
  std::string digits;
  long frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      seen_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw ParseError("bad rational literal: '" + s + "'");
  long exp10 = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = (s[i++] == '-');
    if (i == s.size()) throw ParseError("bad rational literal: '" + s + "'");
    long e = 0;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i])))
        throw ParseError("bad rational literal: '" + s + "'");
      e = e * 10 + (s[i] - '0');
      if (e > 100000) throw ParseError("exponent out of range: '" + s + "'");
    }
    exp10 = eneg ? -e : e;
  }
  if (i != s.size()) throw ParseError("bad rational literal: '" + s + "'");

  mpz_class mant = to_mpz(digits.empty() ? "0" : digits);
  if (neg) mant = -mant;
  long net = exp10 - frac_digits;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
  if (net >= 0) return Rational(mant * pow10, mpz_class(1));
  return Rational(mant, pow10);
}

}  // namespace

Rational Rational::parse(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw ParseError("empty rational literal");

  size_t slash = t.find('/');
  if (slash != std::string::npos) {
    std::string ns = t.substr(0, slash), ds = t.substr(slash + 1);
    if (!is_integer_token(ns) || !is_integer_token(ds))
      throw ParseError("bad rational literal: '" + s + "'");
    mpz_class n = to_mpz(ns), d = to_mpz(ds);
    if (d == 0) throw ParseError("zero denominator: '" + s + "'");
    return Rational(n, d);
  }
  if (is_integer_token(t)) return Rational(to_mpz(t), mpz_class(1));
  return parse_decimal(t);
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw NonFiniteError("non-finite double");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), x);  // exact binary expansion
  return Rational(q);
}

Rational exact_rational(double x) { return Rational::from_double(x); }

namespace {

// Smallest-denominator rational in [lo, hi], 0 < lo <= hi.
// Continued-fraction descent; unique except in the integer branch.
Rational simplest_pos(const Rational& lo, const Rational& hi) {
  Rational a = lo, b = hi;
  // Walk the integer parts; accumulate via p/q convergent composition:
  // result = (p_prev + n*p) / (q_prev + n*q) style, done as a stack-free
  // continued fraction [n0; n1, n2, ...] rebuilt at the end.
  std::vector<mpz_class> cf;
  for (;;) {
    mpz_class c = a.ceil();
    if (Rational(c, mpz_class(1)) <= b) {
      cf.push_back(c);
      break;
    }
    mpz_class n = a.floor();
    cf.push_back(n);
    Rational fn(n, mpz_class(1));
    // both strictly inside (n, n+1) here; recurse on reciprocal gap, swapped
    Rational na = (b - fn).reciprocal();
    Rational nb = (a - fn).reciprocal();
    a = na;
    b = nb;
  }
  Rational r(cf.back(), mpz_class(1));
  for (size_t i = cf.size() - 1; i-- > 0;)
    r = Rational(cf[i], mpz_class(1)) + r.reciprocal();
  return r;
}

}  // namespace

Rational simplest_in_interval(const Rational& lo, const Rational& hi) {
  if (hi < lo) throw InternalError("simplest_in_interval: empty interval");
  Rational r;
  if (lo.sign() <= 0 && hi.sign() >= 0) return Rational(0);
  if (hi.sign() < 0)
    r = -simplest_pos(-hi, -lo);
  else
    r = simplest_pos(lo, hi);
  // Defensive tie-break: smallest |numerator| at the found denominator.
  mpz_class q = r.den();
  Rational plo_r = lo * Rational(q, mpz_class(1));
  Rational phi_r = hi * Rational(q, mpz_class(1));
  mpz_class p_lo = plo_r.ceil(), p_hi = phi_r.floor();
  mpz_class p = (p_lo > 0) ? p_lo : p_hi;  // interval does not contain 0 here
  Rational cand(p, q);
  return (cand.abs() < r.abs()) ? cand : r;
}

Rational approx_rational(const Rational& x, Round mode, const Rational& eps) {
  if (eps.sign() < 0) throw ParseError("approx_rational: negative epsilon");
  if (mode == Round::Down) return simplest_in_interval(x - eps, x);
  return simplest_in_interval(x, x + eps);
}

Rational approx_rational(double x, Round mode, const Rational& eps) {
  return approx_rational(exact_rational(x), mode, eps);
}

size_t RationalHash::operator()(const Rational& r) const {
  // cold paths only (dedup keys); string form keeps it simple
  return std::hash<std::string>()(r.str());
}

}  // namespace mapfr
