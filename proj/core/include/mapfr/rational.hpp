#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

#include "mapfr/errors.hpp"

namespace mapfr {

// Arbitrary precision rational, always in lowest terms with positive
// denominator (mpq canonical form). Value semantics throughout.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit on purpose
  Rational(int n) : v_(n) {}   // NOLINT
  Rational(long num, long den);
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(mpq_class q);

  // Accepts "p/q", "p", and plain decimal strings ("0.25", "-3e-2").
  static Rational parse(const std::string& s);

  // Exact value of a finite double. Throws NonFiniteError on inf/nan.
  static Rational from_double(double x);

  std::string str() const;  // "p/q", or just "p" when q == 1
  double to_double() const { return v_.get_d(); }

  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  Rational abs() const;
  Rational reciprocal() const;  // throws on zero
  mpz_class floor() const;
  mpz_class ceil() const;

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  mpq_class v_;
};

enum class Round { Down, Up };

// Smallest-denominator rational in the closed interval [lo, hi]
// (ties on denominator broken toward smallest |numerator|).
Rational simplest_in_interval(const Rational& lo, const Rational& hi);

// Directed simplification of a double: the smallest-denominator rational in
// [x - eps, x] (Down) or [x, x + eps] (Up), x taken at its exact binary value.
Rational approx_rational(double x, Round mode, const Rational& eps);

// Directed simplification of an exact rational, same interval convention.
Rational approx_rational(const Rational& x, Round mode, const Rational& eps);

// Exact binary expansion of a finite double.
Rational exact_rational(double x);

struct RationalHash {
  size_t operator()(const Rational& r) const;
};

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace mapfr
