#include "mapfr/collision.hpp"

#include "mapfr/errors.hpp"

namespace mapfr {

const Rational& default_eps() {
  static const Rational eps(1, 1048576);  // 2^-20
  return eps;
}

Point TimedMotion::pos(const Rational& t) const {
  if (stationary() || duration.is_zero()) return from;
  Rational s = (t - start) / duration;
  return from + s * (to - from);
}

bool is_collision(const Point& ca, const Rational& ra, const Point& cb, const Rational& rb) {
  Rational rsum = ra + rb;
  return dist_sq(ca, cb) < rsum * rsum;
}

QuadMin min_dist_sq_affine(const Point& C, const Point& W, const Rational& t0, const Rational& t1) {
  if (t1 < t0) throw InternalError("min_dist_sq_affine: empty interval");
  Rational a = norm_sq(W);
  if (a.is_zero()) return {norm_sq(C), t0};
  // |C + tW|^2 has its vertex at t* = -(C.W)/|W|^2
  Rational tstar = -dot(C, W) / a;
  if (tstar < t0) tstar = t0;
  if (tstar > t1) tstar = t1;
  Point d = C + tstar * W;
  return {norm_sq(d), tstar};
}

namespace {

// Relative position of a vs b as an affine function of absolute time,
// valid on the intersection of the spans: delta(t) = C + t W.
void relative_motion(const TimedMotion& a, const TimedMotion& b, Point& C, Point& W) {
  Point va{0, 0}, vb{0, 0};
  if (!a.stationary() && a.duration.sign() > 0) {
    Rational inv = a.duration.reciprocal();
    va = inv * (a.to - a.from);
  }
  if (!b.stationary() && b.duration.sign() > 0) {
    Rational inv = b.duration.reciprocal();
    vb = inv * (b.to - b.from);
  }
  W = va - vb;
  // pos_a(t) = a.from + (t - a.start) va
  C = (a.from - b.from) - (a.start * va - b.start * vb);
}

}  // namespace

bool in_conflict(const TimedMotion& a, const Rational& ra, const TimedMotion& b, const Rational& rb) {
  Rational t0 = max(a.start, b.start);
  Rational t1 = min(a.end(), b.end());
  if (!(t0 < t1)) return false;  // empty or single-instant overlap
  Point C, W;
  relative_motion(a, b, C, W);
  Rational rsum = ra + rb;
  return min_dist_sq_affine(C, W, t0, t1).value < rsum * rsum;
}

Rational safe_delay(const TimedMotion& a, const Rational& ra, const TimedMotion& b,
                    const Rational& rb, const Rational& eps) {
  if (eps.sign() <= 0) throw NoConflictError("safe_delay: epsilon must be positive");
  if (!in_conflict(a, ra, b, rb)) throw NoConflictError("safe_delay: motions do not conflict");

  const Rational upper = b.end();
  // The conflicting set of start times is an interval (projection of a convex
  // set), and starting exactly at b's end leaves only a single shared
  // instant, which is not a conflict. Bisect the switching point.
  if (in_conflict(a.shifted(upper), ra, b, rb))
    throw InternalError("safe_delay: conflict persists at b's end");

  Rational lo = a.start, hi = upper;
  const Rational half_eps = eps / Rational(2);
  while (hi - lo > half_eps) {
    Rational mid = (lo + hi) / Rational(2);
    if (in_conflict(a.shifted(mid), ra, b, rb))
      lo = mid;
    else
      hi = mid;
  }
  // Round up within [hi, hi + eps/2] (capped at b's end) and simplify; any
  // value >= hi is conflict free, so the result stays safe and within eps of
  // the true infimum.
  Rational cap = min(hi + half_eps, upper);
  return simplest_in_interval(hi, cap);
}

namespace {

// True if v (in lowest terms, >= 0) is the square of a rational; returns it.
bool rational_sqrt(const Rational& v, Rational& root) {
  if (v.sign() < 0) return false;
  mpz_class n = v.num(), d = v.den();
  if (mpz_perfect_square_p(n.get_mpz_t()) && mpz_perfect_square_p(d.get_mpz_t())) {
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    root = Rational(rn, rd);
    return true;
  }
  return false;
}

// Bracket sqrt(v) within [lo, hi], hi - lo <= width.
void bracket_sqrt(const Rational& v, const Rational& width, Rational& lo, Rational& hi) {
  lo = Rational(0);
  hi = max(Rational(1), v);  // sqrt(v) <= max(1, v)
  while (hi - lo > width) {
    Rational mid = (lo + hi) / Rational(2);
    if (mid * mid <= v)
      lo = mid;
    else
      hi = mid;
  }
}

}  // namespace

ConflictWindow wait_conflict_window(const Point& p, const Rational& ra, const TimedMotion& b,
                                    const Rational& rb, const Rational& eps) {
  Rational rsum = ra + rb;
  Rational R2 = rsum * rsum;

  if (b.stationary() || b.duration.is_zero()) {
    // degenerate "move": constant distance over the whole span
    if (b.duration.sign() > 0 && dist_sq(p, b.from) < R2) return {b.start, b.end()};
    throw NoConflictError("wait_conflict_window: no overlap within the span");
  }

  // q(s) = A s^2 - 2 B s + C on s in [0, D], s measured from b.start.
  Rational inv = b.duration.reciprocal();
  Point vb = inv * (b.to - b.from);
  Point rel = p - b.from;
  Rational A = norm_sq(vb);
  Rational B = dot(rel, vb);
  Rational C = norm_sq(rel) - R2;

  // any strict overlap at all?
  Rational smin = B / A;
  if (smin < Rational(0)) smin = Rational(0);
  if (smin > b.duration) smin = b.duration;
  Rational qmin = A * smin * smin - Rational(2) * B * smin + C;
  if (qmin.sign() >= 0) throw NoConflictError("wait_conflict_window: no overlap within the span");

  Rational disc = B * B - A * C;  // > 0 here
  Rational s_lo, s_hi;
  Rational root;
  if (rational_sqrt(disc, root)) {
    s_lo = (B - root) / A;  // exact endpoints
    s_hi = (B + root) / A;
  } else {
    // bracket the root so each endpoint errs by at most eps/2, then round
    // outward and simplify by at most another eps/2
    Rational rl, rh;
    bracket_sqrt(disc, A * eps / Rational(2), rl, rh);
    Rational half_eps = eps / Rational(2);
    Rational down = (B - rh) / A;  // <= true s_lo
    Rational up = (B + rh) / A;    // >= true s_hi
    s_lo = simplest_in_interval(down - half_eps, down);
    s_hi = simplest_in_interval(up, up + half_eps);
  }

  // clip to the span
  if (s_lo < Rational(0)) s_lo = Rational(0);
  if (s_hi > b.duration) s_hi = b.duration;
  if (!(s_lo < s_hi)) throw InternalError("wait_conflict_window: clipped window collapsed");
  return {b.start + s_lo, b.start + s_hi};
}

}  // namespace mapfr
