#pragma once

#include "mapfr/geom.hpp"

namespace mapfr {

// Constant-velocity straight-line motion over [start, start + duration].
// A wait is the degenerate case from == to.
struct TimedMotion {
  Point from, to;
  Rational start;
  Rational duration;  // >= 0

  Rational end() const { return start + duration; }
  bool stationary() const { return from == to; }
  // Position at absolute time t, valid for t within the span.
  Point pos(const Rational& t) const;
  TimedMotion shifted(const Rational& new_start) const {
    return {from, to, new_start, duration};
  }
};

// Default precision for directed rounding of learned constants: 2^-20.
const Rational& default_eps();

// Strict open-disk overlap; touching is allowed.
bool is_collision(const Point& ca, const Rational& ra, const Point& cb, const Rational& rb);

// Minimum of |C + t W|^2 over [t0, t1] (t0 <= t1) and a time attaining it.
struct QuadMin {
  Rational value;
  Rational at;
};
QuadMin min_dist_sq_affine(const Point& C, const Point& W, const Rational& t0, const Rational& t1);

// Do the motions strictly collide at some common time? The span overlap is
// taken half-open: a single shared boundary instant is not a conflict (the
// neighbouring actions own that instant).
bool in_conflict(const TimedMotion& a, const Rational& ra, const TimedMotion& b, const Rational& rb);

// Smallest start delay that frees motion a from conflicting with b,
// overapproximated by at most eps and returned as a simplified rational:
//   a.start < result <= b.end(), no conflict when a starts at result,
//   conflict everywhere in [a.start, true infimum).
// pre: in_conflict(a, b); throws NoConflictError otherwise.
Rational safe_delay(const TimedMotion& a, const Rational& ra, const TimedMotion& b,
                    const Rational& rb, const Rational& eps = default_eps());

// Open interval of absolute times during which the moving disk b strictly
// overlaps a disk parked at p, clipped to b's span. Endpoints are exact when
// the quadratic roots are rational, otherwise rounded outward by at most eps
// (lo down, hi up) so the true window is always contained.
// Throws NoConflictError when no strict overlap happens within the span.
struct ConflictWindow {
  Rational lo, hi;
};
ConflictWindow wait_conflict_window(const Point& p, const Rational& ra, const TimedMotion& b,
                                    const Rational& rb, const Rational& eps = default_eps());

}  // namespace mapfr
