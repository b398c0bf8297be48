#include <doctest.h>

#include <random>

#include "mapfr/collision.hpp"
#include "mapfr/errors.hpp"

using namespace mapfr;

namespace {

Point pt(long x, long y) { return Point{Rational(x), Rational(y)}; }
const Rational half(1, 2);

// Relative motion recovered only through pos(): two evaluations pin the
// affine map delta(t) = C + t W without touching solver internals.
void relativize(const TimedMotion& a, const TimedMotion& b, const Rational& u0,
                const Rational& u1, Point& C, Point& W) {
  Point d0 = a.pos(u0) - b.pos(u0);
  Point d1 = a.pos(u1) - b.pos(u1);
  Rational inv = (u1 - u0).reciprocal();
  W = inv * (d1 - d0);
  C = d0 - u0 * W;
}

TimedMotion random_motion(std::mt19937_64& rng, bool allow_stationary) {
  std::uniform_int_distribution<long> coord(-6, 6), st(0, 4), du(1, 8);
  Point from{Rational(coord(rng), 2), Rational(coord(rng), 2)};
  Point to = from;
  if (!allow_stationary || (rng() & 3) != 0) {
    to = Point{Rational(coord(rng), 2), Rational(coord(rng), 2)};
  }
  return {from, to, Rational(st(rng), 2), Rational(du(rng), 2)};
}

}  // namespace

TEST_CASE("is_collision is strict: touching disks do not overlap") {
  CHECK(!is_collision(pt(0, 0), half, pt(1, 0), half));
  CHECK(is_collision(pt(0, 0), half, Point{Rational(99, 100), Rational(0)}, half));
  CHECK(is_collision(pt(2, 3), Rational(2), pt(2, 3), Rational(1)));
}

TEST_CASE("min_dist_sq_affine spot values") {
  auto m = min_dist_sq_affine(pt(3, 4), pt(0, 0), Rational(1), Rational(5));
  CHECK(m.value == Rational(25));
  CHECK(m.at == Rational(1));
  // vertex inside: |(-2 + t, 1)|^2 minimized at t = 2
  m = min_dist_sq_affine(pt(-2, 1), pt(1, 0), Rational(0), Rational(5));
  CHECK(m.value == Rational(1));
  CHECK(m.at == Rational(2));
  // vertex clamped to the right endpoint
  m = min_dist_sq_affine(pt(-2, 1), pt(1, 0), Rational(0), Rational(1));
  CHECK(m.value == Rational(2));
  CHECK(m.at == Rational(1));
}

TEST_CASE("min_dist_sq_affine randomized: sampling brackets the minimum") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long> coord(-8, 8), tt(0, 12);
  const int N = 64;
  for (int i = 0; i < 400; ++i) {
    Point C{Rational(coord(rng), 3), Rational(coord(rng), 3)};
    Point W{Rational(coord(rng), 3), Rational(coord(rng), 3)};
    Rational t0(tt(rng), 2), t1 = t0 + Rational(tt(rng) + 1, 2);
    QuadMin m = min_dist_sq_affine(C, W, t0, t1);
    CHECK(t0 <= m.at);
    CHECK(m.at <= t1);
    CHECK(norm_sq(C + m.at * W) == m.value);  // reported minimizer attains it
    Rational step = (t1 - t0) / Rational(N);
    Rational best = norm_sq(C + t0 * W);
    for (int k = 1; k <= N; ++k) {
      Rational q = norm_sq(C + (t0 + Rational(k) * step) * W);
      if (q < best) best = q;
    }
    CHECK(m.value <= best);
    // a sample lands within step/2 of the (clamped) vertex, so the sampled
    // minimum overshoots by at most |W|^2 (step/2)^2
    Rational slack = norm_sq(W) * step * step / Rational(4);
    CHECK(best <= m.value + slack);
  }
}

TEST_CASE("in_conflict half-open span rule") {
  TimedMotion a{pt(0, 0), pt(0, 0), Rational(0), Rational(2)};
  TimedMotion b{Point{half, Rational(0)}, Point{half, Rational(0)}, Rational(2), Rational(2)};
  CHECK(!in_conflict(a, half, b, half));  // only the instant t = 2 is shared
  b.start = Rational(3, 2);
  CHECK(in_conflict(a, half, b, half));
  b.start = Rational(0);
  b.duration = Rational(0);
  CHECK(!in_conflict(a, half, b, half));  // zero-length span
}

TEST_CASE("in_conflict: parallel motion at exactly touching distance is safe") {
  TimedMotion a{pt(0, 0), pt(5, 0), Rational(0), Rational(5)};
  TimedMotion b{pt(0, 1), pt(5, 1), Rational(0), Rational(5)};
  CHECK(!in_conflict(a, half, b, half));
  TimedMotion c{Point{Rational(0), Rational(99, 100)}, Point{Rational(5), Rational(99, 100)},
                Rational(0), Rational(5)};
  CHECK(in_conflict(a, half, c, half));
}

TEST_CASE("in_conflict invariant under translation of space and time") {
  std::mt19937_64 rng(43);
  Point shift = pt(100, -50);
  Rational tshift(7, 3);
  for (int i = 0; i < 200; ++i) {
    TimedMotion a = random_motion(rng, true), b = random_motion(rng, true);
    bool base = in_conflict(a, half, b, half);
    TimedMotion a2{a.from + shift, a.to + shift, a.start + tshift, a.duration};
    TimedMotion b2{b.from + shift, b.to + shift, b.start + tshift, b.duration};
    CHECK(in_conflict(a2, half, b2, half) == base);
  }
}

TEST_CASE("in_conflict randomized against an independent reconstruction") {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<int> rr(1, 3);
  int conflicts = 0;
  for (int i = 0; i < 600; ++i) {
    TimedMotion a = random_motion(rng, true), b = random_motion(rng, true);
    Rational ra(rr(rng), 4), rb(rr(rng), 4);
    bool got = in_conflict(a, ra, b, rb);

    Rational t0 = max(a.start, b.start), t1 = min(a.end(), b.end());
    bool expect = false;
    if (t0 < t1) {
      Point C, W;
      relativize(a, b, t0, t1, C, W);
      Rational rsum = ra + rb;
      expect = min_dist_sq_affine(C, W, t0, t1).value < rsum * rsum;
    }
    CHECK(got == expect);
    if (got) ++conflicts;

    // one-sided sampling: any sampled strict overlap must be reported
    if (t0 < t1) {
      Rational step = (t1 - t0) / Rational(16);
      for (int k = 0; k <= 16; ++k) {
        Rational t = t0 + Rational(k) * step;
        if (is_collision(a.pos(t), ra, b.pos(t), rb)) CHECK(got);
      }
    }
  }
  CHECK(conflicts > 50);  // the sweep has to hit real conflicts to mean anything
}

TEST_CASE("safe_delay head-on swap resolves exactly at the blocker's end") {
  TimedMotion a{pt(0, 0), pt(4, 0), Rational(0), Rational(4)};
  TimedMotion b{pt(4, 0), pt(0, 0), Rational(0), Rational(4)};
  REQUIRE(in_conflict(a, half, b, half));
  // frozen: every start before 4 collides, so the delay lands on 4 exactly
  CHECK(safe_delay(a, half, b, half) == Rational(4));
}

TEST_CASE("safe_delay perpendicular crossing approximates sqrt(2) from above") {
  TimedMotion a{pt(0, -2), pt(0, 2), Rational(0), Rational(4)};
  TimedMotion b{pt(-2, 0), pt(2, 0), Rational(0), Rational(4)};
  REQUIRE(in_conflict(a, half, b, half));
  Rational d = safe_delay(a, half, b, half);
  // frozen: true infimum is sqrt(2); checked squared to stay exact
  CHECK(d * d >= Rational(2));
  Rational below = d - default_eps();
  CHECK(below * below < Rational(2));
}

TEST_CASE("safe_delay rejects non-conflicting input") {
  TimedMotion a{pt(0, 0), pt(1, 0), Rational(0), Rational(1)};
  TimedMotion b{pt(10, 10), pt(11, 10), Rational(0), Rational(1)};
  CHECK_THROWS_AS(safe_delay(a, half, b, half), NoConflictError);
  CHECK_THROWS_AS(safe_delay(a, half, b, half, Rational(0)), NoConflictError);
}

TEST_CASE("safe_delay randomized postconditions") {
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<int> rr(1, 3);
  const Rational eps(1, 1024);
  int hit = 0;
  for (int i = 0; i < 400 && hit < 120; ++i) {
    TimedMotion a = random_motion(rng, true), b = random_motion(rng, true);
    Rational ra(rr(rng), 4), rb(rr(rng), 4);
    if (!in_conflict(a, ra, b, rb)) continue;
    ++hit;
    Rational d = safe_delay(a, ra, b, rb, eps);
    CHECK(a.start < d);
    CHECK(d <= b.end());
    CHECK(!in_conflict(a.shifted(d), ra, b, rb));
    // within eps of the infimum: stepping back by eps re-enters the conflict
    Rational back = max(a.start, d - eps);
    CHECK(in_conflict(a.shifted(back), ra, b, rb));
  }
  CHECK(hit >= 60);
}

TEST_CASE("wait_conflict_window pass-through has exact rational endpoints") {
  TimedMotion b{pt(-2, 0), pt(2, 0), Rational(0), Rational(4)};
  ConflictWindow w = wait_conflict_window(pt(0, 0), half, b, half);
  // frozen: discriminant is a perfect square, window is (1, 3) exactly
  CHECK(w.lo == Rational(1));
  CHECK(w.hi == Rational(3));
}

TEST_CASE("wait_conflict_window tangent and disjoint movers throw") {
  TimedMotion graze{pt(-2, 1), pt(2, 1), Rational(0), Rational(4)};
  CHECK_THROWS_AS(wait_conflict_window(pt(0, 0), half, graze, half), NoConflictError);
  TimedMotion far{pt(-2, 5), pt(2, 5), Rational(0), Rational(4)};
  CHECK_THROWS_AS(wait_conflict_window(pt(0, 0), half, far, half), NoConflictError);
  // overlap exists on the line but outside the span
  TimedMotion before{pt(4, 0), pt(8, 0), Rational(0), Rational(4)};
  CHECK_THROWS_AS(wait_conflict_window(pt(0, 0), half, before, half), NoConflictError);
}

TEST_CASE("wait_conflict_window degenerate movers") {
  TimedMotion still{pt(0, 0), pt(0, 0), Rational(1), Rational(3)};
  ConflictWindow w = wait_conflict_window(Point{half, Rational(0)}, half, still, half);
  CHECK(w.lo == Rational(1));
  CHECK(w.hi == Rational(4));
  TimedMotion instant{pt(0, 0), pt(1, 0), Rational(1), Rational(0)};
  CHECK_THROWS_AS(wait_conflict_window(pt(0, 0), half, instant, half), NoConflictError);
}

TEST_CASE("wait_conflict_window irrational roots round outward within eps") {
  // diagonal pass: discriminant 2 is not a perfect square
  TimedMotion b{pt(-2, -2), pt(2, 2), Rational(0), Rational(4)};
  Point p = pt(0, 0);
  const Rational eps = default_eps();
  ConflictWindow w = wait_conflict_window(p, half, b, half, eps);
  Rational R2 = Rational(1);
  auto overlap_at = [&](const Rational& t) { return dist_sq(p, b.pos(t)) < R2; };
  CHECK(!overlap_at(w.lo));            // lo sits at or before the true entry
  CHECK(overlap_at(w.lo + eps));       // and within eps of it
  CHECK(!overlap_at(w.hi));
  CHECK(overlap_at(w.hi - eps));
}

TEST_CASE("wait_conflict_window randomized postconditions") {
  std::mt19937_64 rng(59);
  std::uniform_int_distribution<long> coord(-6, 6);
  std::uniform_int_distribution<int> rr(1, 3);
  const Rational eps(1, 4096);
  int hit = 0;
  for (int i = 0; i < 500 && hit < 150; ++i) {
    TimedMotion b = random_motion(rng, false);
    Point p{Rational(coord(rng), 2), Rational(coord(rng), 2)};
    Rational ra(rr(rng), 4), rb(rr(rng), 4);
    Rational R2 = (ra + rb) * (ra + rb);
    ConflictWindow w;
    try {
      w = wait_conflict_window(p, ra, b, rb, eps);
    } catch (const NoConflictError&) {
      // then no sampled time may strictly overlap
      Rational step = b.duration / Rational(24);
      if (step.sign() > 0)
        for (int k = 0; k <= 24; ++k)
          CHECK(dist_sq(p, b.pos(b.start + Rational(k) * step)) >= R2);
      continue;
    }
    ++hit;
    CHECK(b.start <= w.lo);
    CHECK(w.lo < w.hi);
    CHECK(w.hi <= b.end());
    // containment: strictly outside the reported window there is no strict
    // overlap (the endpoints themselves may overlap when clipped to the span)
    Rational step = b.duration / Rational(24);
    for (int k = 0; k <= 24; ++k) {
      Rational t = b.start + Rational(k) * step;
      if (t < w.lo || t > w.hi) CHECK(dist_sq(p, b.pos(t)) >= R2);
    }
    // tightness: eps inside each unclipped endpoint the overlap has begun
    // (skip windows so narrow the probe could cross the far side)
    if (w.hi - w.lo > Rational(3) * eps) {
      if (w.lo > b.start) CHECK(dist_sq(p, b.pos(w.lo + eps)) <= R2);
      if (w.hi < b.end()) CHECK(dist_sq(p, b.pos(w.hi - eps)) <= R2);
    }
  }
  CHECK(hit >= 60);
}
