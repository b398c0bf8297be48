#pragma once

#include "mapfr/rational.hpp"

namespace mapfr {

struct Point {
  Rational x, y;
};

inline Point operator+(const Point& a, const Point& b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(const Rational& s, const Point& p) { return {s * p.x, s * p.y}; }
inline bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(const Point& a, const Point& b) { return !(a == b); }

inline Rational dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }
inline Rational norm_sq(const Point& a) { return dot(a, a); }
inline Rational dist_sq(const Point& a, const Point& b) { return norm_sq(a - b); }

}  // namespace mapfr
