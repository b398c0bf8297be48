#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "mapfr/geom.hpp"

namespace mapfr {

// Rational edge duration for a unit-speed segment: exact when the squared
// length is a perfect rational square, otherwise the sqrt rounded Up within
// 2^-20 (uniform convention so symmetric edges get equal durations).
inline Rational euclid_duration(const Point& a, const Point& b) {
  const Rational d2 = dist_sq(a, b);
  mpz_class n = d2.num(), d = d2.den();
  if (mpz_perfect_square_p(n.get_mpz_t()) &&
      mpz_perfect_square_p(d.get_mpz_t())) {
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    return Rational(rn, rd);
  }
  return approx_rational(std::sqrt(d2.to_double()), Round::Up,
                         Rational(1, 1 << 20));
}

// The 2^n neighborhood offset sets, cumulative per the benchmark convention.
inline std::vector<std::pair<int, int>> grid_neighborhood(int n) {
  std::vector<std::pair<int, int>> off = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  auto add_sym = [&](int dx, int dy) {
    off.push_back({dx, dy});
    off.push_back({dx, -dy});
    off.push_back({-dx, dy});
    off.push_back({-dx, -dy});
  };
  if (n >= 3) {
    add_sym(1, 1);
  }
  if (n >= 4) {
    add_sym(1, 2);
    add_sym(2, 1);
  }
  if (n >= 5) {
    add_sym(1, 3);
    add_sym(3, 1);
    add_sym(2, 3);
    add_sym(3, 2);
  }
  return off;
}

}  // namespace mapfr
