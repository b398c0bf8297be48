#include "mapfr/generators.hpp"

#include "num_util.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace mapfr {

namespace {

// uniform draw in [0, bound) straight off the engine, rejection keeps it
// unbiased and identical across standard library implementations
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t m = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t lim = m - m % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= lim);
  return v % bound;
}

}  // namespace

Instance gen_empty(int size, int n, int k, std::uint64_t seed,
                   const Rational& r) {
  if (size < 1) throw ParseError("grid size must be at least 1");
  if (n < 2 || n > 5) throw ParseError("neighborhood exponent must be 2..5");
  if (k < 0) throw ParseError("agent count must be nonnegative");
  if (!(r > 0)) throw ParseError("agent radius must be positive");
  const long cells = static_cast<long>(size) * size;
  if (k > cells)
    throw TooManyAgentsError(std::to_string(k) + " agents on " +
                             std::to_string(cells) + " cells");

  Instance ins;
  ins.name = "empty-" + std::to_string(size) + "x" + std::to_string(size) +
             "-n" + std::to_string(n) + "-k" + std::to_string(k) + "-s" +
             std::to_string(seed);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      ins.vertices.push_back({y * size + x, {Rational(x), Rational(y)}});

  const auto offs = grid_neighborhood(n);
  std::vector<Rational> durs;
  durs.reserve(offs.size());
  for (auto [dx, dy] : offs) durs.push_back(euclid_duration({Rational(0), Rational(0)},
                               {Rational(dx), Rational(dy)}));
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      for (size_t o = 0; o < offs.size(); ++o) {
        const int tx = x + offs[o].first, ty = y + offs[o].second;
        if (tx < 0 || tx >= size || ty < 0 || ty >= size) continue;
        ins.edges.push_back({y * size + x, ty * size + tx, durs[o]});
      }

  std::mt19937_64 rng(seed);
  std::vector<char> used_start(static_cast<size_t>(cells), 0);
  std::vector<char> used_goal(static_cast<size_t>(cells), 0);
  for (int i = 0; i < k; ++i) {
    std::uint64_t s, g;
    do {
      s = draw(rng, static_cast<std::uint64_t>(cells));
    } while (used_start[s]);
    used_start[s] = 1;
    do {
      g = draw(rng, static_cast<std::uint64_t>(cells));
    } while (used_goal[g]);
    used_goal[g] = 1;
    ins.agents.push_back(
        {i, static_cast<int>(s), static_cast<int>(g), r});
  }

  ins.finalize();
  return ins;
}

Instance gen_bottleneck(int k, const Rational& R, const Rational& r) {
  if (k < 1) throw ParseError("bottleneck needs at least one agent");
  if (!(R > 0)) throw ParseError("circle radius must be positive");
  if (!(r > 0)) throw ParseError("agent radius must be positive");

  Instance ins;
  ins.name = "bottleneck-k" + std::to_string(k);
  ins.vertices.push_back({0, {Rational(0), Rational(0)}});

  // leaf i at angle i*pi/k via the rational circle parametrization
  // (R(1-t^2), 2Rt)/(1+t^2) with t ~ tan(angle/2): the radius is exactly R
  // for any rational t. Leaves k..2k-1 are the exact antipodes of 0..k-1.
  std::vector<Point> leaf(static_cast<size_t>(2 * k));
  for (int i = 0; i < k; ++i) {
    const double half = M_PI * i / (2.0 * k);
    const Rational t =
        approx_rational(std::tan(half), Round::Up, Rational(1, 1 << 20));
    const Rational den = Rational(1) + t * t;
    leaf[static_cast<size_t>(i)] = {R * (Rational(1) - t * t) / den,
                                    R * (t + t) / den};
    leaf[static_cast<size_t>(i + k)] = {Rational(0) - leaf[static_cast<size_t>(i)].x,
                                        Rational(0) - leaf[static_cast<size_t>(i)].y};
  }

  const Rational min_gap_sq = (r + r) * (r + r);
  for (int i = 0; i < 2 * k; ++i)
    for (int j = i + 1; j < 2 * k; ++j)
      if (dist_sq(leaf[static_cast<size_t>(i)], leaf[static_cast<size_t>(j)]) <
          min_gap_sq)
        throw OvercrowdedError("leaves " + std::to_string(i) + " and " +
                               std::to_string(j) +
                               " are closer than one disk diameter");

  for (int i = 0; i < 2 * k; ++i)
    ins.vertices.push_back({1 + i, leaf[static_cast<size_t>(i)]});
  for (int i = 0; i < k; ++i) {
    ins.edges.push_back({1 + i, 0, R});
    ins.edges.push_back({0, 1 + i + k, R});
  }
  for (int i = 0; i < k; ++i) ins.agents.push_back({i, 1 + i, 1 + i + k, r});

  ins.finalize();
  return ins;
}

}  // namespace mapfr
