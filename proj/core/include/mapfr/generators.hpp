#pragma once

#include <cstdint>

#include "mapfr/instance.hpp"

namespace mapfr {

// size x size integer grid with the 2^n-neighborhood (n in 2..5), durations =
// Euclidean offset lengths (irrational ones rounded up within 2^-20), agents
// drawn without repetition from a single seeded stream so that the k-agent
// instance is a prefix of the (k+1)-agent one. Throws TooManyAgentsError when
// k exceeds the cell count, ParseError on out-of-range parameters.
Instance gen_empty(int size, int n, int k, std::uint64_t seed,
                   const Rational& r);

// k agents crossing one transfer vertex: 2k leaves on a circle of radius R
// around the center, agent i travels leaf i -> center -> diametrically
// opposite leaf, every spoke edge has duration exactly R. Leaf coordinates
// sit exactly on the circle (rational points; angles accurate to ~2^-20).
// Throws OvercrowdedError when parked leaf disks would overlap, ParseError
// on out-of-range parameters.
Instance gen_bottleneck(int k, const Rational& R, const Rational& r);

}  // namespace mapfr
