#pragma once

#include <string>
#include <vector>

#include "mapfr/collision.hpp"
#include "mapfr/geom.hpp"
#include "mapfr/instance.hpp"
#include "mapfr/plan.hpp"

namespace mapfr {

// One straight-line (or stationary) piece of an agent's motion. Consecutive
// pieces abut in time and space; the last piece is the unbounded rest at the
// final vertex.
struct MotionSegment {
  int agent = 0;
  Rational t0, t1;  // [t0, t1]; t1 meaningless when unbounded
  Point p0, p1;     // affine between the endpoints, constant when equal
  bool unbounded = false;

  bool constant() const { return p0 == p1; }
  Point pos(const Rational& t) const;  // t must lie within the span
};

// Motion cover of [0, infinity) per agent. Throws StructuralError when the
// plan does not fit the instance (bad edges, broken chain, negative waits).
std::vector<std::vector<MotionSegment>> segmentize(const Instance& ins, const PrePlan& plan);

struct PairMin {
  Rational dist_sq;
  Rational at;
};

// Exact minimum of the squared distance over the closed overlap of the two
// spans (unbounded tails clipped against the other; both unbounded compare
// the rest positions). Throws NoOverlapError when the spans are disjoint.
PairMin min_pair_distance_sq(const MotionSegment& a, const MotionSegment& b);

struct Violation {
  int agent_a = 0, agent_b = 0;
  Rational t_from, t_to;  // window containing the offending minimum
  Rational at;            // a time attaining it
  Rational dist_sq;       // < (r_a + r_b)^2
};

struct ValidationReport {
  bool valid = false;
  std::vector<Violation> violations;
  std::vector<std::string> structural;
};

// Exact certification straight from the instance and the plan: structure
// (starts, goals, chains) plus pairwise minimum distances, all in rationals.
// Touching exactly at r_a + r_b is allowed.
ValidationReport validate(const Instance& ins, const PrePlan& plan);

// validate() or throw InvalidPlan with the first problem.
Plan certify(const Instance& ins, const PrePlan& plan);

// Best cost over all k! priority orders where every agent follows its
// duration-optimal path and each lower-priority agent's start is delayed just
// enough (via safe_delay composition) to clear all higher-priority agents.
// Throws TooLargeError when k > 8.
Rational permutation_oracle(const Instance& ins, CostKind kind,
                            const Rational& eps = default_eps());

}  // namespace mapfr
