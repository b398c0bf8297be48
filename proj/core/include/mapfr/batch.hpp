#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "mapfr/instance.hpp"
#include "mapfr/planner.hpp"

namespace mapfr {

enum class BenchKind { Empty, Bottleneck, MovingAI };

// One benchmark instance description; build() is deterministic.
struct BenchmarkSpec {
  BenchKind kind = BenchKind::Empty;
  int size = 8, n = 2, k = 2;
  std::uint64_t seed = 0;
  Rational R = Rational(10);       // bottleneck circle radius
  Rational r = Rational(1, 2);     // agent radius
  std::string map_path, scen_path;

  Instance build() const;
  std::string label() const;
};

// JSON array of spec objects: {kind: "empty"|"bottleneck"|"movingai", and the
// matching parameters (size, n, k, seed, R, radius, map, scen)}.
std::vector<BenchmarkSpec> parse_bench_specs(const std::string& text);

// Runs every (spec, timeout) pair in its own forked worker process and
// returns a CSV table (header always present). Worker failures of any kind
// become error rows; the batch itself never aborts. `jobs` workers run
// concurrently; rows come out in input order regardless.
std::string run_batch(const std::vector<BenchmarkSpec>& specs,
                      const SolveConfig& base_cfg,
                      const std::vector<std::chrono::milliseconds>& timeouts,
                      int jobs = 1);

}  // namespace mapfr
