#pragma once

#include <vector>

#include "mapfr/instance.hpp"

namespace mapfr {

enum class CostKind { SumOfCosts, Makespan, Power };

const char* cost_kind_name(CostKind k);
CostKind cost_kind_from_name(const std::string& s);  // throws ParseError

// One (wait, move) step. The agent sits at `vertex` during
// [arrive, arrive + wait], then either traverses `edge` taking move_dur,
// or stays in place (edge == -1, move_dur == 0).
struct TimelineEntry {
  Rational arrive;
  Rational wait;
  int vertex = 0;
  int edge = -1;
  Rational move_dur;

  bool is_move() const { return edge >= 0; }
  Rational depart() const { return arrive + wait; }          // move begins
  Rational end() const { return arrive + wait + move_dur; }  // next arrive
};

struct AgentTimeline {
  int agent = 0;
  std::vector<TimelineEntry> entries;

  // Time the agent comes to rest for good (0 for an empty timeline).
  Rational end_time() const {
    return entries.empty() ? Rational(0) : entries.back().end();
  }
  int move_count() const;
};

struct PrePlan {
  std::vector<AgentTimeline> timelines;  // index == agent id
  int steps = 0;                         // max genuine move count over agents
  CostKind cost_kind = CostKind::SumOfCosts;
  Rational cost;                         // evaluate_cost of the timelines
};

// A pre-plan that passed the exact validator.
struct Plan {
  PrePlan pre;
};

// Structural consistency against the instance: chain of vertices follows
// edges, arrival times telescope, waits nonnegative, stays keep the vertex,
// move durations equal the edge durations, first arrive == 0 at the start
// vertex, last vertex == goal only checked by the validator. Throws
// InvalidPlan.
void check_timeline(const Instance& ins, const AgentTimeline& tl);

// Drops trailing stay entries (they only pad time at the final vertex).
AgentTimeline trim(const AgentTimeline& tl);
PrePlan trim(const PrePlan& p);

// Cost after conceptually trimming trailing stays; does not mutate.
Rational evaluate_cost(const std::vector<AgentTimeline>& tls, CostKind kind);

}  // namespace mapfr
