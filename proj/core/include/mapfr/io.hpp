#pragma once

#include <optional>
#include <string>

#include "mapfr/instance.hpp"
#include "mapfr/planner.hpp"

namespace mapfr {

// Instance JSON: { name, vertices: [{id,x,y}], edges: [{from,to,duration?}],
// agents: [{id,start,goal,radius}] }. Numbers may be "p/q" strings, decimal
// strings, or plain JSON numbers; a missing duration means unit speed
// (Euclidean length, sqrt rounded Up within 2^-20 when irrational).
// Serialization always writes "p/q" strings, so round-trips are exact.
Instance parse_instance(const std::string& text);        // throws ParseError
std::string instance_to_json(const Instance& ins);

Instance load_instance(const std::string& path);
void save_instance(const Instance& ins, const std::string& path);

// Plan JSON: { cost, steps, agents: [{agent, actions: [{t_arrive, wait,
// move: {from,to,duration} | null}]}], stats? }. Moves are resolved against
// the instance's edge list. The stats block is carried verbatim if present.
struct PlanFile {
  PrePlan pre;
  std::optional<SolveStats> stats;
};

PlanFile parse_plan(const std::string& text, const Instance& ins);
std::string plan_to_json(const PrePlan& pre, const Instance& ins,
                         const SolveStats* stats = nullptr);

PlanFile load_plan(const std::string& path, const Instance& ins);
void save_plan(const PrePlan& pre, const Instance& ins,
               const std::string& path, const SolveStats* stats = nullptr);

// Stats alone (CLI --stats output).
std::string stats_to_json(const SolveStats& s);

std::string read_text_file(const std::string& path);  // throws ParseError
void write_text_file(const std::string& path, const std::string& content);

}  // namespace mapfr
