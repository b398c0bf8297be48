#include "mapfr/plan.hpp"

#include <algorithm>

#include "mapfr/errors.hpp"

namespace mapfr {

const char* cost_kind_name(CostKind k) {
  switch (k) {
    case CostKind::SumOfCosts: return "soc";
    case CostKind::Makespan: return "makespan";
    case CostKind::Power: return "power";
  }
  return "?";
}

CostKind cost_kind_from_name(const std::string& s) {
  if (s == "soc" || s == "sum-of-costs") return CostKind::SumOfCosts;
  if (s == "makespan") return CostKind::Makespan;
  if (s == "power") return CostKind::Power;
  throw ParseError("unknown cost kind: '" + s + "'");
}

int AgentTimeline::move_count() const {
  int c = 0;
  for (const auto& e : entries)
    if (e.is_move()) ++c;
  return c;
}

void check_timeline(const Instance& ins, const AgentTimeline& tl) {
  if (tl.agent < 0 || tl.agent >= ins.n_agents()) throw InvalidPlan("unknown agent id");
  const Agent& ag = ins.agents[static_cast<size_t>(tl.agent)];
  Rational t(0);
  int at = ag.start;
  for (size_t i = 0; i < tl.entries.size(); ++i) {
    const TimelineEntry& e = tl.entries[i];
    if (e.arrive != t) throw InvalidPlan("arrival times do not telescope");
    if (e.vertex != at) throw InvalidPlan("timeline vertex chain broken");
    if (e.wait.sign() < 0) throw InvalidPlan("negative wait");
    if (e.is_move()) {
      if (e.edge >= static_cast<int>(ins.edges.size())) throw InvalidPlan("edge index out of range");
      const EdgeAction& ed = ins.edges[static_cast<size_t>(e.edge)];
      if (ed.from != at) throw InvalidPlan("move does not leave the current vertex");
      if (e.move_dur != ed.duration) throw InvalidPlan("move duration mismatch");
      at = ed.to;
    } else {
      if (e.move_dur.sign() != 0) throw InvalidPlan("stay with nonzero move duration");
    }
    t = e.end();
  }
}

AgentTimeline trim(const AgentTimeline& tl) {
  AgentTimeline out = tl;
  while (!out.entries.empty() && !out.entries.back().is_move()) out.entries.pop_back();
  return out;
}

PrePlan trim(const PrePlan& p) {
  PrePlan out;
  out.cost_kind = p.cost_kind;
  out.timelines.reserve(p.timelines.size());
  int steps = 0;
  for (const auto& tl : p.timelines) {
    out.timelines.push_back(trim(tl));
    steps = std::max(steps, out.timelines.back().move_count());
  }
  out.steps = steps;
  out.cost = evaluate_cost(out.timelines, p.cost_kind);
  return out;
}

Rational evaluate_cost(const std::vector<AgentTimeline>& tls, CostKind kind) {
  Rational acc(0);
  for (const auto& tl : tls) {
    AgentTimeline t = trim(tl);
    switch (kind) {
      case CostKind::SumOfCosts:
        acc += t.end_time();
        break;
      case CostKind::Makespan:
        acc = max(acc, t.end_time());
        break;
      case CostKind::Power:
        for (const auto& e : t.entries) acc += Rational(2) * e.move_dur + e.wait;
        break;
    }
  }
  return acc;
}

}  // namespace mapfr
