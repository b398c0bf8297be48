#include "mapfr/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "num_util.hpp"

namespace mapfr {

using json = nlohmann::ordered_json;

namespace {

Rational num_from(const json& j, const char* what) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number_unsigned())
      return Rational(static_cast<long>(j.get<unsigned long>()));
    if (j.is_number_float()) return Rational::from_double(j.get<double>());
  } catch (const Error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
  throw ParseError(std::string(what) + ": expected a number or \"p/q\" string");
}

const json& field(const json& j, const char* name, const char* ctx) {
  auto it = j.find(name);
  if (it == j.end())
    throw ParseError(std::string(ctx) + ": missing field '" + name + "'");
  return *it;
}

int int_from(const json& j, const char* what) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    throw ParseError(std::string(what) + ": expected an integer");
  return j.get<int>();
}

json num_to(const Rational& r) { return json(r.str()); }

json parse_root(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ParseError("malformed JSON document");
  if (!j.is_object()) throw ParseError("top level must be a JSON object");
  return j;
}

}  // namespace

Instance parse_instance(const std::string& text) {
  const json j = parse_root(text);
  Instance ins;
  if (auto it = j.find("name"); it != j.end() && it->is_string())
    ins.name = it->get<std::string>();

  for (const auto& v : field(j, "vertices", "instance")) {
    Vertex vx;
    vx.id = int_from(field(v, "id", "vertex"), "vertex id");
    vx.pos.x = num_from(field(v, "x", "vertex"), "vertex x");
    vx.pos.y = num_from(field(v, "y", "vertex"), "vertex y");
    ins.vertices.push_back(vx);
  }
  for (const auto& e : field(j, "edges", "instance")) {
    EdgeAction ed;
    ed.from = int_from(field(e, "from", "edge"), "edge from");
    ed.to = int_from(field(e, "to", "edge"), "edge to");
    if (auto it = e.find("duration"); it != e.end()) {
      ed.duration = num_from(*it, "edge duration");
    } else {
      if (ed.from < 0 || ed.from >= static_cast<int>(ins.vertices.size()) ||
          ed.to < 0 || ed.to >= static_cast<int>(ins.vertices.size()))
        throw ParseError("edge endpoint out of range");
      ed.duration = euclid_duration(ins.vertices[static_cast<size_t>(ed.from)].pos,
                                    ins.vertices[static_cast<size_t>(ed.to)].pos);
    }
    ins.edges.push_back(ed);
  }
  for (const auto& a : field(j, "agents", "instance")) {
    Agent ag;
    ag.id = int_from(field(a, "id", "agent"), "agent id");
    ag.start = int_from(field(a, "start", "agent"), "agent start");
    ag.goal = int_from(field(a, "goal", "agent"), "agent goal");
    ag.radius = num_from(field(a, "radius", "agent"), "agent radius");
    ins.agents.push_back(ag);
  }
  try {
    ins.finalize();
  } catch (const InvalidInstance& e) {
    throw ParseError(std::string("invalid instance: ") + e.what());
  }
  return ins;
}

std::string instance_to_json(const Instance& ins) {
  json j;
  j["name"] = ins.name;
  j["vertices"] = json::array();
  for (const auto& v : ins.vertices)
    j["vertices"].push_back(
        {{"id", v.id}, {"x", num_to(v.pos.x)}, {"y", num_to(v.pos.y)}});
  j["edges"] = json::array();
  for (const auto& e : ins.edges)
    j["edges"].push_back(
        {{"from", e.from}, {"to", e.to}, {"duration", num_to(e.duration)}});
  j["agents"] = json::array();
  for (const auto& a : ins.agents)
    j["agents"].push_back({{"id", a.id},
                           {"start", a.start},
                           {"goal", a.goal},
                           {"radius", num_to(a.radius)}});
  return j.dump(2) + "\n";
}

namespace {

json stats_to(const SolveStats& s) {
  json t;
  t["h0"] = s.h0;
  t["h_final"] = s.h_final;
  t["t_min_initial"] = num_to(s.t_min_initial);
  t["t_min_final"] = num_to(s.t_min_final);
  t["cost_final"] = num_to(s.cost_final);
  t["guaranteed_ratio"] = num_to(s.guaranteed_ratio);
  t["sat_calls"] = s.sat_calls;
  t["findplan_calls"] = s.findplan_calls;
  t["refine_iterations"] = s.refine_iterations;
  t["clauses_mm"] = s.clauses_mm;
  t["clauses_wm"] = s.clauses_wm;
  t["clause_variants"] = s.clause_variants;
  t["hint_calls"] = s.hint_calls;
  t["gap_trace"] = json::array();
  for (const auto& g : s.gap_trace)
    t["gap_trace"].push_back(
        {{"t_min", num_to(g.t_min)}, {"cost", num_to(g.cost)}});
  t["wall_first_ms"] = s.wall_first_ms;
  t["wall_refine_ms"] = s.wall_refine_ms;
  t["wall_total_ms"] = s.wall_total_ms;
  return t;
}

SolveStats stats_from(const json& t) {
  SolveStats s;
  s.h0 = int_from(field(t, "h0", "stats"), "h0");
  s.h_final = int_from(field(t, "h_final", "stats"), "h_final");
  s.t_min_initial = num_from(field(t, "t_min_initial", "stats"), "t_min_initial");
  s.t_min_final = num_from(field(t, "t_min_final", "stats"), "t_min_final");
  s.cost_final = num_from(field(t, "cost_final", "stats"), "cost_final");
  s.guaranteed_ratio =
      num_from(field(t, "guaranteed_ratio", "stats"), "guaranteed_ratio");
  s.sat_calls = int_from(field(t, "sat_calls", "stats"), "sat_calls");
  s.findplan_calls =
      int_from(field(t, "findplan_calls", "stats"), "findplan_calls");
  s.refine_iterations =
      int_from(field(t, "refine_iterations", "stats"), "refine_iterations");
  s.clauses_mm = int_from(field(t, "clauses_mm", "stats"), "clauses_mm");
  s.clauses_wm = int_from(field(t, "clauses_wm", "stats"), "clauses_wm");
  s.clause_variants =
      int_from(field(t, "clause_variants", "stats"), "clause_variants");
  s.hint_calls = int_from(field(t, "hint_calls", "stats"), "hint_calls");
  for (const auto& g : field(t, "gap_trace", "stats"))
    s.gap_trace.push_back({num_from(field(g, "t_min", "gap"), "gap t_min"),
                           num_from(field(g, "cost", "gap"), "gap cost")});
  s.wall_first_ms = field(t, "wall_first_ms", "stats").get<double>();
  s.wall_refine_ms = field(t, "wall_refine_ms", "stats").get<double>();
  s.wall_total_ms = field(t, "wall_total_ms", "stats").get<double>();
  return s;
}

}  // namespace

PlanFile parse_plan(const std::string& text, const Instance& ins) {
  const json j = parse_root(text);
  PlanFile pf;
  pf.pre.cost = num_from(field(j, "cost", "plan"), "plan cost");
  pf.pre.steps = int_from(field(j, "steps", "plan"), "plan steps");
  if (auto it = j.find("cost_kind"); it != j.end() && it->is_string())
    pf.pre.cost_kind = cost_kind_from_name(it->get<std::string>());

  const json& agents = field(j, "agents", "plan");
  pf.pre.timelines.resize(agents.size());
  for (const auto& a : agents) {
    const int id = int_from(field(a, "agent", "plan agent"), "agent id");
    if (id < 0 || id >= static_cast<int>(pf.pre.timelines.size()))
      throw ParseError("plan agent id out of range");
    AgentTimeline& tl = pf.pre.timelines[static_cast<size_t>(id)];
    tl.agent = id;
    int at = (id < ins.n_agents()) ? ins.agents[static_cast<size_t>(id)].start : 0;
    for (const auto& act : field(a, "actions", "plan agent")) {
      TimelineEntry e;
      e.arrive = num_from(field(act, "t_arrive", "action"), "t_arrive");
      e.wait = num_from(field(act, "wait", "action"), "wait");
      e.vertex = at;
      const json& mv = field(act, "move", "action");
      if (!mv.is_null()) {
        const int from = int_from(field(mv, "from", "move"), "move from");
        const int to = int_from(field(mv, "to", "move"), "move to");
        if (from != at)
          throw ParseError("plan move does not start at the current vertex");
        e.edge = ins.edge_index(from, to);
        if (e.edge < 0) throw ParseError("plan move uses a nonexistent edge");
        e.move_dur = num_from(field(mv, "duration", "move"), "move duration");
        at = to;
      }
      tl.entries.push_back(e);
    }
  }
  // agents absent from the file keep empty timelines with their id
  for (size_t i = 0; i < pf.pre.timelines.size(); ++i)
    pf.pre.timelines[i].agent = static_cast<int>(i);

  if (auto it = j.find("stats"); it != j.end() && it->is_object())
    pf.stats = stats_from(*it);
  return pf;
}

std::string plan_to_json(const PrePlan& pre, const Instance& ins,
                         const SolveStats* stats) {
  json j;
  j["cost"] = num_to(pre.cost);
  j["cost_kind"] = cost_kind_name(pre.cost_kind);
  j["steps"] = pre.steps;
  j["agents"] = json::array();
  for (const auto& tl : pre.timelines) {
    json a;
    a["agent"] = tl.agent;
    a["actions"] = json::array();
    for (const auto& e : tl.entries) {
      json act;
      act["t_arrive"] = num_to(e.arrive);
      act["wait"] = num_to(e.wait);
      if (e.is_move()) {
        const EdgeAction& ed = ins.edges[static_cast<size_t>(e.edge)];
        act["move"] = {{"from", ed.from},
                       {"to", ed.to},
                       {"duration", num_to(e.move_dur)}};
      } else {
        act["move"] = nullptr;
      }
      a["actions"].push_back(act);
    }
    j["agents"].push_back(a);
  }
  if (stats) j["stats"] = stats_to(*stats);
  return j.dump(2) + "\n";
}

std::string stats_to_json(const SolveStats& s) { return stats_to(s).dump(2) + "\n"; }

Instance load_instance(const std::string& path) {
  return parse_instance(read_text_file(path));
}

void save_instance(const Instance& ins, const std::string& path) {
  write_text_file(path, instance_to_json(ins));
}

PlanFile load_plan(const std::string& path, const Instance& ins) {
  return parse_plan(read_text_file(path), ins);
}

void save_plan(const PrePlan& pre, const Instance& ins,
               const std::string& path, const SolveStats* stats) {
  write_text_file(path, plan_to_json(pre, ins, stats));
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open file: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open file for writing: " + path);
  f << content;
  if (!f) throw ParseError("write failed: " + path);
}

}  // namespace mapfr
