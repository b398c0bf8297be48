#include <doctest.h>

#include <cstdio>
#include <sstream>
#include <string>

#include "mapfr/batch.hpp"
#include "mapfr/generators.hpp"
#include "mapfr/io.hpp"
#include "mapfr/movingai.hpp"
#include "mapfr/svg.hpp"
#include "mapfr/validate.hpp"

using namespace mapfr;

namespace {

int count_sub(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (size_t p = hay.find(needle); p != std::string::npos;
       p = hay.find(needle, p + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("instance JSON round-trips exactly") {
  Instance ins = gen_bottleneck(3, 2, Rational(1, 2));
  const std::string text = instance_to_json(ins);
  Instance back = parse_instance(text);

  CHECK(back.name == ins.name);
  REQUIRE(back.n_vertices() == ins.n_vertices());
  for (int v = 0; v < ins.n_vertices(); ++v)
    CHECK(back.coord(v) == ins.coord(v));
  REQUIRE(back.edges.size() == ins.edges.size());
  for (size_t i = 0; i < ins.edges.size(); ++i) {
    CHECK(back.edges[i].from == ins.edges[i].from);
    CHECK(back.edges[i].to == ins.edges[i].to);
    CHECK(back.edges[i].duration == ins.edges[i].duration);
  }
  REQUIRE(back.n_agents() == ins.n_agents());
  for (int a = 0; a < ins.n_agents(); ++a)
    CHECK(back.agents[static_cast<size_t>(a)].radius ==
          ins.agents[static_cast<size_t>(a)].radius);

  // serializing the parse result reproduces the bytes
  CHECK(instance_to_json(back) == text);
}

TEST_CASE("instance parser accepts decimals, fractions and default durations") {
  const std::string text = R"({
    "name": "mixed",
    "vertices": [
      {"id": 0, "x": 0, "y": "0"},
      {"id": 1, "x": "3", "y": 4.0},
      {"id": 2, "x": "1/4", "y": "0.75"}
    ],
    "edges": [
      {"from": 0, "to": 1},
      {"from": 1, "to": 0, "duration": "5"},
      {"from": 0, "to": 2, "duration": "1/3"}
    ],
    "agents": [{"id": 0, "start": 0, "goal": 1, "radius": "0.5"}]
  })";
  Instance ins = parse_instance(text);
  CHECK(ins.coord(2).x == Rational(1, 4));
  CHECK(ins.coord(2).y == Rational(3, 4));
  // omitted duration defaults to the Euclidean length (3-4-5 is exact)
  CHECK(ins.edges[0].duration == Rational(5));
  CHECK(ins.edges[1].duration == Rational(5));
  CHECK(ins.edges[2].duration == Rational(1, 3));
  CHECK(ins.agents[0].radius == Rational(1, 2));

  // an irrational default gets the documented Up-rounded sqrt
  const std::string diag = R"({
    "vertices": [{"id": 0, "x": 0, "y": 0}, {"id": 1, "x": 1, "y": 1}],
    "edges": [{"from": 0, "to": 1}],
    "agents": [{"id": 0, "start": 0, "goal": 1, "radius": "1/2"}]
  })";
  const Rational d = parse_instance(diag).edges[0].duration;
  CHECK(d * d >= 2);
  const Rational back = d - Rational(1, 1 << 20);
  CHECK(back * back < 2);

  CHECK_THROWS_AS(parse_instance("not json"), ParseError);
  CHECK_THROWS_AS(parse_instance("[]"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"vertices": [], "edges": []})"),
                  ParseError);  // missing agents
  CHECK_THROWS_AS(
      parse_instance(
          R"({"vertices": [{"id": 0, "x": 0}], "edges": [], "agents": []})"),
      ParseError);  // vertex missing y
  // structural problems surface as ParseError too (duplicate edge)
  CHECK_THROWS_AS(parse_instance(R"({
    "vertices": [{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":0}],
    "edges": [{"from":0,"to":1},{"from":0,"to":1}],
    "agents": [{"id":0,"start":0,"goal":1,"radius":"1/2"}]
  })"),
                  ParseError);
}

TEST_CASE("plan JSON round-trips and feeds the validator directly") {
  Instance ins = gen_bottleneck(2, 2, Rational(1, 2));
  SolveResult res = solve(ins, SolveConfig{});
  REQUIRE(res.status == SolveStatus::Solved);
  const PrePlan& pre = res.plan->pre;

  const std::string text = plan_to_json(pre, ins, &res.stats);
  PlanFile pf = parse_plan(text, ins);

  CHECK(pf.pre.cost == pre.cost);
  CHECK(pf.pre.steps == pre.steps);
  CHECK(pf.pre.cost_kind == pre.cost_kind);
  REQUIRE(pf.pre.timelines.size() == pre.timelines.size());
  for (size_t a = 0; a < pre.timelines.size(); ++a) {
    const auto& ta = pre.timelines[a], &tb = pf.pre.timelines[a];
    REQUIRE(ta.entries.size() == tb.entries.size());
    for (size_t j = 0; j < ta.entries.size(); ++j) {
      CHECK(ta.entries[j].arrive == tb.entries[j].arrive);
      CHECK(ta.entries[j].wait == tb.entries[j].wait);
      CHECK(ta.entries[j].vertex == tb.entries[j].vertex);
      CHECK(ta.entries[j].edge == tb.entries[j].edge);
      CHECK(ta.entries[j].move_dur == tb.entries[j].move_dur);
    }
  }
  // independent validation straight off the file
  CHECK(validate(ins, pf.pre).valid);

  // stats block carried through exactly
  REQUIRE(pf.stats.has_value());
  CHECK(pf.stats->h_final == res.stats.h_final);
  CHECK(pf.stats->t_min_final == res.stats.t_min_final);
  CHECK(pf.stats->guaranteed_ratio == res.stats.guaranteed_ratio);
  CHECK(pf.stats->sat_calls == res.stats.sat_calls);
  CHECK(pf.stats->gap_trace.size() == res.stats.gap_trace.size());
  CHECK(pf.stats->wall_total_ms == res.stats.wall_total_ms);

  // byte determinism of the writer
  CHECK(plan_to_json(pf.pre, ins, &*pf.stats) == text);
}

TEST_CASE("plan entries without a move survive the file format") {
  Instance ins = gen_bottleneck(1, 3, Rational(1, 2));
  PrePlan pre;
  AgentTimeline tl;
  tl.agent = 0;
  TimelineEntry stay;  // wait 2 at the start, no move
  stay.arrive = 0;
  stay.wait = 2;
  stay.vertex = ins.agents[0].start;
  TimelineEntry mv1;
  mv1.arrive = 2;
  mv1.wait = 0;
  mv1.vertex = ins.agents[0].start;
  mv1.edge = 0;
  mv1.move_dur = 3;
  TimelineEntry mv2;
  mv2.arrive = 5;
  mv2.wait = 0;
  mv2.vertex = 0;
  mv2.edge = 1;
  mv2.move_dur = 3;
  tl.entries = {stay, mv1, mv2};
  pre.timelines = {tl};
  pre.steps = 2;
  pre.cost = 8;

  PlanFile pf = parse_plan(plan_to_json(pre, ins), ins);
  REQUIRE(pf.pre.timelines[0].entries.size() == 3);
  CHECK_FALSE(pf.pre.timelines[0].entries[0].is_move());
  CHECK(pf.pre.timelines[0].entries[0].wait == Rational(2));
  CHECK(pf.pre.timelines[0].entries[1].edge == 0);
  CHECK(pf.pre.timelines[0].entries[2].edge == 1);
  CHECK_FALSE(pf.stats.has_value());

  CHECK_THROWS_AS(parse_plan("{", ins), ParseError);
  CHECK_THROWS_AS(parse_plan(R"({"cost":"1","steps":0})", ins), ParseError);
}

TEST_CASE("movingai maps parse and match the empty-room graph when open") {
  const std::string open4 =
      "type octile\nheight 4\nwidth 4\nmap\n....\n....\n....\n....\n";
  GridMap m = parse_map(open4);
  CHECK(m.width == 4);
  CHECK(m.height == 4);
  CHECK(m.passable(0, 0));
  CHECK(m.passable(3, 3));

  Instance grid = grid_to_instance(m, 2);
  Instance empty = gen_empty(4, 2, 1, 0, Rational(1, 2));
  REQUIRE(grid.n_vertices() == empty.n_vertices());
  for (int v = 0; v < grid.n_vertices(); ++v)
    CHECK(grid.coord(v) == empty.coord(v));
  REQUIRE(grid.edges.size() == empty.edges.size());
  for (size_t i = 0; i < grid.edges.size(); ++i) {
    CHECK(grid.edges[i].from == empty.edges[i].from);
    CHECK(grid.edges[i].to == empty.edges[i].to);
    CHECK(grid.edges[i].duration == empty.edges[i].duration);
  }
}

TEST_CASE("supercover edges never cross or graze blocked cells") {
  // a full wall row: nothing connects the two sides, n=3 or otherwise
  const std::string walled =
      "type octile\nheight 3\nwidth 3\nmap\n...\n@@@\n...\n";
  Instance side = grid_to_instance(parse_map(walled), 3);
  CHECK(side.n_vertices() == 6);
  for (const auto& e : side.edges)
    CHECK(side.coord(e.from).y == side.coord(e.to).y);

  // n=4 knight moves would hop the wall geometrically; supercover says no
  Instance side4 = grid_to_instance(parse_map(walled), 4);
  for (const auto& e : side4.edges)
    CHECK(side4.coord(e.from).y == side4.coord(e.to).y);

  // without the wall the same knight move exists
  const std::string open3 = "type octile\nheight 3\nwidth 3\nmap\n...\n...\n...\n";
  Instance full4 = grid_to_instance(parse_map(open3), 4);
  bool has_knight = false;
  for (const auto& e : full4.edges)
    if (dist_sq(full4.coord(e.from), full4.coord(e.to)) == Rational(5))
      has_knight = true;
  CHECK(has_knight);

  // corner cutting between two diagonal blocks is rejected (shared corner)
  const std::string pinch = "type octile\nheight 2\nwidth 2\nmap\n.@\n@.\n";
  Instance diag = grid_to_instance(parse_map(pinch), 3);
  CHECK(diag.n_vertices() == 2);
  CHECK(diag.edges.empty());

  CHECK_THROWS_WITH_AS(parse_map("type octile\nheight 2\nwidth 2\nmap\n..\n.x\n"),
                       doctest::Contains("line 6"), ParseError);
  CHECK_THROWS_WITH_AS(parse_map("type octile\nheight 2\nwidth 2\nmap\n...\n..\n"),
                       doctest::Contains("line 5"), ParseError);
  CHECK_THROWS_AS(parse_map("type octile\nmap\n..\n"), ParseError);
}

TEST_CASE("scen ingestion wires agents to grid cells") {
  const std::string map_text =
      "type octile\nheight 3\nwidth 4\nmap\n....\n.@..\n....\n";
  const std::string scen_text =
      "version 1\n"
      "0\tx.map\t4\t3\t0\t0\t3\t2\t5.0\n"
      "0\tx.map\t4\t3\t3\t0\t0\t2\t5.0\n"
      "0\tx.map\t4\t3\t1\t1\t0\t0\t1.0\n";
  const std::string mp = "/tmp/mapfr_test.map", sp = "/tmp/mapfr_test.scen";
  write_text_file(mp, map_text);
  write_text_file(sp, scen_text);

  Instance ins = ingest_movingai(mp, sp, 2, 2, Rational(1, 3));
  CHECK(ins.n_vertices() == 11);  // 12 cells minus the blocked one
  REQUIRE(ins.n_agents() == 2);
  CHECK((ins.coord(ins.agents[0].start) == Point{Rational(0), Rational(0)}));
  CHECK((ins.coord(ins.agents[0].goal) == Point{Rational(3), Rational(2)}));
  CHECK((ins.coord(ins.agents[1].start) == Point{Rational(3), Rational(0)}));
  CHECK(ins.agents[1].radius == Rational(1, 3));

  // third entry starts on the blocked cell
  CHECK_THROWS_AS(ingest_movingai(mp, sp, 2, 3, Rational(1, 3)),
                  BlockedEndpointError);
  // asking for more agents than the scen provides
  CHECK_THROWS_AS(ingest_movingai(mp, sp, 2, 9, Rational(1, 3)), ParseError);
  std::remove(mp.c_str());
  std::remove(sp.c_str());
}

TEST_CASE("svg render shows one polyline per agent and optional ticks") {
  Instance solo = gen_bottleneck(1, 2, Rational(1, 2));
  SolveResult rs = solve(solo, SolveConfig{});
  REQUIRE(rs.status == SolveStatus::Solved);
  const std::string one = render_svg(solo, rs.plan->pre, 0);
  CHECK(count_sub(one, "<polyline") == 1);
  CHECK(count_sub(one, "<title>") == 0);

  Instance four = gen_bottleneck(4, 10, Rational(1, 2));
  SolveResult rf = solve(four, SolveConfig{});
  REQUIRE(rf.status == SolveStatus::Solved);
  const std::string svg = render_svg(four, rf.plan->pre, 6);
  CHECK(count_sub(svg, "<polyline") == 4);
  CHECK(count_sub(svg, "<title>") == 24);  // 6 ticks per agent
  CHECK(svg.rfind("</svg>\n") != std::string::npos);
}

TEST_CASE("bench specs parse from JSON") {
  const std::string text = R"([
    {"kind": "empty", "size": 6, "n": 3, "k": 2, "seed": 9, "radius": "1/3"},
    {"kind": "bottleneck", "k": 2, "R": "2", "radius": 0.5}
  ])";
  auto specs = parse_bench_specs(text);
  REQUIRE(specs.size() == 2);
  CHECK(specs[0].kind == BenchKind::Empty);
  CHECK(specs[0].size == 6);
  CHECK(specs[0].seed == 9);
  CHECK(specs[0].r == Rational(1, 3));
  CHECK(specs[1].kind == BenchKind::Bottleneck);
  CHECK(specs[1].R == Rational(2));
  CHECK(specs[1].build().n_vertices() == 5);

  CHECK_THROWS_AS(parse_bench_specs("{}"), ParseError);
  CHECK_THROWS_AS(parse_bench_specs(R"([{"kind": "what"}])"), ParseError);
}

TEST_CASE("batch runner isolates workers and never aborts") {
  using std::chrono::milliseconds;
  // empty batch: header only
  const std::string empty = run_batch({}, SolveConfig{}, {milliseconds(1000)});
  CHECK(empty ==
        "instance,timeout_ms,status,solved,cost,ratio,steps,h,wall_ms,error\n");

  BenchmarkSpec easy;
  easy.kind = BenchKind::Bottleneck;
  easy.k = 2;
  easy.R = 2;
  BenchmarkSpec broken;
  broken.kind = BenchKind::MovingAI;
  broken.map_path = "/nonexistent.map";
  broken.scen_path = "/nonexistent.scen";

  const std::string csv = run_batch({easy, broken}, SolveConfig{},
                                    {milliseconds(0), milliseconds(30000)}, 2);
  std::vector<std::string> lines;
  std::istringstream is(csv);
  for (std::string l; std::getline(is, l);) lines.push_back(l);
  REQUIRE(lines.size() == 5);  // header + 2 specs x 2 timeouts

  // rows come out in input order: easy@0, easy@30s, broken@0, broken@30s
  CHECK(lines[1].rfind("bottleneck-k2,0,timeout,false", 0) == 0);
  CHECK(lines[2].rfind("bottleneck-k2,30000,solved,true", 0) == 0);
  CHECK(lines[3].rfind("bottleneck-k2,0", 0) != 0);
  CHECK(lines[3].find(",0,timeout,false") != std::string::npos);
  CHECK(lines[4].find(",30000,error,false") != std::string::npos);
  CHECK(lines[4].find("cannot open file") != std::string::npos);
}
