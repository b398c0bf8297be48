#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mapfr/batch.hpp"
#include "mapfr/generators.hpp"
#include "mapfr/io.hpp"
#include "mapfr/movingai.hpp"
#include "mapfr/planner.hpp"
#include "mapfr/svg.hpp"
#include "mapfr/validate.hpp"

using namespace mapfr;

namespace {

constexpr int kOk = 0;          // solved / valid
constexpr int kInfeasible = 1;  // proven infeasible / plan invalid
constexpr int kTimeout = 2;     // budget expired (a certified plan may exist)
constexpr int kError = 3;       // bad input, I/O failure, internal fault

Rational parse_rat(const std::string& s, const char* what) {
  try {
    return Rational::parse(s);
  } catch (const Error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_text_file(path, content);
}

int cmd_solve(const std::string& instance_path, const std::string& cost,
              const std::string& delta, const std::string& bisect_c,
              double timeout_s, const std::string& eps, bool no_hints,
              int refine_limit, const std::string& out,
              const std::string& stats_out) {
  Instance ins = load_instance(instance_path);
  SolveConfig cfg;
  cfg.cost_kind = cost_kind_from_name(cost);
  cfg.delta = parse_rat(delta, "--delta");
  cfg.bisect_c = parse_rat(bisect_c, "--bisect-c");
  if (!eps.empty()) cfg.eps = parse_rat(eps, "--eps");
  cfg.budget = std::chrono::milliseconds(
      static_cast<long long>(std::llround(timeout_s * 1000.0)));
  cfg.hints_enabled = !no_hints;
  cfg.refine_call_limit = refine_limit;

  SolveResult res = solve(ins, cfg);

  if (!stats_out.empty()) emit(stats_out, stats_to_json(res.stats));
  if (res.plan) emit(out, plan_to_json(res.plan->pre, ins, &res.stats));

  if (res.status == SolveStatus::Solved) {
    std::cerr << "solved: cost " << res.plan->pre.cost << " ("
              << res.plan->pre.cost.to_double() << "), steps "
              << res.plan->pre.steps << ", guaranteed ratio "
              << res.stats.guaranteed_ratio.to_double() << ", "
              << res.stats.wall_total_ms << " ms\n";
    return kOk;
  }
  if (res.plan)
    std::cerr << "timeout: best certified cost " << res.plan->pre.cost
              << ", guaranteed ratio so far "
              << res.stats.guaranteed_ratio.to_double() << "\n";
  else
    std::cerr << "timeout: no plan found within the budget\n";
  return kTimeout;
}

int cmd_validate(const std::string& instance_path,
                 const std::string& plan_path) {
  Instance ins = load_instance(instance_path);
  PlanFile pf = load_plan(plan_path, ins);
  ValidationReport rep = validate(ins, pf.pre);
  if (rep.valid) {
    std::cout << "valid\n";
    return kOk;
  }
  for (const auto& s : rep.structural) std::cout << "structural: " << s << "\n";
  for (const auto& v : rep.violations)
    std::cout << "collision: agents " << v.agent_a << " and " << v.agent_b
              << " at t=" << v.at << " (dist^2 = " << v.dist_sq << ")\n";
  return kInfeasible;
}

std::vector<std::chrono::milliseconds> parse_timeouts(const std::string& s) {
  std::vector<std::chrono::milliseconds> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    out.push_back(std::chrono::milliseconds(
        static_cast<long long>(std::llround(std::stod(cur) * 1000.0))));
    cur.clear();
  };
  for (char ch : s) {
    if (ch == ',')
      flush();
    else
      cur += ch;
  }
  flush();
  if (out.empty()) throw ParseError("--timeouts needs at least one value");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mapfr: multi-agent path finding with continuous time"};
  app.require_subcommand(1);

  // solve
  std::string instance_path, plan_path, out_path, stats_path;
  std::string cost = "soc", delta = "1", bisect_c = "1/2", eps;
  double timeout_s = 60.0;
  bool no_hints = false;
  int refine_limit = -1;
  auto* sc_solve = app.add_subcommand("solve", "solve an instance");
  sc_solve->add_option("instance", instance_path)->required();
  sc_solve->add_option("--cost", cost, "soc|makespan|power");
  sc_solve->add_option("--delta", delta, "suboptimality bound (rational)");
  sc_solve->add_option("--bisect-c", bisect_c, "bisection split in (0,1)");
  sc_solve->add_option("--timeout", timeout_s, "budget in seconds");
  sc_solve->add_option("--eps", eps, "rounding granularity (rational)");
  sc_solve->add_flag("--no-hints", no_hints, "disable branching hints");
  sc_solve->add_option("--out", out_path, "plan JSON path ('-' = stdout)");
  sc_solve->add_option("--stats", stats_path, "stats JSON path");
  sc_solve->add_option("--debug-refine-limit", refine_limit)
      ->group("");  // hidden: injected budget expiry for anytime testing

  // validate
  auto* sc_val = app.add_subcommand("validate", "check a plan exactly");
  sc_val->add_option("instance", instance_path)->required();
  sc_val->add_option("plan", plan_path)->required();

  // gen empty | gen bottleneck
  auto* sc_gen = app.add_subcommand("gen", "generate a benchmark instance");
  sc_gen->require_subcommand(1);
  int size = 8, nn = 2, k = 2;
  unsigned long long seed = 0;
  std::string radius = "1/2", circle_R = "10";
  auto* sc_empty = sc_gen->add_subcommand("empty", "empty square room");
  sc_empty->add_option("--size", size);
  sc_empty->add_option("--n", nn, "neighborhood exponent 2..5");
  sc_empty->add_option("--k", k, "agent count");
  sc_empty->add_option("--seed", seed);
  sc_empty->add_option("--radius", radius, "agent radius (rational)");
  sc_empty->add_option("--out", out_path);
  auto* sc_bott = sc_gen->add_subcommand("bottleneck", "circle through a hub");
  sc_bott->add_option("--k", k, "agent count");
  sc_bott->add_option("--R", circle_R, "circle radius (rational)");
  sc_bott->add_option("--radius", radius, "agent radius (rational)");
  sc_bott->add_option("--out", out_path);

  // ingest movingai
  auto* sc_ingest = app.add_subcommand("ingest", "import external formats");
  sc_ingest->require_subcommand(1);
  std::string map_path, scen_path;
  auto* sc_mai = sc_ingest->add_subcommand("movingai", "grid .map/.scen pair");
  sc_mai->add_option("--map", map_path)->required();
  sc_mai->add_option("--scen", scen_path)->required();
  sc_mai->add_option("--n", nn, "neighborhood exponent 2..5");
  sc_mai->add_option("--k", k, "agent count");
  sc_mai->add_option("--radius", radius, "agent radius (rational)");
  sc_mai->add_option("--out", out_path);

  // bench
  std::string spec_path, timeouts_str = "30";
  int jobs = 1;
  auto* sc_bench = app.add_subcommand("bench", "batch runner, CSV output");
  sc_bench->add_option("--spec", spec_path, "JSON benchmark spec")->required();
  sc_bench->add_option("--timeouts", timeouts_str, "seconds, comma separated");
  sc_bench->add_option("--jobs", jobs, "concurrent workers");
  sc_bench->add_option("--cost", cost, "soc|makespan|power");
  sc_bench->add_option("--delta", delta, "suboptimality bound (rational)");
  sc_bench->add_option("--out", out_path, "CSV path ('-' = stdout)");

  // render
  int samples = 12;
  auto* sc_render = app.add_subcommand("render", "static SVG of a plan");
  sc_render->add_option("instance", instance_path)->required();
  sc_render->add_option("plan", plan_path)->required();
  sc_render->add_option("--samples", samples, "time ticks per trajectory");
  sc_render->add_option("--out", out_path, "SVG path ('-' = stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sc_solve->parsed())
      return cmd_solve(instance_path, cost, delta, bisect_c, timeout_s, eps,
                       no_hints, refine_limit, out_path, stats_path);
    if (sc_val->parsed()) return cmd_validate(instance_path, plan_path);
    if (sc_gen->parsed()) {
      Instance ins =
          sc_empty->parsed()
              ? gen_empty(size, nn, k, seed, parse_rat(radius, "--radius"))
              : gen_bottleneck(k, parse_rat(circle_R, "--R"),
                               parse_rat(radius, "--radius"));
      emit(out_path, instance_to_json(ins));
      return kOk;
    }
    if (sc_ingest->parsed()) {
      Instance ins = ingest_movingai(map_path, scen_path, nn, k,
                                     parse_rat(radius, "--radius"));
      emit(out_path, instance_to_json(ins));
      return kOk;
    }
    if (sc_bench->parsed()) {
      SolveConfig cfg;
      cfg.cost_kind = cost_kind_from_name(cost);
      cfg.delta = parse_rat(delta, "--delta");
      const std::string csv = run_batch(parse_bench_specs(read_text_file(spec_path)),
                                        cfg, parse_timeouts(timeouts_str), jobs);
      emit(out_path, csv);
      return kOk;
    }
    if (sc_render->parsed()) {
      Instance ins = load_instance(instance_path);
      PlanFile pf = load_plan(plan_path, ins);
      emit(out_path, render_svg(ins, pf.pre, samples));
      return kOk;
    }
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
