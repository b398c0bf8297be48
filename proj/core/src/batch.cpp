#include "mapfr/batch.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "mapfr/generators.hpp"
#include "mapfr/movingai.hpp"

namespace mapfr {

using json = nlohmann::json;

Instance BenchmarkSpec::build() const {
  switch (kind) {
    case BenchKind::Empty:
      return gen_empty(size, n, k, seed, r);
    case BenchKind::Bottleneck:
      return gen_bottleneck(k, R, r);
    case BenchKind::MovingAI:
      return ingest_movingai(map_path, scen_path, n, k, r);
  }
  throw InternalError("unhandled benchmark kind");
}

std::string BenchmarkSpec::label() const {
  switch (kind) {
    case BenchKind::Empty:
      return "empty-" + std::to_string(size) + "x" + std::to_string(size) +
             "-n" + std::to_string(n) + "-k" + std::to_string(k) + "-s" +
             std::to_string(seed);
    case BenchKind::Bottleneck:
      return "bottleneck-k" + std::to_string(k);
    case BenchKind::MovingAI: {
      std::string base = map_path;
      if (auto p = base.find_last_of('/'); p != std::string::npos)
        base = base.substr(p + 1);
      return base + "-n" + std::to_string(n) + "-k" + std::to_string(k);
    }
  }
  return "?";
}

std::vector<BenchmarkSpec> parse_bench_specs(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_array())
    throw ParseError("benchmark spec must be a JSON array");
  std::vector<BenchmarkSpec> out;
  for (const auto& e : j) {
    if (!e.is_object()) throw ParseError("benchmark spec entries must be objects");
    BenchmarkSpec s;
    const std::string kind = e.value("kind", "");
    if (kind == "empty")
      s.kind = BenchKind::Empty;
    else if (kind == "bottleneck")
      s.kind = BenchKind::Bottleneck;
    else if (kind == "movingai")
      s.kind = BenchKind::MovingAI;
    else
      throw ParseError("unknown benchmark kind '" + kind + "'");
    if (e.contains("size")) s.size = e.at("size").get<int>();
    if (e.contains("n")) s.n = e.at("n").get<int>();
    if (e.contains("k")) s.k = e.at("k").get<int>();
    if (e.contains("seed")) s.seed = e.at("seed").get<std::uint64_t>();
    auto rat = [&](const char* name) {
      const auto& v = e.at(name);
      return v.is_string() ? Rational::parse(v.get<std::string>())
                           : Rational::from_double(v.get<double>());
    };
    if (e.contains("R")) s.R = rat("R");
    if (e.contains("radius")) s.r = rat("radius");
    if (e.contains("map")) s.map_path = e.at("map").get<std::string>();
    if (e.contains("scen")) s.scen_path = e.at("scen").get<std::string>();
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", ms);
  return buf;
}

// Tail of one CSV row (after instance,timeout_ms): computed in the worker.
std::string solve_row(const BenchmarkSpec& spec, const SolveConfig& base,
                      std::chrono::milliseconds timeout) {
  try {
    Instance ins = spec.build();
    SolveConfig cfg = base;
    cfg.budget = timeout;
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult res = solve(ins, cfg);
    const double wall =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
    std::ostringstream os;
    if (res.status == SolveStatus::Solved) {
      os << "solved,true," << res.plan->pre.cost.to_double() << ","
         << res.stats.guaranteed_ratio.to_double() << ","
         << res.plan->pre.steps << "," << res.stats.h_final << ","
         << fmt_ms(wall) << ",";
    } else {
      os << "timeout,false,";
      if (res.plan)
        os << res.plan->pre.cost.to_double() << ","
           << res.stats.guaranteed_ratio.to_double() << ","
           << res.plan->pre.steps;
      else
        os << ",,";
      os << "," << res.stats.h_final << "," << fmt_ms(wall) << ",";
    }
    return os.str();
  } catch (const Infeasible& e) {
    return std::string("infeasible,false,,,,,,") + csv_escape(e.what());
  } catch (const std::exception& e) {
    return std::string("error,false,,,,,,") + csv_escape(e.what());
  }
}

struct Task {
  size_t index;
  const BenchmarkSpec* spec;
  std::chrono::milliseconds timeout;
};

struct Worker {
  pid_t pid = -1;
  int fd = -1;
  size_t task = 0;
  std::string buf;
  std::chrono::steady_clock::time_point kill_at;
};

}  // namespace

std::string run_batch(const std::vector<BenchmarkSpec>& specs,
                      const SolveConfig& base_cfg,
                      const std::vector<std::chrono::milliseconds>& timeouts,
                      int jobs) {
  if (jobs < 1) jobs = 1;
  std::vector<Task> tasks;
  for (size_t si = 0; si < specs.size(); ++si)
    for (const auto& to : timeouts)
      tasks.push_back({tasks.size(), &specs[si], to});

  std::vector<std::string> rows(tasks.size());
  size_t next = 0;
  std::vector<Worker> live;

  auto spawn = [&](const Task& t) {
    // a nonpositive budget cannot start any work: report it as a timeout
    // without paying for a worker (solve itself rejects budget <= 0)
    if (t.timeout.count() <= 0) {
      rows[t.index] = "timeout,false,,,,,0.0,";
      return;
    }
    int pipefd[2];
    if (pipe(pipefd) != 0) {
      rows[t.index] = "error,false,,,,,,pipe failed";
      return;
    }
    const pid_t pid = fork();
    if (pid < 0) {
      close(pipefd[0]);
      close(pipefd[1]);
      rows[t.index] = "error,false,,,,,,fork failed";
      return;
    }
    if (pid == 0) {
      close(pipefd[0]);
      const std::string row = solve_row(*t.spec, base_cfg, t.timeout);
      ssize_t off = 0;
      while (off < static_cast<ssize_t>(row.size())) {
        const ssize_t w = write(pipefd[1], row.data() + off,
                                row.size() - static_cast<size_t>(off));
        if (w <= 0) break;
        off += w;
      }
      close(pipefd[1]);
      _exit(0);
    }
    close(pipefd[1]);
    fcntl(pipefd[0], F_SETFL, O_NONBLOCK);  // drains must never block the pool
    Worker w;
    w.pid = pid;
    w.fd = pipefd[0];
    w.task = t.index;
    // generous grace on top of the solver's own budget before a hard kill
    w.kill_at = std::chrono::steady_clock::now() + t.timeout * 2 +
                std::chrono::seconds(10);
    live.push_back(w);
  };

  auto reap = [&](size_t wi, bool killed) {
    Worker& w = live[wi];
    char tmp[512];
    ssize_t r;
    while ((r = read(w.fd, tmp, sizeof tmp)) > 0)
      w.buf.append(tmp, static_cast<size_t>(r));
    close(w.fd);
    int st = 0;
    waitpid(w.pid, &st, 0);
    if (killed)
      rows[w.task] = "error,false,,,,,,worker exceeded its hard deadline";
    else if (!w.buf.empty())
      rows[w.task] = w.buf;
    else
      rows[w.task] = "error,false,,,,,,worker crashed";
    live.erase(live.begin() + static_cast<long>(wi));
  };

  while (next < tasks.size() || !live.empty()) {
    while (next < tasks.size() && static_cast<int>(live.size()) < jobs) {
      spawn(tasks[next]);
      ++next;
    }
    if (live.empty()) continue;

    std::vector<pollfd> pfds;
    pfds.reserve(live.size());
    for (const auto& w : live) pfds.push_back({w.fd, POLLIN, 0});
    poll(pfds.data(), pfds.size(), 200);

    const auto now = std::chrono::steady_clock::now();
    for (size_t i = live.size(); i-- > 0;) {
      bool done = false, killed = false;
      if (pfds[i].revents & (POLLIN | POLLHUP | POLLERR)) {
        // read what is there; EOF means the worker finished
        char tmp[512];
        ssize_t r;
        while ((r = read(live[i].fd, tmp, sizeof tmp)) > 0)
          live[i].buf.append(tmp, static_cast<size_t>(r));
        if (r == 0) done = true;
      }
      if (!done && now >= live[i].kill_at) {
        kill(live[i].pid, SIGKILL);
        done = killed = true;
      }
      if (done) reap(i, killed);
    }
  }

  std::ostringstream os;
  os << "instance,timeout_ms,status,solved,cost,ratio,steps,h,wall_ms,error\n";
  for (size_t i = 0; i < tasks.size(); ++i)
    os << csv_escape(tasks[i].spec->label()) << ","
       << tasks[i].timeout.count() << "," << rows[i] << "\n";
  return os.str();
}

}  // namespace mapfr
