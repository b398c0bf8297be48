#include "mapfr/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace mapfr {

namespace {

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#17becf", "#e377c2", "#8c564b",
                          "#bcbd22", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

Point pos_at(const Instance& ins, const AgentTimeline& tl, int agent,
             const Rational& t) {
  Point at = ins.coord(ins.agents[static_cast<size_t>(agent)].start);
  for (const auto& e : tl.entries) {
    if (t <= e.depart()) return ins.coord(e.vertex);
    if (!e.is_move() || e.move_dur.is_zero()) {
      at = ins.coord(e.vertex);
      continue;
    }
    const EdgeAction& ed = ins.edges[static_cast<size_t>(e.edge)];
    if (t < e.end()) {
      const Rational s = (t - e.depart()) / e.move_dur;
      const Point a = ins.coord(ed.from), b = ins.coord(ed.to);
      return a + s * (b - a);
    }
    at = ins.coord(ed.to);
  }
  return at;
}

}  // namespace

std::string render_svg(const Instance& ins, const PrePlan& pre, int samples) {
  double minx = 0, maxx = 0, miny = 0, maxy = 0, maxr = 0;
  bool first = true;
  for (const auto& v : ins.vertices) {
    const double x = v.pos.x.to_double(), y = v.pos.y.to_double();
    if (first) {
      minx = maxx = x;
      miny = maxy = y;
      first = false;
    }
    minx = std::min(minx, x), maxx = std::max(maxx, x);
    miny = std::min(miny, y), maxy = std::max(maxy, y);
  }
  for (const auto& a : ins.agents)
    maxr = std::max(maxr, a.radius.to_double());
  const double pad = maxr + 1.0;
  minx -= pad, miny -= pad, maxx += pad, maxy += pad;
  const double span = std::max(maxx - minx, maxy - miny);
  const double scale = span > 0 ? 800.0 / span : 1.0;

  // world -> screen, y flipped so the plane reads the usual way up
  auto sx = [&](double x) { return (x - minx) * scale; };
  auto sy = [&](double y) { return (maxy - y) * scale; };
  auto xy = [&](const Point& p) {
    return fmt(sx(p.x.to_double())) + "," + fmt(sy(p.y.to_double()));
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 "
     << fmt((maxx - minx) * scale) << " " << fmt((maxy - miny) * scale)
     << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  os << "<g stroke=\"#c8c8c8\" stroke-width=\"1\">\n";
  for (const auto& e : ins.edges)
    os << "  <line x1=\"" << fmt(sx(ins.coord(e.from).x.to_double()))
       << "\" y1=\"" << fmt(sy(ins.coord(e.from).y.to_double())) << "\" x2=\""
       << fmt(sx(ins.coord(e.to).x.to_double())) << "\" y2=\""
       << fmt(sy(ins.coord(e.to).y.to_double())) << "\"/>\n";
  os << "</g>\n";
  os << "<g fill=\"#888888\">\n";
  for (const auto& v : ins.vertices)
    os << "  <circle cx=\"" << fmt(sx(v.pos.x.to_double())) << "\" cy=\""
       << fmt(sy(v.pos.y.to_double())) << "\" r=\"2\"/>\n";
  os << "</g>\n";

  Rational makespan(0);
  for (const auto& tl : pre.timelines) makespan = max(makespan, tl.end_time());

  for (const auto& tl : pre.timelines) {
    const Agent& ag = ins.agents[static_cast<size_t>(tl.agent)];
    const char* color = kPalette[static_cast<size_t>(tl.agent) %
                                 (sizeof kPalette / sizeof *kPalette)];
    const double rr = ag.radius.to_double() * scale;
    os << "<g stroke=\"" << color << "\" fill=\"" << color << "\">\n";
    os << "  <circle cx=\"" << fmt(sx(ins.coord(ag.start).x.to_double()))
       << "\" cy=\"" << fmt(sy(ins.coord(ag.start).y.to_double())) << "\" r=\""
       << fmt(rr) << "\" fill-opacity=\"0.2\" stroke-width=\"1\"/>\n";
    os << "  <circle cx=\"" << fmt(sx(ins.coord(ag.goal).x.to_double()))
       << "\" cy=\"" << fmt(sy(ins.coord(ag.goal).y.to_double())) << "\" r=\""
       << fmt(rr)
       << "\" fill=\"none\" stroke-width=\"1.5\" stroke-dasharray=\"4 3\"/>\n";

    // trajectory polyline through the visited vertices
    os << "  <polyline fill=\"none\" stroke-width=\"2\" points=\""
       << xy(ins.coord(ag.start));
    for (const auto& e : tl.entries)
      if (e.is_move())
        os << " " << xy(ins.coord(ins.edges[static_cast<size_t>(e.edge)].to));
    os << "\"/>\n";

    for (int i = 1; i <= samples; ++i) {
      const Rational t = Rational(i) * makespan / Rational(samples);
      const Point p = pos_at(ins, tl, tl.agent, t);
      os << "  <circle cx=\"" << fmt(sx(p.x.to_double())) << "\" cy=\""
         << fmt(sy(p.y.to_double())) << "\" r=\"3\" stroke=\"none\">"
         << "<title>t=" << t.str() << "</title></circle>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace mapfr
