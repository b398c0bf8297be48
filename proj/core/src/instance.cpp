#include "mapfr/instance.hpp"

#include "mapfr/errors.hpp"

namespace mapfr {

namespace {
long long edge_key(int from, int to) {
  return (static_cast<long long>(from) << 32) | static_cast<unsigned int>(to);
}
}  // namespace

void Instance::finalize() {
  const int n = n_vertices();
  for (int i = 0; i < n; ++i)
    if (vertices[static_cast<size_t>(i)].id != i)
      throw InvalidInstance("vertex ids must be dense 0..n-1 in order");

  out_.assign(static_cast<size_t>(n), {});
  in_.assign(static_cast<size_t>(n), {});
  edge_map_.clear();
  for (size_t ei = 0; ei < edges.size(); ++ei) {
    const EdgeAction& e = edges[ei];
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      throw InvalidInstance("edge endpoint out of range");
    if (e.from == e.to) throw InvalidInstance("self-loop edge");
    if (e.duration.sign() <= 0) throw InvalidInstance("edge duration must be positive");
    if (!edge_map_.emplace(edge_key(e.from, e.to), static_cast<int>(ei)).second)
      throw InvalidInstance("duplicate directed edge");
    out_[static_cast<size_t>(e.from)].push_back(static_cast<int>(ei));
    in_[static_cast<size_t>(e.to)].push_back(static_cast<int>(ei));
  }

  for (size_t ai = 0; ai < agents.size(); ++ai) {
    const Agent& a = agents[ai];
    if (a.id != static_cast<int>(ai))
      throw InvalidInstance("agent ids must be dense 0..k-1 in order");
    if (a.start < 0 || a.start >= n || a.goal < 0 || a.goal >= n)
      throw InvalidInstance("agent start/goal out of range");
    if (a.radius.sign() <= 0) throw InvalidInstance("agent radius must be positive");
  }
}

int Instance::edge_index(int from, int to) const {
  auto it = edge_map_.find(edge_key(from, to));
  return it == edge_map_.end() ? -1 : it->second;
}

}  // namespace mapfr
