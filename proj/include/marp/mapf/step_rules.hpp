#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "marp/mode_graph.hpp"

namespace marp::mapf {

// Rules for one synchronized step over the mode graph, written directly
// against the graph (no time-expanded structures):
//   - every object stays or crosses one mode edge;
//   - occupancy after the step is within capacity at every vertex;
//   - throughput: objects leaving plus objects entering a vertex by
//     non-stay moves is within its capacity;
//   - at most one object crosses each unordered vertex pair.
struct StepViolation {
  enum class Kind { Arity, NoEdge, Occupancy, Throughput, HeadOn };
  Kind kind{Kind::Arity};
  VertexId a{-1};
  VertexId b{-1};
  int object{-1};
  int count{0};
  int limit{0};

  std::string describe(const ModeGraph& g) const {
    std::ostringstream os;
    const auto name = [&](VertexId v) {
      return v >= 0 && static_cast<std::size_t>(v) < g.num_vertices() ? g.vertex(v).id
                                                                       : std::to_string(v);
    };
    switch (kind) {
      case Kind::Arity: os << "state sizes differ"; break;
      case Kind::NoEdge:
        os << "object " << object << " jumps " << name(a) << "->" << name(b) << " without an edge";
        break;
      case Kind::Occupancy:
        os << "occupancy " << count << " > " << limit << " at " << name(a);
        break;
      case Kind::Throughput:
        os << "throughput " << count << " > " << limit << " at " << name(a);
        break;
      case Kind::HeadOn:
        os << count << " objects cross " << name(a) << "<->" << name(b) << " in one step";
        break;
    }
    return os.str();
  }
};

inline std::vector<StepViolation> step_violations(const ModeGraph& g, const MultiModalState& from,
                                                  const MultiModalState& to) {
  using Kind = StepViolation::Kind;
  std::vector<StepViolation> out;
  if (from.size() != to.size()) {
    out.push_back({Kind::Arity});
    return out;
  }
  const std::size_t n = g.num_vertices();
  std::vector<int> occupancy(n, 0);
  std::vector<int> throughput(n, 0);
  std::map<std::pair<VertexId, VertexId>, int> crossings;
  for (std::size_t j = 0; j < from.size(); ++j) {
    const VertexId u = from[j];
    const VertexId v = to[j];
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n) {
      out.push_back({Kind::NoEdge, u, v, static_cast<int>(j)});
      continue;
    }
    ++occupancy[static_cast<std::size_t>(v)];
    if (u == v) continue;
    if (!g.has_edge(u, v)) out.push_back({Kind::NoEdge, u, v, static_cast<int>(j)});
    ++throughput[static_cast<std::size_t>(u)];
    ++throughput[static_cast<std::size_t>(v)];
    ++crossings[{std::min(u, v), std::max(u, v)}];
  }
  for (std::size_t v = 0; v < n; ++v) {
    const int cap = g.capacity(static_cast<VertexId>(v));
    if (occupancy[v] > cap)
      out.push_back({Kind::Occupancy, static_cast<VertexId>(v), -1, -1, occupancy[v], cap});
    if (throughput[v] > cap)
      out.push_back({Kind::Throughput, static_cast<VertexId>(v), -1, -1, throughput[v], cap});
  }
  for (const auto& [pair, count] : crossings)
    if (count > 1) out.push_back({Kind::HeadOn, pair.first, pair.second, -1, count, 1});
  return out;
}

inline bool step_ok(const ModeGraph& g, const MultiModalState& from, const MultiModalState& to) {
  return step_violations(g, from, to).empty();
}

}  // namespace marp::mapf
