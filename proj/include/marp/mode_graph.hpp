#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "marp/error.hpp"
#include "marp/geometry.hpp"

namespace marp {

struct ArmSpec {
  std::string id;
  Point base;
  double reach{0.0};
};

struct RegionSpec {
  std::string id;
  Point centroid;
  int capacity{1};
  double extent{0.0};  // radius used for pose sampling
};

struct Workspace {
  std::vector<ArmSpec> arms;
  std::vector<RegionSpec> regions;
  double handoff_distance{0.0};

  // Throws InputError on duplicate ids, non-positive reach or handoff
  // distance, and capacities below one.
  void validate() const {
    std::set<std::string> ids;
    for (const auto& a : arms) {
      if (a.id.empty()) throw InputError("arm with empty id");
      if (!ids.insert(a.id).second) throw InputError("duplicate id '" + a.id + "'");
      if (!(a.reach > 0.0)) throw InputError("arm '" + a.id + "' must have reach > 0");
    }
    for (const auto& r : regions) {
      if (r.id.empty()) throw InputError("region with empty id");
      if (!ids.insert(r.id).second) throw InputError("duplicate id '" + r.id + "'");
      if (r.capacity < 1) throw InputError("region '" + r.id + "' must have capacity >= 1");
      if (r.extent < 0.0) throw InputError("region '" + r.id + "' has negative extent");
    }
    if (!(handoff_distance > 0.0)) throw InputError("handoff_distance must be > 0");
  }
};

using VertexId = int;

enum class VertexKind { Region, Arm };

enum class EdgeKind { Pick, Place, Handoff };

inline const char* to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Pick: return "pick";
    case EdgeKind::Place: return "place";
    case EdgeKind::Handoff: return "handoff";
  }
  return "?";
}

struct ModeVertex {
  std::string id;
  VertexKind kind{VertexKind::Region};
  Point position;  // region centroid or arm base
  int capacity{1};
};

struct ModeEdge {
  EdgeKind kind{EdgeKind::Pick};
  VertexId from{-1};
  VertexId to{-1};
  double weight{0.0};

  friend bool operator==(const ModeEdge&, const ModeEdge&) = default;
};

// Object-centric mode graph: vertices are placement regions and arms, edges
// are pick / place / handoff actions, capacities bound vertex occupancy.
// Immutable after construction.
class ModeGraph {
 public:
  ModeGraph() = default;

  ModeGraph(std::vector<ModeVertex> vertices, std::vector<ModeEdge> edges)
      : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    index_();
    check_invariants_();
  }

  std::span<const ModeVertex> vertices() const { return vertices_; }
  std::span<const ModeEdge> edges() const { return edges_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  const ModeVertex& vertex(VertexId v) const { return vertices_.at(static_cast<std::size_t>(v)); }
  int capacity(VertexId v) const { return vertex(v).capacity; }
  bool is_arm(VertexId v) const { return vertex(v).kind == VertexKind::Arm; }

  std::span<const VertexId> arms() const { return arms_; }
  std::span<const VertexId> regions() const { return regions_; }

  std::optional<VertexId> find(const std::string& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
  }

  VertexId at(const std::string& id) const {
    if (auto v = find(id)) return *v;
    throw InputError("unknown mode vertex '" + id + "'");
  }

  // Index of the edge from u to v, if any.
  std::optional<std::size_t> edge_index(VertexId u, VertexId v) const {
    auto it = edge_by_pair_.find({u, v});
    if (it == edge_by_pair_.end()) return std::nullopt;
    return it->second;
  }

  bool has_edge(VertexId u, VertexId v) const { return edge_index(u, v).has_value(); }

  // Outgoing edge indices of v, in edge order.
  std::span<const std::size_t> out_edges(VertexId v) const {
    return out_.at(static_cast<std::size_t>(v));
  }

  // Same vertices and edges with replaced capacities. Capacities may be zero
  // here (used to model vertices blocked by static objects).
  ModeGraph with_capacities(std::span<const int> capacities) const {
    if (capacities.size() != vertices_.size()) throw InputError("capacity vector size mismatch");
    ModeGraph g = *this;
    for (std::size_t i = 0; i < capacities.size(); ++i) {
      if (capacities[i] < 0) throw InputError("negative capacity");
      g.vertices_[i].capacity = capacities[i];
    }
    g.relaxed_capacity_ = true;
    return g;
  }

 private:
  void index_() {
    out_.assign(vertices_.size(), {});
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (!by_id_.emplace(vertices_[i].id, static_cast<VertexId>(i)).second)
        throw InputError("duplicate vertex id '" + vertices_[i].id + "'");
      (vertices_[i].kind == VertexKind::Arm ? arms_ : regions_).push_back(static_cast<VertexId>(i));
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto& edge = edges_[e];
      if (edge.from < 0 || edge.to < 0 || static_cast<std::size_t>(edge.from) >= vertices_.size() ||
          static_cast<std::size_t>(edge.to) >= vertices_.size())
        throw InputError("edge endpoint out of range");
      if (!edge_by_pair_.emplace(std::pair{edge.from, edge.to}, e).second)
        throw InputError("parallel edges between '" + vertices_[edge.from].id + "' and '" +
                         vertices_[edge.to].id + "'");
      out_[static_cast<std::size_t>(edge.from)].push_back(e);
    }
  }

  void check_invariants_() const {
    for (const auto& v : vertices_) {
      if (v.kind == VertexKind::Arm && v.capacity != 1 && !relaxed_capacity_)
        throw InputError("arm vertex '" + v.id + "' must have capacity 1");
      if (v.capacity < 0) throw InputError("negative capacity at '" + v.id + "'");
    }
    for (const auto& e : edges_) {
      const auto& a = vertices_[static_cast<std::size_t>(e.from)];
      const auto& b = vertices_[static_cast<std::size_t>(e.to)];
      if (e.from == e.to) throw InputError("self-loop at '" + a.id + "'");
      if (!(e.weight > 0.0)) throw InputError("edge weights must be positive");
      const bool ok = (e.kind == EdgeKind::Pick && a.kind == VertexKind::Region &&
                       b.kind == VertexKind::Arm) ||
                      (e.kind == EdgeKind::Place && a.kind == VertexKind::Arm &&
                       b.kind == VertexKind::Region) ||
                      (e.kind == EdgeKind::Handoff && a.kind == VertexKind::Arm &&
                       b.kind == VertexKind::Arm);
      if (!ok) throw InputError("edge kind does not match endpoints " + a.id + "->" + b.id);
      auto rev = edge_by_pair_.find({e.to, e.from});
      if (rev == edge_by_pair_.end() || edges_[rev->second].weight != e.weight)
        throw InputError("edge " + a.id + "->" + b.id + " lacks a symmetric reverse edge");
    }
  }

  std::vector<ModeVertex> vertices_;
  std::vector<ModeEdge> edges_;
  std::vector<VertexId> arms_;
  std::vector<VertexId> regions_;
  std::map<std::string, VertexId> by_id_;
  std::map<std::pair<VertexId, VertexId>, std::size_t> edge_by_pair_;
  std::vector<std::vector<std::size_t>> out_;
  bool relaxed_capacity_{false};
};

// Builds the mode graph of a workspace. Regions come first (workspace
// order), then arms. An arm reaches a region when the base-to-centroid
// distance is at most its reach; arms hand off when their bases are within
// the workspace handoff distance. Edge weights are endpoint distances.
inline ModeGraph build_mode_graph(const Workspace& w) {
  w.validate();
  std::vector<ModeVertex> vertices;
  vertices.reserve(w.regions.size() + w.arms.size());
  for (const auto& r : w.regions)
    vertices.push_back({r.id, VertexKind::Region, r.centroid, r.capacity});
  const auto arm_vertex = [&](std::size_t i) { return static_cast<VertexId>(w.regions.size() + i); };
  for (const auto& a : w.arms) vertices.push_back({a.id, VertexKind::Arm, a.base, 1});

  std::vector<ModeEdge> edges;
  for (std::size_t s = 0; s < w.regions.size(); ++s) {
    const auto& region = w.regions[s];
    bool served = false;
    for (std::size_t i = 0; i < w.arms.size(); ++i) {
      const auto& arm = w.arms[i];
      const double d = distance(arm.base, region.centroid);
      if (d > arm.reach) continue;
      served = true;
      // Coincident base and centroid would give a zero weight.
      const double weight = d > 0.0 ? d : 1e-9;
      edges.push_back({EdgeKind::Pick, static_cast<VertexId>(s), arm_vertex(i), weight});
      edges.push_back({EdgeKind::Place, arm_vertex(i), static_cast<VertexId>(s), weight});
    }
    if (!served) throw InputError("region '" + region.id + "' is not reachable by any arm");
  }
  for (std::size_t i = 0; i < w.arms.size(); ++i) {
    for (std::size_t j = i + 1; j < w.arms.size(); ++j) {
      const double d = distance(w.arms[i].base, w.arms[j].base);
      if (d > w.handoff_distance) continue;
      const double weight = d > 0.0 ? d : 1e-9;
      edges.push_back({EdgeKind::Handoff, arm_vertex(i), arm_vertex(j), weight});
      edges.push_back({EdgeKind::Handoff, arm_vertex(j), arm_vertex(i), weight});
    }
  }
  return ModeGraph(std::move(vertices), std::move(edges));
}

// Assignment of each object (by index) to the mode vertex it occupies.
struct MultiModalState {
  std::vector<VertexId> modes;

  std::size_t size() const { return modes.size(); }
  VertexId operator[](std::size_t j) const { return modes[j]; }
  friend bool operator==(const MultiModalState&, const MultiModalState&) = default;
  friend auto operator<=>(const MultiModalState&, const MultiModalState&) = default;
};

struct CapacityViolation {
  VertexId vertex{-1};
  int occupancy{0};
  int capacity{0};
};

struct StateReport {
  std::vector<CapacityViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Reports every vertex whose occupancy exceeds its capacity, and ids that
// are not graph vertices (reported with capacity -1).
inline StateReport validate_state(const ModeGraph& g, const MultiModalState& q) {
  StateReport report;
  std::vector<int> occupancy(g.num_vertices(), 0);
  for (VertexId v : q.modes) {
    if (v < 0 || static_cast<std::size_t>(v) >= g.num_vertices()) {
      report.violations.push_back({v, 1, -1});
      continue;
    }
    ++occupancy[static_cast<std::size_t>(v)];
  }
  for (std::size_t v = 0; v < occupancy.size(); ++v) {
    const int cap = g.capacity(static_cast<VertexId>(v));
    if (occupancy[v] > cap) report.violations.push_back({static_cast<VertexId>(v), occupancy[v], cap});
  }
  return report;
}

// Maps (object, region-or-arm id) pairs to a multi-modal state; the object
// order of the input is the object index order.
inline MultiModalState mode_of(const ModeGraph& g,
                               std::span<const std::pair<std::string, std::string>> arrangement) {
  MultiModalState q;
  q.modes.reserve(arrangement.size());
  std::set<std::string> seen;
  for (const auto& [object, location] : arrangement) {
    if (!seen.insert(object).second) throw InputError("object '" + object + "' listed twice");
    q.modes.push_back(g.at(location));
  }
  for (const auto& v : validate_state(g, q).violations)
    throw CapacityError(g.vertex(v.vertex).id, v.occupancy, v.capacity);
  return q;
}

inline std::string describe(const ModeGraph& g, const MultiModalState& q) {
  std::string out = "(";
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (j) out += ",";
    out += g.vertex(q[j]).id;
  }
  return out + ")";
}

}  // namespace marp
