#pragma once

#include <set>
#include <span>
#include <utility>
#include <vector>

#include "marp/error.hpp"
#include "marp/mode_graph.hpp"

namespace marp::mapf {

enum class ArcKind { Stay, GadgetIn, GadgetCore, GadgetOut };

struct Arc {
  int id{-1};
  int source{-1};  // node index
  int target{-1};  // node index
  int step{0};     // arc runs from slice `step` to slice `step + 1`
  double base_cost{0.0};
  ArcKind kind{ArcKind::Stay};
  int gadget{-1};
};

// Merge-split structure replacing one bidirectional mode-edge pair for one
// step: u_t -> merge, v_t -> merge, merge -> split (core), split -> u_{t+1},
// split -> v_{t+1}. Only the core arc carries the edge weight.
struct Gadget {
  VertexId u{-1};
  VertexId v{-1};
  int step{0};
  int merge{-1};
  int split{-1};
  int core_arc{-1};
  double weight{0.0};
};

// Mode vertices replicated over slices 0..T, with stay arcs between
// consecutive slices and one gadget per bidirectional pair per step. Arc ids
// are ordered by step; within a step, stay arcs (vertex order) precede the
// gadget arcs (pair order, each gadget as in_u, in_v, core, out_u, out_v).
class TimeExpandedGraph {
 public:
  TimeExpandedGraph(const ModeGraph& g, int horizon)
      : horizon_(horizon), num_vertices_(static_cast<int>(g.num_vertices())) {
    if (horizon < 1) throw InputError("time-expanded graph needs horizon T >= 1");
    std::vector<std::pair<VertexId, VertexId>> pairs;
    std::vector<double> weights;
    std::set<std::pair<VertexId, VertexId>> seen;
    for (const auto& e : g.edges()) {
      const auto key = std::pair{std::min(e.from, e.to), std::max(e.from, e.to)};
      if (!g.has_edge(e.to, e.from)) throw InputError("mode edge without reverse edge");
      if (seen.insert(key).second) {
        pairs.push_back(key);
        weights.push_back(e.weight);
      }
    }
    pairs_per_step_ = static_cast<int>(pairs.size());
    const int slice_nodes = (horizon_ + 1) * num_vertices_;
    num_nodes_ = slice_nodes + 2 * pairs_per_step_ * horizon_;

    const auto add_arc = [&](int s, int t, int step, double cost, ArcKind kind, int gadget) {
      Arc a{static_cast<int>(arcs_.size()), s, t, step, cost, kind, gadget};
      arcs_.push_back(a);
      return a.id;
    };
    for (int t = 0; t < horizon_; ++t) {
      for (VertexId v = 0; v < num_vertices_; ++v)
        add_arc(slice_node(v, t), slice_node(v, t + 1), t, 0.0, ArcKind::Stay, -1);
      for (int p = 0; p < pairs_per_step_; ++p) {
        const auto [u, v] = pairs[static_cast<std::size_t>(p)];
        Gadget gd;
        gd.u = u;
        gd.v = v;
        gd.step = t;
        gd.merge = slice_nodes + 2 * (t * pairs_per_step_ + p);
        gd.split = gd.merge + 1;
        gd.weight = weights[static_cast<std::size_t>(p)];
        const int gid = static_cast<int>(gadgets_.size());
        add_arc(slice_node(u, t), gd.merge, t, 0.0, ArcKind::GadgetIn, gid);
        add_arc(slice_node(v, t), gd.merge, t, 0.0, ArcKind::GadgetIn, gid);
        gd.core_arc = add_arc(gd.merge, gd.split, t, gd.weight, ArcKind::GadgetCore, gid);
        add_arc(gd.split, slice_node(u, t + 1), t, 0.0, ArcKind::GadgetOut, gid);
        add_arc(gd.split, slice_node(v, t + 1), t, 0.0, ArcKind::GadgetOut, gid);
        gadgets_.push_back(gd);
      }
    }
    in_.assign(static_cast<std::size_t>(num_nodes_), {});
    out_.assign(static_cast<std::size_t>(num_nodes_), {});
    for (const auto& a : arcs_) {
      out_[static_cast<std::size_t>(a.source)].push_back(a.id);
      in_[static_cast<std::size_t>(a.target)].push_back(a.id);
    }
  }

  int horizon() const { return horizon_; }
  int num_vertices() const { return num_vertices_; }
  int num_nodes() const { return num_nodes_; }
  int num_slice_nodes() const { return (horizon_ + 1) * num_vertices_; }
  int gadgets_per_step() const { return pairs_per_step_; }

  int slice_node(VertexId v, int t) const { return t * num_vertices_ + v; }
  bool is_slice_node(int node) const { return node < num_slice_nodes(); }
  VertexId vertex_of(int node) const { return node % num_vertices_; }
  int slice_of(int node) const { return node / num_vertices_; }

  std::span<const Arc> arcs() const { return arcs_; }
  const Arc& arc(int id) const { return arcs_.at(static_cast<std::size_t>(id)); }
  std::span<const Gadget> gadgets() const { return gadgets_; }
  std::span<const int> in_arcs(int node) const { return in_.at(static_cast<std::size_t>(node)); }
  std::span<const int> out_arcs(int node) const { return out_.at(static_cast<std::size_t>(node)); }

 private:
  int horizon_{0};
  int num_vertices_{0};
  int pairs_per_step_{0};
  int num_nodes_{0};
  std::vector<Arc> arcs_;
  std::vector<Gadget> gadgets_;
  std::vector<std::vector<int>> in_;
  std::vector<std::vector<int>> out_;
};

inline TimeExpandedGraph expand(const ModeGraph& g, int horizon) {
  return TimeExpandedGraph(g, horizon);
}

}  // namespace marp::mapf
