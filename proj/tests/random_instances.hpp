#pragma once

#include <optional>
#include <string>

#include "marp/mode_graph.hpp"
#include "marp/random.hpp"

namespace marp::testing {

struct SmallInstance {
  ModeGraph graph;
  MultiModalState init;
  MultiModalState goal;
};

// A uniformly random capacity-respecting arrangement of k objects, or
// nothing if k exceeds the total capacity.
inline std::optional<MultiModalState> random_state(Rng& rng, const ModeGraph& g, std::size_t k) {
  std::vector<int> free;
  int total = 0;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    free.push_back(g.vertex(static_cast<VertexId>(v)).capacity);
    total += free.back();
  }
  if (static_cast<int>(k) > total) return std::nullopt;
  MultiModalState q;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<VertexId> open;
    for (std::size_t v = 0; v < free.size(); ++v)
      if (free[v] > 0) open.push_back(static_cast<VertexId>(v));
    const VertexId v = open[rng.index(open.size())];
    --free[static_cast<std::size_t>(v)];
    q.modes.push_back(v);
  }
  return q;
}

// 1-3 arms on a line, enough regions to make 2-5 vertices, region
// capacities in {1, 2}, and 1-3 objects. Reach and handoff distance vary,
// so some instances are disconnected and some infeasible.
inline SmallInstance random_small_instance(Rng& rng) {
  for (;;) {
    Workspace w;
    const int arms = 1 + static_cast<int>(rng.index(3));
    const int regions = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(5 - arms)));
    for (int i = 0; i < arms; ++i)
      w.arms.push_back({"a" + std::to_string(i + 1), {static_cast<double>(i), 0, 0}, rng.uniform(0.6, 1.4)});
    for (int s = 0; s < regions; ++s) {
      const auto& host = w.arms[rng.index(w.arms.size())];
      const Point c = rng.in_disk(host.base, host.reach);
      w.regions.push_back({"s" + std::to_string(s + 1), c, 1 + static_cast<int>(rng.index(2)), 0.1});
    }
    w.handoff_distance = rng.uniform(0.5, 1.5);
    SmallInstance inst{build_mode_graph(w), {}, {}};
    const std::size_t k = 1 + rng.index(3);
    auto a = random_state(rng, inst.graph, k);
    auto b = random_state(rng, inst.graph, k);
    if (!a || !b) continue;
    inst.init = *a;
    inst.goal = *b;
    return inst;
  }
}

}  // namespace marp::testing
