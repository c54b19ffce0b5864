#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "marp/error.hpp"
#include "marp/mapf/step_rules.hpp"
#include "marp/mode_graph.hpp"

// Exhaustive breadth-first search over joint multi-modal states. This is the
// ground truth the ILP route is checked against; it works on the mode graph
// directly and never touches the time-expanded model.
namespace marp::mapf::oracle {

inline constexpr std::size_t kDefaultStateBound = 1'000'000;

struct StateHash {
  std::size_t operator()(const std::vector<VertexId>& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (VertexId x : v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

// Calls `emit(next)` for every joint successor of `q` (including the all-stay
// successor). Per-object moves are chosen in index order; partial
// assignments are cut as soon as a monotone count exceeds its limit.
template <typename Emit>
void for_each_successor(const ModeGraph& g, const MultiModalState& q, Emit&& emit) {
  const std::size_t n = g.num_vertices();
  const std::size_t k = q.size();
  std::vector<int> occupancy(n, 0);
  std::vector<int> throughput(n, 0);
  std::map<std::pair<VertexId, VertexId>, int> crossing;
  MultiModalState next = q;

  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == k) {
      emit(next);
      return;
    }
    const VertexId u = q[j];
    // stay
    if (occupancy[u] + 1 <= g.capacity(u)) {
      ++occupancy[u];
      next.modes[j] = u;
      rec(j + 1);
      --occupancy[u];
    }
    for (std::size_t e : g.out_edges(u)) {
      const VertexId v = g.edges()[e].to;
      const auto key = std::pair{std::min(u, v), std::max(u, v)};
      if (occupancy[v] + 1 > g.capacity(v)) continue;
      if (throughput[u] + 1 > g.capacity(u) || throughput[v] + 1 > g.capacity(v)) continue;
      if (crossing[key] >= 1) continue;
      ++occupancy[v];
      ++throughput[u];
      ++throughput[v];
      ++crossing[key];
      next.modes[j] = v;
      rec(j + 1);
      --occupancy[v];
      --throughput[u];
      --throughput[v];
      --crossing[key];
    }
  };
  rec(0);
}

// Minimum number of synchronized steps from init to goal, or nullopt when
// the goal is not reachable within step_cap steps.
inline std::optional<int> min_steps(const ModeGraph& g, const MultiModalState& init,
                                    const MultiModalState& goal, int step_cap,
                                    std::size_t state_bound = kDefaultStateBound) {
  if (init.size() != goal.size()) throw InputError("start and goal sizes differ");
  if (step_cap < 0) throw InputError("step_cap must be >= 0");
  if (!validate_state(g, init).ok() || !validate_state(g, goal).ok())
    throw InputError("start or goal violates capacity");
  if (init == goal) return 0;

  std::unordered_set<std::vector<VertexId>, StateHash> seen{init.modes};
  std::vector<MultiModalState> frontier{init};
  for (int step = 1; step <= step_cap && !frontier.empty(); ++step) {
    std::vector<MultiModalState> next_frontier;
    bool found = false;
    for (const auto& q : frontier) {
      for_each_successor(g, q, [&](const MultiModalState& s) {
        if (found) return;
        if (!seen.insert(s.modes).second) return;
        if (seen.size() > state_bound) throw SearchLimitError("oracle exceeded its state bound");
        if (s == goal) found = true;
        next_frontier.push_back(s);
      });
      if (found) return step;
    }
    frontier = std::move(next_frontier);
  }
  return std::nullopt;
}

// Minimum over schedules (within step_cap steps) of the largest number of
// non-stay moves any single object makes.
inline std::optional<int> min_max_actions(const ModeGraph& g, const MultiModalState& init,
                                          const MultiModalState& goal, int step_cap,
                                          std::size_t state_bound = kDefaultStateBound) {
  if (init.size() != goal.size()) throw InputError("start and goal sizes differ");
  if (step_cap < 0) throw InputError("step_cap must be >= 0");
  if (!validate_state(g, init).ok() || !validate_state(g, goal).ok())
    throw InputError("start or goal violates capacity");
  if (init == goal) return 0;

  const std::size_t k = init.size();
  // Key: modes followed by per-object action counts. A pair reached at an
  // earlier step dominates the same pair later because waiting is free.
  std::unordered_set<std::vector<VertexId>, StateHash> seen;
  const auto key_of = [&](const MultiModalState& q, const std::vector<int>& counts) {
    std::vector<VertexId> key = q.modes;
    key.insert(key.end(), counts.begin(), counts.end());
    return key;
  };
  struct Entry {
    MultiModalState q;
    std::vector<int> counts;
  };
  std::vector<Entry> frontier{{init, std::vector<int>(k, 0)}};
  seen.insert(key_of(init, frontier.front().counts));
  std::optional<int> best;
  for (int step = 1; step <= step_cap && !frontier.empty(); ++step) {
    std::vector<Entry> next_frontier;
    for (const auto& entry : frontier) {
      for_each_successor(g, entry.q, [&](const MultiModalState& s) {
        std::vector<int> counts = entry.counts;
        for (std::size_t j = 0; j < k; ++j)
          if (s[j] != entry.q[j]) ++counts[j];
        const int worst = *std::max_element(counts.begin(), counts.end());
        if (best && worst >= *best) return;
        if (!seen.insert(key_of(s, counts)).second) return;
        if (seen.size() > state_bound) throw SearchLimitError("oracle exceeded its state bound");
        if (s == goal) {
          best = worst;
          return;
        }
        next_frontier.push_back({s, std::move(counts)});
      });
    }
    frontier = std::move(next_frontier);
  }
  return best;
}

}  // namespace marp::mapf::oracle
