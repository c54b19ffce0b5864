#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "marp/error.hpp"
#include "marp/mapf/plan.hpp"
#include "marp/mode_graph.hpp"

namespace marp {

enum class Strategy { Smart, Sequential, Greedy };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Smart: return "smart";
    case Strategy::Sequential: return "sequential";
    case Strategy::Greedy: return "greedy";
  }
  return "?";
}

inline Strategy parse_strategy(const std::string& s) {
  if (s == "smart") return Strategy::Smart;
  if (s == "sequential") return Strategy::Sequential;
  if (s == "greedy") return Strategy::Greedy;
  throw InputError("unknown strategy '" + s + "'");
}

enum class HandoffRole { None, Give, Receive };

// One arm's part in a mode-graph edge traversal. For a pick the counterpart
// is the source region, for a place the target region, for a handoff the
// partner arm.
struct ArmAction {
  VertexId arm{-1};
  EdgeKind kind{EdgeKind::Pick};
  int object{-1};
  VertexId counterpart{-1};
  HandoffRole role{HandoffRole::None};

  friend bool operator==(const ArmAction&, const ArmAction&) = default;
};

// Indexed by arm ordinal (position in ModeGraph::arms()).
using ActionVector = std::vector<std::optional<ArmAction>>;

inline bool all_empty(const ActionVector& v) {
  return std::all_of(v.begin(), v.end(), [](const auto& a) { return !a.has_value(); });
}

inline int arm_ordinal(const ModeGraph& g, VertexId arm) {
  const auto arms = g.arms();
  auto it = std::find(arms.begin(), arms.end(), arm);
  if (it == arms.end()) throw InputError("vertex '" + g.vertex(arm).id + "' is not an arm");
  return static_cast<int>(it - arms.begin());
}

// Arm actions realizing object j's move u -> v (two for a handoff).
inline std::vector<ArmAction> arm_actions_of_move(const ModeGraph& g, int object, VertexId u, VertexId v) {
  auto e = g.edge_index(u, v);
  if (!e) throw InputError("no mode edge " + g.vertex(u).id + "->" + g.vertex(v).id);
  switch (g.edges()[*e].kind) {
    case EdgeKind::Pick: return {{v, EdgeKind::Pick, object, u, HandoffRole::None}};
    case EdgeKind::Place: return {{u, EdgeKind::Place, object, v, HandoffRole::None}};
    case EdgeKind::Handoff:
      return {{u, EdgeKind::Handoff, object, v, HandoffRole::Give},
              {v, EdgeKind::Handoff, object, u, HandoffRole::Receive}};
  }
  return {};
}

// Per-arm actions of the step from -> to.
inline ActionVector arm_actions_of_step(const ModeGraph& g, const MultiModalState& from, const MultiModalState& to) {
  ActionVector out(g.arms().size());
  for (std::size_t j = 0; j < from.size(); ++j) {
    if (from[j] == to[j]) continue;
    for (const auto& a : arm_actions_of_move(g, static_cast<int>(j), from[j], to[j]))
      out[static_cast<std::size_t>(arm_ordinal(g, a.arm))] = a;
  }
  return out;
}

inline std::string describe(const ModeGraph& g, const ArmAction& a, const std::vector<std::string>& object_ids = {}) {
  std::ostringstream os;
  const std::string obj = a.object >= 0 && static_cast<std::size_t>(a.object) < object_ids.size()
                              ? object_ids[static_cast<std::size_t>(a.object)]
                              : "#" + std::to_string(a.object);
  switch (a.kind) {
    case EdgeKind::Pick: os << "pick:" << obj << "@" << g.vertex(a.counterpart).id; break;
    case EdgeKind::Place: os << "place:" << obj << "@" << g.vertex(a.counterpart).id; break;
    case EdgeKind::Handoff:
      os << (a.role == HandoffRole::Give ? "give:" : "receive:") << obj << "@" << g.vertex(a.counterpart).id;
      break;
  }
  return os.str();
}

// H: the first action per arm over the guiding plan(s); G: the actions of
// the next step. remaining_steps estimates the steps left to the goal and
// feeds goal-biased mode selection.
struct Guidance {
  ActionVector heuristic;
  ActionVector goal;
  int remaining_steps{0};
};

namespace detail {

inline void first_actions(const ModeGraph& g, const mapf::MapfPlan& plan, const std::vector<int>& objects,
                          ActionVector& h, std::vector<int>& h_step) {
  for (int t = 0; t < plan.n_steps; ++t)
    for (std::size_t p = 0; p < plan.paths.size(); ++p) {
      const auto& path = plan.paths[p];
      const auto u = path[static_cast<std::size_t>(t)], v = path[static_cast<std::size_t>(t + 1)];
      if (u == v) continue;
      for (const auto& a : arm_actions_of_move(g, objects[p], u, v)) {
        const auto i = static_cast<std::size_t>(arm_ordinal(g, a.arm));
        if (!h[i] || t < h_step[i]) {
          h[i] = a;
          h_step[i] = t;
        }
      }
    }
}

}  // namespace detail

// Guidance for one strategy, cached by multi-modal state. Not thread-safe;
// one instance per planner invocation.
class GuidanceProvider {
 public:
  GuidanceProvider(const ModeGraph& g, MultiModalState goal, Strategy strategy, std::vector<int> priority = {},
                   mapf::MapfOptions options = {})
      : g_(g), goal_(std::move(goal)), strategy_(strategy), priority_(std::move(priority)), options_(options) {
    if (priority_.empty())
      for (std::size_t j = 0; j < goal_.size(); ++j) priority_.push_back(static_cast<int>(j));
    std::vector<int> sorted = priority_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t j = 0; j < sorted.size(); ++j)
      if (sorted.size() != goal_.size() || sorted[j] != static_cast<int>(j))
        throw InputError("priority must be a permutation of the objects");
  }

  Strategy strategy() const { return strategy_; }
  const MultiModalState& goal() const { return goal_; }

  // Solver work performed so far (branch-and-bound expansions).
  std::size_t expansions() const { return expansions_; }

  // Every MAPF plan produced here is re-checked by the step validator.
  std::size_t plans_checked() const { return plans_checked_; }
  std::size_t plan_violations() const { return plan_violations_; }

  // nullopt means infeasible; Greedy always answers.
  const std::optional<Guidance>& at(const MultiModalState& q) {
    auto it = cache_.find(q);
    if (it != cache_.end()) return it->second;
    std::optional<Guidance> out;
    switch (strategy_) {
      case Strategy::Smart: out = smart_(q); break;
      case Strategy::Sequential: out = sequential_(q); break;
      case Strategy::Greedy: out = greedy_(q); break;
    }
    return cache_.emplace(q, std::move(out)).first->second;
  }

 private:
  Guidance empty_() const { return {ActionVector(g_.arms().size()), ActionVector(g_.arms().size()), 0}; }

  void check_(const ModeGraph& g, const MultiModalState& from, const MultiModalState& to, const mapf::MapfPlan& plan) {
    ++plans_checked_;
    plan_violations_ += mapf::validate_plan(g, from, to, plan).size();
  }

  std::optional<Guidance> from_plan_(const ModeGraph& g, const mapf::MapfPlan& plan, const std::vector<int>& objects) {
    Guidance out = empty_();
    std::vector<int> h_step(g_.arms().size(), std::numeric_limits<int>::max());
    detail::first_actions(g, plan, objects, out.heuristic, h_step);
    if (plan.n_steps > 0)
      for (std::size_t p = 0; p < plan.paths.size(); ++p) {
        const auto u = plan.paths[p][0], v = plan.paths[p][1];
        if (u == v) continue;
        for (const auto& a : arm_actions_of_move(g, objects[p], u, v))
          out.goal[static_cast<std::size_t>(arm_ordinal(g_, a.arm))] = a;
      }
    out.remaining_steps = plan.n_steps;
    return out;
  }

  std::optional<Guidance> smart_(const MultiModalState& q) {
    if (q == goal_) return empty_();
    const auto r = mapf::solve_mapf(g_, q, goal_, options_);
    expansions_ += r.expansions;
    if (!r.feasible()) return std::nullopt;
    check_(g_, q, goal_, *r.plan);
    std::vector<int> objects(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) objects[j] = static_cast<int>(j);
    return from_plan_(g_, *r.plan, objects);
  }

  // Shortest single-object plan ignoring every other object.
  const std::optional<mapf::MapfPlan>& single_(VertexId from, VertexId to) {
    auto key = std::pair{from, to};
    auto it = single_cache_.find(key);
    if (it != single_cache_.end()) return it->second;
    const MultiModalState a{{from}}, b{{to}};
    const auto r = mapf::solve_mapf(g_, a, b, options_);
    expansions_ += r.expansions;
    if (r.plan) check_(g_, a, b, *r.plan);
    return single_cache_.emplace(key, r.plan).first->second;
  }

  std::optional<Guidance> sequential_(const MultiModalState& q) {
    int target = -1;
    for (int j : priority_)
      if (q[static_cast<std::size_t>(j)] != goal_[static_cast<std::size_t>(j)]) {
        target = j;
        break;
      }
    if (target < 0) return empty_();
    // Other objects are static obstacles that consume capacity where they sit.
    std::vector<int> caps;
    for (const auto& v : g_.vertices()) caps.push_back(v.capacity);
    int remaining = 0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (static_cast<int>(j) == target) continue;
      --caps[static_cast<std::size_t>(q[j])];
      if (q[j] != goal_[j]) {
        const auto& p = single_(q[j], goal_[j]);
        remaining += p ? p->n_steps : 0;
      }
    }
    if (std::any_of(caps.begin(), caps.end(), [](int c) { return c < 0; })) return std::nullopt;
    const auto t = static_cast<std::size_t>(target);
    if (caps[static_cast<std::size_t>(goal_[t])] < 1) return std::nullopt;
    const auto blocked = g_.with_capacities(caps);
    const MultiModalState a{{q[t]}}, b{{goal_[t]}};
    const auto r = mapf::solve_mapf(blocked, a, b, options_);
    expansions_ += r.expansions;
    if (!r.feasible()) return std::nullopt;
    check_(blocked, a, b, *r.plan);
    auto out = from_plan_(blocked, *r.plan, {target});
    out->remaining_steps += remaining;
    return out;
  }

  std::optional<Guidance> greedy_(const MultiModalState& q) {
    Guidance out = empty_();
    std::vector<int> h_step(g_.arms().size(), std::numeric_limits<int>::max());
    std::vector<ArmAction> receivers;
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (q[j] == goal_[j]) continue;
      const auto& plan = single_(q[j], goal_[j]);
      if (!plan) continue;
      out.remaining_steps = std::max(out.remaining_steps, plan->n_steps);
      detail::first_actions(g_, *plan, {static_cast<int>(j)}, out.heuristic, h_step);
      // The acting arm claims first; the lowest object index wins.
      for (const auto& a : arm_actions_of_move(g_, static_cast<int>(j), plan->paths[0][0], plan->paths[0][1])) {
        if (a.role == HandoffRole::Receive) {
          receivers.push_back(a);
          continue;
        }
        auto& slot = out.goal[static_cast<std::size_t>(arm_ordinal(g_, a.arm))];
        if (!slot) slot = a;
      }
    }
    for (const auto& a : receivers) {
      auto& slot = out.goal[static_cast<std::size_t>(arm_ordinal(g_, a.arm))];
      if (!slot) slot = a;
    }
    return out;
  }

  const ModeGraph& g_;
  MultiModalState goal_;
  Strategy strategy_;
  std::vector<int> priority_;
  mapf::MapfOptions options_;
  std::size_t expansions_{0};
  std::size_t plans_checked_{0};
  std::size_t plan_violations_{0};
  std::map<MultiModalState, std::optional<Guidance>> cache_;
  std::map<std::pair<VertexId, VertexId>, std::optional<mapf::MapfPlan>> single_cache_;
};

inline std::optional<Guidance> smart_guidance(const ModeGraph& g, const MultiModalState& q,
                                              const MultiModalState& goal) {
  GuidanceProvider p(g, goal, Strategy::Smart);
  return p.at(q);
}

inline std::optional<Guidance> sequential_guidance(const ModeGraph& g, const MultiModalState& q,
                                                   const MultiModalState& goal, std::vector<int> priority = {}) {
  GuidanceProvider p(g, goal, Strategy::Sequential, std::move(priority));
  return p.at(q);
}

inline Guidance greedy_guidance(const ModeGraph& g, const MultiModalState& q, const MultiModalState& goal) {
  GuidanceProvider p(g, goal, Strategy::Greedy);
  return *p.at(q);
}

}  // namespace marp
