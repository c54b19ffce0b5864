#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "marp/error.hpp"
#include "marp/mapf/ilp_model.hpp"
#include "marp/mapf/ilp_solver.hpp"
#include "marp/mapf/step_rules.hpp"
#include "marp/mapf/time_expanded_graph.hpp"
#include "marp/mode_graph.hpp"

namespace marp::mapf {

// Per-object timed vertex sequences: paths[j][t] is object j's vertex after
// t steps, for t in [0, n_steps].
struct MapfPlan {
  std::vector<std::vector<VertexId>> paths;
  int n_steps{0};
  std::vector<int> per_object_actions;
  std::vector<double> per_object_cost;  // sum of mode-edge weights traversed
  int horizon{0};                       // horizon of the model that produced it
  double objective{0.0};                // time-weighted min-max objective value

  std::size_t num_objects() const { return paths.size(); }

  MultiModalState state_at(int t) const {
    MultiModalState q;
    for (const auto& p : paths) q.modes.push_back(p.at(static_cast<std::size_t>(t)));
    return q;
  }
};

// Reads object paths out of a solved model, treating a gadget traversal back
// to the same vertex as a stay, then drops the trailing steps in which every
// object rests at its goal.
inline MapfPlan extract_plan(const TimeExpandedGraph& teg, const ModeGraph& g, const IlpModel& model,
                             const IlpSolution& sol, const MultiModalState& q_init) {
  MapfPlan plan;
  plan.horizon = teg.horizon();
  plan.objective = sol.objective;
  const int k = model.num_objects;
  const auto on = [&](int i, int arc) {
    return sol.values[static_cast<std::size_t>(model.var_index(i, arc))] > 0.5;
  };
  for (int i = 0; i < k; ++i) {
    std::vector<VertexId> path{q_init[static_cast<std::size_t>(i)]};
    int node = teg.slice_node(path.back(), 0);
    for (int t = 0; t < teg.horizon(); ++t) {
      // Follow the unit of flow through the step, including gadget nodes.
      while (true) {
        int next = -1;
        for (int a : teg.out_arcs(node))
          if (on(i, a)) {
            next = teg.arc(a).target;
            break;
          }
        if (next < 0) throw Error("solution carries no flow out of a node");
        node = next;
        if (teg.is_slice_node(node)) break;
      }
      path.push_back(teg.vertex_of(node));
    }
    plan.paths.push_back(std::move(path));
  }
  int last_move = -1;
  for (const auto& p : plan.paths)
    for (int t = 0; t < teg.horizon(); ++t)
      if (p[static_cast<std::size_t>(t)] != p[static_cast<std::size_t>(t + 1)]) last_move = std::max(last_move, t);
  plan.n_steps = last_move + 1;
  for (auto& p : plan.paths) {
    p.resize(static_cast<std::size_t>(plan.n_steps + 1));
    int actions = 0;
    double cost = 0.0;
    for (std::size_t t = 0; t + 1 < p.size(); ++t) {
      if (p[t] == p[t + 1]) continue;
      ++actions;
      if (auto e = g.edge_index(p[t], p[t + 1])) cost += g.edges()[*e].weight;
    }
    plan.per_object_actions.push_back(actions);
    plan.per_object_cost.push_back(cost);
  }
  return plan;
}

struct MapfOptions {
  // Double the horizon (up to 4x the base) while the model is infeasible.
  bool escalate{true};
  // Horizon override; zero selects (number of arms) x (number of objects).
  int horizon{0};
  SolveOptions solve;
};

struct MapfResult {
  std::optional<MapfPlan> plan;
  std::vector<int> horizons_tried;
  std::size_t expansions{0};

  bool feasible() const { return plan.has_value(); }
};

inline int default_horizon(const ModeGraph& g, std::size_t num_objects) {
  return std::max(1, static_cast<int>(g.arms().size() * num_objects));
}

// Solves the model at one horizon.
inline MapfResult solve_mapf_at(const ModeGraph& g, const MultiModalState& q_init,
                                const MultiModalState& q_goal, int horizon,
                                const SolveOptions& solve_options = {}) {
  MapfResult result;
  result.horizons_tried.push_back(horizon);
  const auto teg = expand(g, horizon);
  const auto model = build_model(teg, g, q_init, q_goal);
  const auto sol = solve(model, solve_options);
  result.expansions = sol.stats.expansions;
  if (!sol.feasible()) return result;
  result.plan = extract_plan(teg, g, model, sol, q_init);
  return result;
}

// Capacity-constrained MAPF over the mode graph at horizon r*k; with
// escalation, infeasible horizons are doubled up to 4*r*k. Feasibility is
// probed first at each horizon and only the first feasible horizon is
// optimized.
inline MapfResult solve_mapf(const ModeGraph& g, const MultiModalState& q_init,
                             const MultiModalState& q_goal, const MapfOptions& options = {}) {
  const int base = options.horizon > 0 ? options.horizon : default_horizon(g, q_init.size());
  MapfResult result;
  if (q_init == q_goal) {
    if (!validate_state(g, q_init).ok()) throw InputError("start state exceeds capacity");
    MapfPlan plan;
    plan.horizon = base;
    for (VertexId v : q_init.modes) {
      plan.paths.push_back({v});
      plan.per_object_actions.push_back(0);
      plan.per_object_cost.push_back(0.0);
    }
    result.plan = std::move(plan);
    return result;
  }
  const int cap = options.escalate ? 4 * base : base;
  for (int horizon = base; horizon <= cap; horizon *= 2) {
    result.horizons_tried.push_back(horizon);
    const auto teg = expand(g, horizon);
    const auto model = build_model(teg, g, q_init, q_goal);
    SolveOptions probe = options.solve;
    probe.feasibility_only = true;
    const auto feasible = solve(model, probe);
    result.expansions += feasible.stats.expansions;
    if (!feasible.feasible()) continue;
    const auto sol = solve(model, options.solve);
    result.expansions += sol.stats.expansions;
    result.plan = extract_plan(teg, g, model, sol, q_init);
    return result;
  }
  return result;
}

// Step-by-step check of a plan against the mode graph, independent of the
// model builder. Returns human-readable problems; empty means valid.
inline std::vector<std::string> validate_plan(const ModeGraph& g, const MultiModalState& q_init,
                                              const MultiModalState& q_goal, const MapfPlan& plan) {
  std::vector<std::string> problems;
  if (plan.paths.size() != q_init.size() || q_init.size() != q_goal.size()) {
    problems.push_back("plan covers " + std::to_string(plan.paths.size()) + " objects, expected " +
                       std::to_string(q_init.size()));
    return problems;
  }
  for (std::size_t j = 0; j < plan.paths.size(); ++j) {
    const auto& p = plan.paths[j];
    if (p.size() != static_cast<std::size_t>(plan.n_steps + 1)) {
      problems.push_back("object " + std::to_string(j) + " path has wrong length");
      return problems;
    }
    if (p.front() != q_init[j]) problems.push_back("object " + std::to_string(j) + " does not start at its start vertex");
    if (p.back() != q_goal[j]) problems.push_back("object " + std::to_string(j) + " does not end at its goal vertex");
    int moves = 0;
    for (std::size_t t = 0; t + 1 < p.size(); ++t) moves += p[t] != p[t + 1];
    if (j < plan.per_object_actions.size() && plan.per_object_actions[j] != moves)
      problems.push_back("object " + std::to_string(j) + " action count mismatch");
  }
  if (!validate_state(g, plan.state_at(0)).ok()) problems.push_back("initial state exceeds capacity");
  for (int t = 0; t < plan.n_steps; ++t)
    for (const auto& v : step_violations(g, plan.state_at(t), plan.state_at(t + 1)))
      problems.push_back("step " + std::to_string(t) + ": " + v.describe(g));
  return problems;
}

// Plan dump: one tab-separated line per (object, step, vertex id), steps
// ascending, objects in index order within a step.
inline void write_plan(std::ostream& os, const ModeGraph& g, const MapfPlan& plan,
                       const std::vector<std::string>& object_ids) {
  for (int t = 0; t <= plan.n_steps; ++t)
    for (std::size_t j = 0; j < plan.paths.size(); ++j)
      os << object_ids.at(j) << '\t' << t << '\t' << g.vertex(plan.paths[j][static_cast<std::size_t>(t)]).id
         << '\n';
}

// Parses a plan dump back into a plan over the given objects.
inline MapfPlan read_plan(std::istream& is, const ModeGraph& g, const std::vector<std::string>& object_ids) {
  std::map<std::string, std::size_t> index;
  for (std::size_t j = 0; j < object_ids.size(); ++j) index[object_ids[j]] = j;
  std::vector<std::map<int, VertexId>> seen(object_ids.size());
  std::string line;
  int max_step = 0;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string object, step_text, vertex;
    if (!std::getline(ls, object, '\t') || !std::getline(ls, step_text, '\t') || !std::getline(ls, vertex, '\t'))
      throw InputError("plan line " + std::to_string(line_no) + ": expected three tab-separated fields");
    auto it = index.find(object);
    if (it == index.end()) throw InputError("plan line " + std::to_string(line_no) + ": unknown object '" + object + "'");
    int step = 0;
    try {
      std::size_t used = 0;
      step = std::stoi(step_text, &used);
      if (used != step_text.size() || step < 0) throw std::invalid_argument("step");
    } catch (const std::exception&) {
      throw InputError("plan line " + std::to_string(line_no) + ": bad step '" + step_text + "'");
    }
    if (!seen[it->second].emplace(step, g.at(vertex)).second)
      throw InputError("plan line " + std::to_string(line_no) + ": duplicate entry");
    max_step = std::max(max_step, step);
  }
  MapfPlan plan;
  plan.n_steps = max_step;
  for (std::size_t j = 0; j < object_ids.size(); ++j) {
    std::vector<VertexId> path;
    for (int t = 0; t <= max_step; ++t) {
      auto it = seen[j].find(t);
      if (it == seen[j].end())
        throw InputError("plan is missing object '" + object_ids[j] + "' at step " + std::to_string(t));
      path.push_back(it->second);
    }
    int actions = 0;
    double cost = 0.0;
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
      if (path[t] == path[t + 1]) continue;
      ++actions;
      if (auto e = g.edge_index(path[t], path[t + 1])) cost += g.edges()[*e].weight;
    }
    plan.per_object_actions.push_back(actions);
    plan.per_object_cost.push_back(cost);
    plan.paths.push_back(std::move(path));
  }
  return plan;
}

}  // namespace marp::mapf
