#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "marp/error.hpp"
#include "marp/geometry.hpp"
#include "marp/guidance.hpp"
#include "marp/mode_graph.hpp"

namespace marp {

// Where an object is: a region with a pose, or held by an arm (pose unused).
struct ObjectLocation {
  VertexId vertex{-1};
  Point pose;

  friend bool operator==(const ObjectLocation&, const ObjectLocation&) = default;
};

struct TaskState {
  std::vector<Point> arms;  // per arm ordinal
  std::vector<ObjectLocation> objects;
  std::vector<double> arc;  // accumulated per-arm arc length

  MultiModalState projection() const {
    MultiModalState q;
    for (const auto& o : objects) q.modes.push_back(o.vertex);
    return q;
  }

  double cost() const { return arc.empty() ? 0.0 : *std::max_element(arc.begin(), arc.end()); }
};

// Everything the planner needs about one instance.
struct PlanningProblem {
  Workspace workspace;
  ModeGraph graph;
  std::vector<std::string> object_ids;
  TaskState start;
  MultiModalState goal;
  double footprint_radius{0.0};

  // start_locations: per object (region id, pose); goal_regions: per object.
  static PlanningProblem make(const Workspace& w, std::vector<std::string> object_ids,
                              const std::vector<std::pair<std::string, Point>>& start_locations,
                              const std::vector<std::string>& goal_regions, double footprint_radius) {
    PlanningProblem p;
    p.workspace = w;
    p.graph = build_mode_graph(w);
    p.object_ids = std::move(object_ids);
    p.footprint_radius = footprint_radius;
    if (start_locations.size() != p.object_ids.size() || goal_regions.size() != p.object_ids.size())
      throw InputError("object lists differ in length");
    for (const auto& a : w.arms) {
      p.start.arms.push_back(a.base);
      p.start.arc.push_back(0.0);
    }
    std::vector<std::pair<std::string, std::string>> start_arr, goal_arr;
    for (std::size_t j = 0; j < p.object_ids.size(); ++j) {
      const auto v = p.graph.at(start_locations[j].first);
      p.start.objects.push_back({v, start_locations[j].second});
      start_arr.emplace_back(p.object_ids[j], start_locations[j].first);
      goal_arr.emplace_back(p.object_ids[j], goal_regions[j]);
    }
    mode_of(p.graph, start_arr);
    p.goal = mode_of(p.graph, goal_arr);
    for (VertexId v : p.goal.modes)
      if (p.graph.is_arm(v)) throw InputError("goals must be regions");
    return p;
  }

  const RegionSpec& region(VertexId v) const {
    const auto& id = graph.vertex(v).id;
    for (const auto& r : workspace.regions)
      if (r.id == id) return r;
    throw InputError("'" + id + "' is not a region");
  }

  std::size_t num_arms() const { return workspace.arms.size(); }
};

// One synchronized step: per-arm motion (waypoints after the step's start
// configuration, the last being the grounding point), the actions realized
// at the end, and object locations afterwards.
struct SolutionStep {
  std::vector<std::vector<Point>> arm_paths;
  ActionVector actions;
  std::vector<ObjectLocation> objects;

  bool has_action() const { return !all_empty(actions); }
};

struct Solution {
  std::vector<SolutionStep> steps;
  std::vector<double> arc;  // per-arm total arc length
  double makespan{0.0};
  int n_action_instants{0};
  double initial_solution_ms{0.0};
  std::vector<std::pair<double, double>> cost_history;  // (clock ms, makespan)
  int mapf_steps_at_root{-1};
};

}  // namespace marp
