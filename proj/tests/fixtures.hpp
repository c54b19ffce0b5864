#pragma once

#include "marp/mode_graph.hpp"
#include "marp/planner/task_state.hpp"

namespace marp::testing {

// Two arms between two capacity-2 regions.
inline Workspace swap2_workspace() {
  Workspace w;
  w.arms = {{"L", {0, 0, 0}, 1.2}, {"R", {2, 0, 0}, 1.2}};
  w.regions = {{"S1", {-0.5, 0, 0}, 2, 0.2}, {"S2", {2.5, 0, 0}, 2, 0.2}};
  w.handoff_distance = 2.0;
  return w;
}

// Two arms, unit-capacity regions and a shared buffer between them.
inline Workspace swapbuf_workspace() {
  Workspace w;
  w.arms = {{"L", {0, 0, 0}, 1.5}, {"R", {2, 0, 0}, 1.5}};
  w.regions = {{"P1", {0, 1, 0}, 1, 0.1}, {"P2", {2, 1, 0}, 1, 0.1}, {"Bf", {1, 1, 0}, 1, 0.1}};
  w.handoff_distance = 2.0;
  return w;
}

inline MultiModalState state(const ModeGraph& g, std::initializer_list<const char*> ids) {
  MultiModalState q;
  for (const char* id : ids) q.modes.push_back(g.at(id));
  return q;
}

// A in S1 and B in S2 trade places.
inline PlanningProblem swap2_problem() {
  return PlanningProblem::make(swap2_workspace(), {"A", "B"}, {{"S1", {-0.5, 0, 0}}, {"S2", {2.5, 0, 0}}},
                               {"S2", "S1"}, 0.03);
}

inline PlanningProblem swapbuf_problem() {
  return PlanningProblem::make(swapbuf_workspace(), {"A", "B"}, {{"P1", {0, 1, 0}}, {"P2", {2, 1, 0}}},
                               {"P2", "P1"}, 0.03);
}

}  // namespace marp::testing
