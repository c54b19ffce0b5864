#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "marp/planner/motion.hpp"
#include "marp/planner/planner.hpp"
#include "marp/planner/trace.hpp"

using namespace marp;
using marp::testing::swap2_problem;
using marp::testing::swap2_workspace;
using marp::testing::swapbuf_problem;

namespace {

PlannerConfig pure(Strategy s, std::uint64_t seed) {
  PlannerConfig c;
  c.strategy = s;
  c.pure_guidance = true;
  c.seed = seed;
  c.time_budget_ms = 500;
  return c;
}

std::vector<int> actions_per_object(const Solution& sol, std::size_t k) {
  std::vector<int> n(k, 0);
  for (const auto& st : sol.steps)
    for (const auto& a : st.actions)
      if (a && a->role != HandoffRole::Receive) ++n[static_cast<std::size_t>(a->object)];
  return n;
}

bool has_action(const std::vector<TransitionSample>& samples, EdgeKind kind, VertexId arm, int object) {
  for (const auto& s : samples)
    for (const auto& a : s.actions)
      if (a && a->kind == kind && a->arm == arm && a->object == object) return true;
  return false;
}

}  // namespace

TEST(Motion, FreeSpaceAndInterference) {
  const std::vector<Point> from{{0, 0, 0}, {2, 0, 0}};
  const std::vector<Point> meet{{1, 0, 0}, {1, 0, 0}};
  FreeSpaceModel free;
  EXPECT_TRUE(free.feasible(from, meet));
  EXPECT_EQ(free.cost(from, meet), (std::vector<double>{1.0, 1.0}));
  InterferenceModel near(0.6);
  EXPECT_FALSE(near.feasible(from, meet));
  const std::vector<Point> apart{{0, 1, 0}, {2, 1, 0}};
  EXPECT_TRUE(near.feasible(from, apart));
  EXPECT_THROW(InterferenceModel(0.0), InputError);
}

TEST(Planner, SmartPureSolvesSwap2InSixSteps) {
  const auto p = swap2_problem();
  FreeSpaceModel free;
  const auto r = plan(p, free, pure(Strategy::Smart, 7));
  ASSERT_TRUE(r.success());
  EXPECT_EQ(r.solution->steps.size(), 6u);
  EXPECT_EQ(r.solution->n_action_instants, 6);
  EXPECT_EQ(actions_per_object(*r.solution, 2), (std::vector<int>{3, 3}));
  EXPECT_EQ(r.solution->mapf_steps_at_root, 6);
  EXPECT_TRUE(replay(p, *r.solution, free).ok());
}

TEST(Planner, GreedyPureDeadlocks) {
  const auto p = swap2_problem();
  FreeSpaceModel free;
  const auto r = plan(p, free, pure(Strategy::Greedy, 7));
  EXPECT_FALSE(r.success());
  EXPECT_TRUE(r.stats.exhausted);
  EXPECT_EQ(r.stats.best_partial, 2);
}

TEST(Planner, IdentityIsImmediate) {
  const auto p = PlanningProblem::make(swap2_workspace(), {"A"}, {{"S1", {-0.5, 0, 0}}}, {"S1"}, 0.03);
  FreeSpaceModel free;
  const auto r = plan(p, free, pure(Strategy::Smart, 1));
  ASSERT_TRUE(r.success());
  EXPECT_TRUE(r.solution->steps.empty());
  EXPECT_EQ(r.solution->makespan, 0.0);
  EXPECT_EQ(r.solution->initial_solution_ms, 0.0);
}

TEST(Planner, DefaultExplorationSolvesAndStaysSafe) {
  const auto p = swap2_problem();
  FreeSpaceModel free;
  for (auto s : {Strategy::Smart, Strategy::Sequential, Strategy::Greedy}) {
    PlannerConfig c;
    c.strategy = s;
    c.seed = 3;
    c.time_budget_ms = 300;
    const auto r = plan(p, free, c);
    ASSERT_TRUE(r.success()) << to_string(s);
    EXPECT_TRUE(replay(p, *r.solution, free).ok());
    EXPECT_LE(r.solution->mapf_steps_at_root, r.solution->n_action_instants);
    EXPECT_EQ(r.stats.capacity_violations, 0u);
    EXPECT_EQ(r.stats.step_violations, 0u);
    EXPECT_EQ(r.stats.plan_violations, 0u);
    for (std::size_t i = 1; i < r.solution->cost_history.size(); ++i)
      EXPECT_LT(r.solution->cost_history[i].second, r.solution->cost_history[i - 1].second);
  }
}

TEST(Planner, Deterministic) {
  const auto p = swap2_problem();
  FreeSpaceModel free;
  PlannerConfig c;
  c.seed = 11;
  c.time_budget_ms = 200;
  const auto a = plan(p, free, c);
  const auto b = plan(p, free, c);
  ASSERT_TRUE(a.success() && b.success());
  std::stringstream sa, sb;
  write_trace(sa, p, *a.solution);
  write_trace(sb, p, *b.solution);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a.stats.iterations, b.stats.iterations);
  EXPECT_EQ(a.solution->cost_history, b.solution->cost_history);
}

TEST(Planner, SwapBufferNeedsTheBuffer) {
  const auto p = swapbuf_problem();
  FreeSpaceModel free;
  const auto r = plan(p, free, pure(Strategy::Smart, 5));
  ASSERT_TRUE(r.success());
  const auto bf = p.graph.at("Bf");
  int into_buffer = 0;
  for (const auto& st : r.solution->steps)
    for (const auto& a : st.actions)
      if (a && a->kind == EdgeKind::Place && a->counterpart == bf) ++into_buffer;
  EXPECT_GE(into_buffer, 1);
  EXPECT_TRUE(replay(p, *r.solution, free).ok());
}

TEST(SelectMode, SingleNodeTree) {
  const auto p = swap2_problem();
  FreeSpaceModel free;
  PlannerConfig c;
  c.seed = 2;
  Planner planner(p, free, c);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(planner.select_mode(), 0);
}

TEST(SelectMode, GoalBiasPicksFewestRemaining) {
  const auto p = swap2_problem();
  FreeSpaceModel free;
  PlannerConfig c;
  c.goal_bias_fraction = 1.0;
  Planner planner(p, free, c);
  const auto gd = *planner.guidance().at(planner.taus()[0].projection);
  const auto s = planner.ground(0, gd.goal);
  ASSERT_TRUE(s.has_value());
  const auto node = planner.extend(0, *s);
  ASSERT_TRUE(node.has_value());
  const auto child = planner.modal_check(*node, *s);
  ASSERT_TRUE(child.has_value());
  ASSERT_EQ(planner.taus().size(), 2u);
  EXPECT_EQ(planner.taus()[0].remaining, 6);
  EXPECT_EQ(planner.taus()[1].remaining, 5);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(planner.select_mode(), 1);
}

TEST(SelectMode, UniformIsReproducible) {
  const auto p = swap2_problem();
  FreeSpaceModel free;
  PlannerConfig c;
  c.goal_bias_fraction = 0.0;
  c.seed = 99;
  std::vector<int> picks[2];
  for (auto& seq : picks) {
    Planner planner(p, free, c);
    const auto s = planner.sample_trans(0, 1);
    for (const auto& t : s) {
      const auto n = planner.extend(0, t);
      ASSERT_TRUE(n);
      planner.modal_check(*n, t);
    }
    for (int i = 0; i < 30; ++i) seq.push_back(planner.select_mode());
  }
  EXPECT_EQ(picks[0], picks[1]);
}

TEST(SampleTrans, Swap2Start) {
  const auto p = swap2_problem();
  FreeSpaceModel free;
  Planner planner(p, free, PlannerConfig{});
  const auto s = planner.sample_trans(0, 2);
  const auto& g = p.graph;
  EXPECT_TRUE(has_action(s, EdgeKind::Pick, g.at("L"), 0));
  EXPECT_TRUE(has_action(s, EdgeKind::Pick, g.at("R"), 1));
  EXPECT_FALSE(has_action(s, EdgeKind::Pick, g.at("R"), 0));
  EXPECT_EQ(s.size(), 2u);
  for (const auto& t : s) {
    const auto& a = t.actions[static_cast<std::size_t>(arm_ordinal(g, t.actions[0] ? g.at("L") : g.at("R")))];
    ASSERT_TRUE(a);
    EXPECT_EQ(*t.targets[static_cast<std::size_t>(arm_ordinal(g, a->arm))], p.start.objects[a->object].pose);
  }
}

TEST(SampleTrans, FullRegionExcludesPlace) {
  const auto p = PlanningProblem::make(swap2_workspace(), {"A", "B", "C"},
                                       {{"L", {0, 0, 0}}, {"S1", {-0.5, 0.1, 0}}, {"S1", {-0.5, -0.1, 0}}},
                                       {"S2", "S1", "S1"}, 0.03);
  FreeSpaceModel free;
  Planner planner(p, free, PlannerConfig{});
  const auto s = planner.sample_trans(0, 3);
  const auto& g = p.graph;
  for (const auto& t : s)
    for (const auto& a : t.actions)
      if (a && a->kind == EdgeKind::Place) {
        EXPECT_NE(a->counterpart, g.at("S1"));
      }
  EXPECT_TRUE(has_action(s, EdgeKind::Handoff, g.at("L"), 0));
}

TEST(SampleTrans, BothHoldingOnlyPlaces) {
  const auto p = PlanningProblem::make(swap2_workspace(), {"A", "B"}, {{"L", {0, 0, 0}}, {"R", {2, 0, 0}}},
                                       {"S2", "S1"}, 0.03);
  FreeSpaceModel free;
  Planner planner(p, free, PlannerConfig{});
  const auto s = planner.sample_trans(0, 3);
  ASSERT_EQ(s.size(), 6u);
  for (const auto& t : s)
    for (const auto& a : t.actions)
      if (a) {
        EXPECT_EQ(a->kind, EdgeKind::Place);
      }
}

TEST(Extend, InterferenceRejectsSharedHandoffPoint) {
  const auto p = PlanningProblem::make(swap2_workspace(), {"A"}, {{"L", {0, 0, 0}}}, {"S2"}, 0.03);
  InterferenceModel near(0.6);
  Planner planner(p, near, PlannerConfig{});
  const auto gd = *planner.guidance().at(planner.taus()[0].projection);
  const auto s = planner.ground(0, gd.goal);
  ASSERT_TRUE(s.has_value());
  EXPECT_FALSE(planner.extend(0, *s).has_value());
  EXPECT_EQ(planner.nodes().size(), 1u);
}

TEST(Extend, FreeSpaceAlwaysAdds) {
  const auto p = swap2_problem();
  FreeSpaceModel free;
  Planner planner(p, free, PlannerConfig{});
  for (const auto& t : planner.sample_trans(0, 3)) EXPECT_TRUE(planner.extend(0, t).has_value());
}

TEST(ModalCheck, PartialHandoffIsNotYet) {
  const auto p = PlanningProblem::make(swap2_workspace(), {"A"}, {{"L", {0, 0, 0}}}, {"S2"}, 0.03);
  FreeSpaceModel free;
  Planner planner(p, free, PlannerConfig{});
  const auto gd = *planner.guidance().at(planner.taus()[0].projection);
  auto s = planner.ground(0, gd.goal);
  ASSERT_TRUE(s.has_value());
  // Only L reaches the midpoint.
  const auto node = planner.connect(0, {Point{1, 0, 0}, Point{2, 0, 0}});
  ASSERT_TRUE(node);
  EXPECT_FALSE(planner.modal_check(*node, *s).has_value());
  const auto both = planner.connect(*node, {Point{1, 0, 0}, Point{1, 0, 0}});
  const auto child = planner.modal_check(*both, *s);
  ASSERT_TRUE(child.has_value());
  EXPECT_EQ(planner.nodes()[static_cast<std::size_t>(*child)].state.objects[0].vertex, p.graph.at("R"));
}

TEST(ModalCheck, PickPassesAndEmptyIsVacuous) {
  const auto p = swap2_problem();
  FreeSpaceModel free;
  Planner planner(p, free, PlannerConfig{});
  const auto gd = *planner.guidance().at(planner.taus()[0].projection);
  const auto s = planner.ground(0, gd.goal);
  ASSERT_TRUE(s);
  const auto node = planner.extend(0, *s);
  ASSERT_TRUE(node);
  const auto child = planner.modal_check(*node, *s);
  ASSERT_TRUE(child);
  EXPECT_NE(planner.nodes()[static_cast<std::size_t>(*child)].tau, 0);
  EXPECT_EQ(planner.nodes()[static_cast<std::size_t>(*child)].state.objects[0].vertex, p.graph.at("L"));
  TransitionSample empty;
  empty.actions = ActionVector(2);
  const auto taus = planner.taus().size();
  EXPECT_EQ(planner.modal_check(*node, empty), node);
  EXPECT_EQ(planner.taus().size(), taus);
}

TEST(Rewire, CheaperParentLowersCost) {
  const auto p = swap2_problem();
  FreeSpaceModel free;
  Planner planner(p, free, PlannerConfig{});
  const Point r0{2, 0, 0};
  const auto detour = planner.connect(0, {Point{0, 1, 0}, r0});
  const auto target = planner.connect(*detour, {Point{1, 1, 0}, r0});
  const double before = planner.nodes()[static_cast<std::size_t>(*target)].state.cost();
  EXPECT_DOUBLE_EQ(before, 2.0);
  const auto shortcut = planner.connect(0, {Point{0.5, 0.5, 0}, r0});
  planner.rewire(0, *shortcut, 10.0);
  const auto& n = planner.nodes()[static_cast<std::size_t>(*target)];
  EXPECT_EQ(n.parent, *shortcut);
  EXPECT_LT(n.state.cost(), before);
  EXPECT_NEAR(n.state.cost(), std::sqrt(2.0), 1e-12);
}

TEST(Retrace, RootIsGoal) {
  const auto p = PlanningProblem::make(swap2_workspace(), {"A"}, {{"S2", {2.5, 0, 0}}}, {"S2"}, 0.03);
  FreeSpaceModel free;
  Planner planner(p, free, PlannerConfig{});
  const auto sol = planner.retrace(0);
  EXPECT_TRUE(sol.steps.empty());
  EXPECT_EQ(sol.makespan, 0.0);
}

TEST(Trace, RoundTripAndTamperDetection) {
  const auto p = swap2_problem();
  FreeSpaceModel free;
  const auto r = plan(p, free, pure(Strategy::Smart, 7));
  ASSERT_TRUE(r.success());
  std::stringstream ss;
  write_trace(ss, p, *r.solution);
  const std::string text = ss.str();
  std::stringstream in(text);
  const auto t = read_trace(in);
  EXPECT_EQ(t.steps.size(), 6u);
  const auto rep = replay(p, t, free);
  EXPECT_TRUE(rep.ok());
  EXPECT_NEAR(rep.makespan, r.solution->makespan, 1e-9);

  // Drop the last step: objects no longer reach their goals.
  auto cut = t;
  cut.steps.pop_back();
  EXPECT_FALSE(replay(p, cut, free).ok());
  // Swap the first two steps: the handoff happens before the pick.
  auto swapped = t;
  std::swap(swapped.steps[0], swapped.steps[1]);
  EXPECT_FALSE(replay(p, swapped, free).ok());
  // Move a waypoint away from the grounding point.
  auto moved = t;
  moved.steps[0].arm_paths[0].back().y += 0.5;
  EXPECT_FALSE(replay(p, moved, free).ok());

  std::stringstream bad("1\tL|NOACT|0,0,0\n");
  EXPECT_THROW(read_trace(bad), InputError);
}
