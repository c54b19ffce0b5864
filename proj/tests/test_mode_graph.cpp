#include <gtest/gtest.h>

#include <utility>
#include <vector>

#include "fixtures.hpp"
#include "marp/mode_graph.hpp"

using namespace marp;
using marp::testing::state;
using marp::testing::swap2_workspace;

TEST(ModeGraph, Swap2Topology) {
  const auto g = build_mode_graph(swap2_workspace());
  EXPECT_EQ(g.num_vertices(), 4u);
  ASSERT_EQ(g.edges().size(), 6u);
  const auto S1 = g.at("S1"), S2 = g.at("S2"), L = g.at("L"), R = g.at("R");
  EXPECT_TRUE(g.has_edge(S1, L));
  EXPECT_TRUE(g.has_edge(L, S1));
  EXPECT_TRUE(g.has_edge(S2, R));
  EXPECT_TRUE(g.has_edge(R, S2));
  EXPECT_TRUE(g.has_edge(L, R));
  EXPECT_TRUE(g.has_edge(R, L));
  EXPECT_FALSE(g.has_edge(S1, R));
  EXPECT_FALSE(g.has_edge(S2, L));
  EXPECT_DOUBLE_EQ(g.edges()[*g.edge_index(S1, L)].weight, 0.5);
  EXPECT_DOUBLE_EQ(g.edges()[*g.edge_index(L, R)].weight, 2.0);
  EXPECT_DOUBLE_EQ(g.edges()[*g.edge_index(R, S2)].weight, 0.5);
  EXPECT_EQ(g.edges()[*g.edge_index(S1, L)].kind, EdgeKind::Pick);
  EXPECT_EQ(g.edges()[*g.edge_index(L, S1)].kind, EdgeKind::Place);
  EXPECT_EQ(g.edges()[*g.edge_index(L, R)].kind, EdgeKind::Handoff);
}

TEST(ModeGraph, ArmCapacityIsOne) {
  const auto g = build_mode_graph(swap2_workspace());
  for (VertexId a : g.arms()) EXPECT_EQ(g.capacity(a), 1);
  EXPECT_EQ(g.capacity(g.at("S1")), 2);
}

TEST(ModeGraph, SingleArmSingleRegion) {
  Workspace w;
  w.arms = {{"A", {0, 0, 0}, 1.0}};
  w.regions = {{"S", {0.5, 0, 0}, 1, 0.1}};
  w.handoff_distance = 1.0;
  const auto g = build_mode_graph(w);
  EXPECT_EQ(g.num_vertices(), 2u);
  EXPECT_EQ(g.edges().size(), 2u);
  for (const auto& e : g.edges()) EXPECT_NE(e.kind, EdgeKind::Handoff);
}

TEST(ModeGraph, UnreachableRegionIsAnError) {
  auto w = swap2_workspace();
  w.regions.push_back({"far", {10, 0, 0}, 1, 0.1});
  try {
    build_mode_graph(w);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("far"), std::string::npos);
  }
}

TEST(ModeGraph, InvalidWorkspaceRejected) {
  auto w = swap2_workspace();
  w.arms[1].id = "L";
  EXPECT_THROW(build_mode_graph(w), InputError);
  w = swap2_workspace();
  w.regions[0].capacity = 0;
  EXPECT_THROW(build_mode_graph(w), InputError);
  w = swap2_workspace();
  w.handoff_distance = 0.0;
  EXPECT_THROW(build_mode_graph(w), InputError);
}

TEST(ModeGraph, HandoffNeedsDistance) {
  auto w = swap2_workspace();
  w.handoff_distance = 1.5;
  const auto g = build_mode_graph(w);
  EXPECT_FALSE(g.has_edge(g.at("L"), g.at("R")));
  EXPECT_EQ(g.edges().size(), 4u);
}

TEST(ModeGraph, PickPlaceSymmetryAndCardinality) {
  Workspace w;
  for (int i = 0; i < 4; ++i) w.arms.push_back({"a" + std::to_string(i), {1.0 * i, 0, 0}, 1.3});
  for (int i = 0; i < 5; ++i) w.regions.push_back({"s" + std::to_string(i), {0.8 * i, 0.7, 0}, 2, 0.1});
  w.handoff_distance = 1.1;
  const auto g = build_mode_graph(w);
  EXPECT_EQ(g.num_vertices(), w.arms.size() + w.regions.size());
  for (const auto& e : g.edges()) {
    auto back = g.edge_index(e.to, e.from);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(g.edges()[*back].weight, e.weight);
    if (e.kind == EdgeKind::Pick) {
      EXPECT_FALSE(g.is_arm(e.from));
      EXPECT_TRUE(g.is_arm(e.to));
      EXPECT_EQ(g.edges()[*back].kind, EdgeKind::Place);
    }
  }
  const auto g2 = build_mode_graph(w);
  ASSERT_EQ(g.edges().size(), g2.edges().size());
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    EXPECT_EQ(g.edges()[i].from, g2.edges()[i].from);
    EXPECT_EQ(g.edges()[i].to, g2.edges()[i].to);
    EXPECT_EQ(g.edges()[i].weight, g2.edges()[i].weight);
  }
}

TEST(ModeOf, MapsArrangement) {
  const auto g = build_mode_graph(swap2_workspace());
  std::vector<std::pair<std::string, std::string>> a{{"A", "S1"}, {"B", "S2"}};
  EXPECT_EQ(mode_of(g, a), state(g, {"S1", "S2"}));
  a = {{"A", "S1"}, {"B", "S1"}};
  const auto q = mode_of(g, a);
  EXPECT_EQ(q, state(g, {"S1", "S1"}));
  EXPECT_TRUE(validate_state(g, q).ok());
}

TEST(ModeOf, CapacityErrorNamesVertex) {
  const auto g = build_mode_graph(swap2_workspace());
  std::vector<std::pair<std::string, std::string>> a{{"A", "S1"}, {"B", "S1"}, {"C", "S1"}};
  try {
    mode_of(g, a);
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    EXPECT_EQ(e.vertex(), "S1");
  }
  std::vector<std::pair<std::string, std::string>> bad{{"A", "nowhere"}};
  EXPECT_THROW(mode_of(g, bad), InputError);
}

TEST(ValidateState, Reports) {
  const auto g = build_mode_graph(swap2_workspace());
  EXPECT_TRUE(validate_state(g, state(g, {"S1", "S2"})).ok());
  const auto r = validate_state(g, state(g, {"L", "L"}));
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].vertex, g.at("L"));
  EXPECT_EQ(r.violations[0].occupancy, 2);
  EXPECT_EQ(r.violations[0].capacity, 1);
  EXPECT_TRUE(validate_state(g, MultiModalState{}).ok());
}
