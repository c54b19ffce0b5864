#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "marp/bench/runner.hpp"
#include "marp/bench/scenario.hpp"
#include "marp/mapf/oracle.hpp"

using namespace marp;
using namespace marp::bench;

TEST(Generate, SeededDeterminism) {
  EXPECT_EQ(dump_scenario(generate(Family::Switch, 2, 2, 42)), dump_scenario(generate(Family::Switch, 2, 2, 42)));
  EXPECT_NE(dump_scenario(generate(Family::Random, 3, 3, 1)), dump_scenario(generate(Family::Random, 3, 3, 2)));
}

TEST(Generate, SideToSideMovesEverythingAcross) {
  const auto s = generate(Family::SideToSide, 4, 4, 1);
  ASSERT_EQ(s.objects.size(), 4u);
  for (const auto& o : s.objects) {
    EXPECT_EQ(o.start_region, "S1");
    EXPECT_EQ(o.goal_region, "S2");
  }
  EXPECT_EQ(s.id(), "side_to_side-r4-k4-s1");
}

TEST(Generate, SwitchTwoByTwoIsSwap2) {
  for (std::uint64_t seed : {1u, 7u, 123u}) {
    const auto s = generate(Family::Switch, 2, 2, seed);
    ASSERT_EQ(s.objects.size(), 2u);
    EXPECT_NE(s.objects[0].start_region, s.objects[1].start_region);
    EXPECT_EQ(s.objects[0].start_region, s.objects[1].goal_region);
    const auto p = to_problem(s);
    const auto& g = p.graph;
    EXPECT_EQ(g.num_vertices(), 4u);
    EXPECT_EQ(g.edges().size(), 6u);  // one pick and one place per table, one handoff each way
    EXPECT_EQ(mapf::oracle::min_steps(g, p.start.projection(), p.goal, 20), 6);
  }
}

TEST(Generate, RandomFlipsPerObject) {
  int forward = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (const auto& o : generate(Family::Random, 3, 4, seed).objects) {
      forward += o.start_region == "S1";
      ++total;
    }
  }
  EXPECT_GT(forward, total / 4);
  EXPECT_LT(forward, 3 * total / 4);
}

TEST(Generate, LayoutIsARelay) {
  const auto s = generate(Family::SideToSide, 4, 2, 3);
  const auto p = to_problem(s);
  const auto& g = p.graph;
  // S1 - a1 - a2 - a3 - a4 - S2 and nothing else.
  EXPECT_TRUE(g.has_edge(g.at("S1"), g.at("a1")));
  EXPECT_FALSE(g.has_edge(g.at("S1"), g.at("a2")));
  EXPECT_TRUE(g.has_edge(g.at("a2"), g.at("a3")));
  EXPECT_FALSE(g.has_edge(g.at("a1"), g.at("a3")));
  EXPECT_TRUE(g.has_edge(g.at("a4"), g.at("S2")));
  for (const auto& o : s.objects) {
    EXPECT_LE(distance(o.start_pose, s.workspace.regions[0].centroid), s.workspace.regions[0].extent);
    EXPECT_LE(distance(o.goal_pose, s.workspace.regions[1].centroid), s.workspace.regions[1].extent);
  }
}

TEST(Generate, SwapBufferTopology) {
  const auto s = generate(Family::SwapBuffer, 2, 2, 0);
  const auto p = to_problem(s);
  EXPECT_TRUE(p.graph.find("Bf").has_value());
  EXPECT_EQ(mapf::oracle::min_max_actions(p.graph, p.start.projection(), p.goal, 12), 4);
  EXPECT_THROW(generate(Family::SwapBuffer, 3, 2, 0), InputError);
}

TEST(Generate, Errors) {
  EXPECT_THROW(generate(Family::Switch, 0, 2, 1), InputError);
  EXPECT_THROW(generate(Family::Switch, 2, 0, 1), InputError);
  EXPECT_THROW(generate(Family::Custom, 2, 2, 1), InputError);
  LayoutParams tight;
  tight.capacity = 2;
  EXPECT_THROW(generate(Family::SideToSide, 2, 3, 1, tight), InputError);
  EXPECT_NO_THROW(generate(Family::Switch, 2, 4, 1, tight));
  EXPECT_THROW(parse_family("zigzag"), InputError);
}

TEST(ScenarioJson, RoundTrip) {
  const auto s = generate(Family::Random, 3, 3, 9);
  const auto text = dump_scenario(s);
  const auto back = scenario_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(dump_scenario(back), text);
  EXPECT_EQ(back.id(), s.id());
}

TEST(ScenarioJson, RejectsBadInput) {
  auto j = to_json(generate(Family::Switch, 2, 2, 1));
  auto missing = j;
  missing.erase("arms");
  EXPECT_THROW(scenario_from_json(missing), InputError);
  auto clash = j;
  clash["objects"][1]["start_pose"] = clash["objects"][0]["start_pose"];
  clash["objects"][1]["start_region"] = clash["objects"][0]["start_region"];
  EXPECT_THROW(scenario_from_json(clash), InputError);
  auto outside = j;
  outside["objects"][0]["goal_pose"] = {50.0, 50.0};
  EXPECT_THROW(scenario_from_json(outside), InputError);
  auto bad_type = j;
  bad_type["footprint_radius"] = "wide";
  EXPECT_THROW(scenario_from_json(bad_type), InputError);
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), InputError);
}

namespace {

RunConfig pure_config() {
  RunConfig c;
  c.planner.pure_guidance = true;
  c.planner.time_budget_ms = 1000;
  return c;
}

RunRecord make_record(const std::string& scenario, const std::string& strategy, int trial, bool ok) {
  RunRecord r;
  r.scenario = scenario;
  r.strategy = strategy;
  r.trial = trial;
  r.success = ok;
  if (ok) {
    r.initial_ms = 1.23449;
    r.makespan = 2.0;
    r.actions = 6;
  }
  r.mapf_steps = 6;
  return r;
}

}  // namespace

TEST(Run, GreedyDeadlocksOnSwitch2x2) {
  const auto recs = run(generate(Family::Switch, 2, 2, 5), Strategy::Greedy, pure_config(), 5, 1);
  ASSERT_EQ(recs.size(), 5u);
  for (const auto& r : recs) EXPECT_FALSE(r.success);
  EXPECT_EQ(summarize(recs).success_ratio(), 0.0);
}

TEST(Run, SmartSolvesSwitch2x2InSixSteps) {
  const auto recs = run(generate(Family::Switch, 2, 2, 5), Strategy::Smart, pure_config(), 5, 1);
  for (const auto& r : recs) {
    EXPECT_TRUE(r.success);
    EXPECT_TRUE(r.replay_ok);
    EXPECT_EQ(r.actions, 6);
    EXPECT_EQ(r.mapf_steps, 6);
  }
  const auto s = summarize(recs);
  EXPECT_EQ(s.success_ratio(), 1.0);
  EXPECT_EQ(s.actions.mean, 6.0);
}

TEST(Run, IdentityScenario) {
  Scenario s = generate(Family::SideToSide, 1, 1, 2);
  s.family = Family::Custom;
  s.objects[0].goal_region = s.objects[0].start_region;
  s.objects[0].goal_pose = s.objects[0].start_pose;
  const auto recs = run(s, Strategy::Smart, RunConfig{}, 1, 0);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_TRUE(recs[0].success);
  EXPECT_EQ(recs[0].makespan, 0.0);
  EXPECT_EQ(recs[0].actions, 0);
  EXPECT_EQ(recs[0].mapf_steps, 0);
}

TEST(Run, TrialSeedsDifferAndRepeat) {
  EXPECT_NE(trial_seed(1, 0), trial_seed(1, 1));
  EXPECT_NE(trial_seed(1, 0), trial_seed(2, 0));
  EXPECT_EQ(trial_seed(3, 4), trial_seed(3, 4));
  RunConfig c;
  c.planner.time_budget_ms = 50;
  const auto s = generate(Family::Switch, 2, 2, 8);
  EXPECT_EQ(report(run(s, Strategy::Sequential, c, 3, 4)), report(run(s, Strategy::Sequential, c, 3, 4)));
  EXPECT_THROW(run(s, Strategy::Smart, c, 0, 4), InputError);
}

TEST(Report, HeaderOnly) {
  EXPECT_EQ(report({}), "scenario,strategy,trial,success,initial_ms,makespan,actions,mapf_steps\n");
}

TEST(Report, OneSuccess) {
  EXPECT_EQ(report({make_record("x", "smart", 0, true)}),
            "scenario,strategy,trial,success,initial_ms,makespan,actions,mapf_steps\n"
            "x,smart,0,1,1.234,2.000,6,6\n");
}

TEST(Report, SortedAndFailuresMarked) {
  const auto text = report({make_record("b", "smart", 1, true), make_record("a", "smart", 2, false),
                            make_record("b", "greedy", 0, true), make_record("a", "smart", 0, true)});
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[1].substr(0, 10), "a,smart,0,");
  EXPECT_EQ(lines[2], "a,smart,2,0,nan,nan,-1,6");
  EXPECT_EQ(lines[3].substr(0, 11), "b,greedy,0,");
  EXPECT_EQ(lines[4].substr(0, 10), "b,smart,1,");
}

TEST(Summary, AggregatesSuccessesOnly) {
  auto a = make_record("x", "smart", 0, true);
  auto b = make_record("x", "smart", 1, true);
  b.makespan = 4.0;
  b.actions = 8;
  const auto s = summarize({a, b, make_record("x", "smart", 2, false)});
  EXPECT_EQ(s.trials, 3);
  EXPECT_EQ(s.successes, 2);
  EXPECT_NEAR(s.success_ratio(), 2.0 / 3.0, 1e-12);
  EXPECT_EQ(s.makespan.mean, 3.0);
  EXPECT_EQ(s.makespan.min, 2.0);
  EXPECT_EQ(s.actions.max, 8.0);
  EXPECT_TRUE(std::isnan(summarize({}).makespan.mean));
}
