// Plans a scenario file with each guidance strategy and prints the
// resulting step-trace of the Smart run.
//
//   rearrange samples/swap2.json
#include <iostream>

#include "marp/bench/runner.hpp"
#include "marp/bench/scenario.hpp"
#include "marp/planner/trace.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: rearrange SCENARIO.json\n";
    return 2;
  }
  using namespace marp;
  try {
    const auto scenario = bench::load_scenario(argv[1]);
    const auto problem = bench::to_problem(scenario);
    FreeSpaceModel motion;

    const auto root = mapf::solve_mapf(problem.graph, problem.start.projection(), problem.goal);
    if (root.feasible()) std::cout << "mode-level lower bound: " << root.plan->n_steps << " steps\n";

    std::optional<Solution> smart;
    for (auto s : {Strategy::Smart, Strategy::Sequential, Strategy::Greedy}) {
      PlannerConfig cfg;
      cfg.strategy = s;
      cfg.time_budget_ms = 500;
      auto r = plan(problem, motion, cfg);
      std::cout << to_string(s) << ": ";
      if (!r.success()) {
        std::cout << "no solution after " << r.stats.iterations << " iterations\n";
        continue;
      }
      std::cout << r.solution->n_action_instants << " action steps, makespan " << r.solution->makespan << '\n';
      if (s == Strategy::Smart) smart = r.solution;
    }
    if (smart) write_trace(std::cout, problem, *smart);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
}
