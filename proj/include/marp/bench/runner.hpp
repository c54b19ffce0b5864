#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "marp/bench/scenario.hpp"
#include "marp/planner/motion.hpp"
#include "marp/planner/planner.hpp"
#include "marp/planner/trace.hpp"
#include "marp/random.hpp"

namespace marp::bench {

inline PlanningProblem to_problem(const Scenario& s) {
  std::vector<std::pair<std::string, Point>> starts;
  std::vector<std::string> goals;
  for (const auto& o : s.objects) {
    starts.emplace_back(o.start_region, o.start_pose);
    goals.push_back(o.goal_region);
  }
  return PlanningProblem::make(s.workspace, s.object_ids(), starts, goals, s.footprint_radius);
}

struct RunConfig {
  PlannerConfig planner;  // strategy and seed are overridden per trial
  std::string motion{"free"};
  double d_min{0.1};
};

struct RunRecord {
  std::string scenario;
  std::string strategy;
  int trial{0};
  std::uint64_t seed{0};
  bool success{false};
  double initial_ms{std::numeric_limits<double>::quiet_NaN()};
  double makespan{std::numeric_limits<double>::quiet_NaN()};
  int actions{-1};
  int mapf_steps{-1};
  bool replay_ok{false};
  std::vector<std::pair<double, double>> cost_history;
  PlannerStats stats;
  std::string trace;  // step-trace text of a successful run
};

inline std::uint64_t trial_seed(std::uint64_t base, int trial) {
  return mix_seed(base, static_cast<std::uint64_t>(trial) + 1);
}

// A run counts as a success only if its step-trace replays cleanly.
inline RunRecord run_trial(const Scenario& s, const PlanningProblem& problem, const MotionModel& motion,
                           Strategy strategy, const RunConfig& cfg, int trial, std::uint64_t base_seed) {
  RunRecord rec;
  rec.scenario = s.id();
  rec.strategy = to_string(strategy);
  rec.trial = trial;
  rec.seed = trial_seed(base_seed, trial);

  PlannerConfig pc = cfg.planner;
  pc.strategy = strategy;
  pc.seed = rec.seed;
  const auto result = plan(problem, motion, pc);
  rec.stats = result.stats;
  if (!result.success()) return rec;

  const auto& sol = *result.solution;
  std::stringstream trace;
  write_trace(trace, problem, sol);
  const auto report = replay(problem, read_trace(trace), motion);
  rec.replay_ok = report.ok() && std::abs(report.makespan - sol.makespan) <= 1e-6;
  rec.mapf_steps = sol.mapf_steps_at_root;
  rec.actions = sol.n_action_instants;
  rec.cost_history = sol.cost_history;
  if (!rec.replay_ok) return rec;
  rec.success = true;
  rec.trace = trace.str();
  rec.initial_ms = sol.initial_solution_ms;
  rec.makespan = sol.makespan;
  return rec;
}

inline std::vector<RunRecord> run(const Scenario& s, Strategy strategy, const RunConfig& cfg, int trials,
                                  std::uint64_t base_seed) {
  if (trials < 1) throw InputError("trials must be >= 1");
  cfg.planner.validate();
  const auto problem = to_problem(s);
  const auto motion = make_motion_model(cfg.motion, cfg.d_min);
  std::vector<RunRecord> out;
  for (int t = 0; t < trials; ++t) out.push_back(run_trial(s, problem, *motion, strategy, cfg, t, base_seed));
  return out;
}

namespace detail {
inline std::string fixed3(double v) {
  if (!std::isfinite(v)) return "nan";
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  return os.str();
}
}  // namespace detail

inline const char* kCsvHeader = "scenario,strategy,trial,success,initial_ms,makespan,actions,mapf_steps";

inline std::string report(std::vector<RunRecord> records) {
  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.scenario, a.strategy, a.trial) < std::tie(b.scenario, b.strategy, b.trial);
  });
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.scenario << ',' << r.strategy << ',' << r.trial << ',' << (r.success ? 1 : 0) << ','
       << detail::fixed3(r.success ? r.initial_ms : std::nan("")) << ','
       << detail::fixed3(r.success ? r.makespan : std::nan("")) << ',' << (r.success ? r.actions : -1) << ','
       << r.mapf_steps << '\n';
  }
  return os.str();
}

struct Metric {
  double mean{std::nan("")};
  double min{std::nan("")};
  double max{std::nan("")};
};

struct Summary {
  int trials{0};
  int successes{0};
  Metric initial_ms, makespan, actions, mapf_steps;

  double success_ratio() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / trials; }
};

// Metrics aggregate successful trials only.
inline Summary summarize(const std::vector<RunRecord>& records) {
  Summary s;
  s.trials = static_cast<int>(records.size());
  std::vector<double> init, mk, act, ms;
  for (const auto& r : records) {
    if (!r.success) continue;
    ++s.successes;
    init.push_back(r.initial_ms);
    mk.push_back(r.makespan);
    act.push_back(r.actions);
    ms.push_back(r.mapf_steps);
  }
  const auto agg = [](const std::vector<double>& v) {
    Metric m;
    if (v.empty()) return m;
    double sum = 0;
    for (double x : v) sum += x;
    m.mean = sum / static_cast<double>(v.size());
    m.min = *std::min_element(v.begin(), v.end());
    m.max = *std::max_element(v.begin(), v.end());
    return m;
  };
  s.initial_ms = agg(init);
  s.makespan = agg(mk);
  s.actions = agg(act);
  s.mapf_steps = agg(ms);
  return s;
}

inline std::string format_summary(const Summary& s) {
  std::ostringstream os;
  os << "success " << s.successes << '/' << s.trials << " (" << detail::fixed3(s.success_ratio()) << ")\n";
  const auto line = [&](const char* name, const Metric& m) {
    os << name << " mean " << detail::fixed3(m.mean) << " min " << detail::fixed3(m.min) << " max "
       << detail::fixed3(m.max) << '\n';
  };
  line("initial_ms", s.initial_ms);
  line("makespan", s.makespan);
  line("actions", s.actions);
  line("mapf_steps", s.mapf_steps);
  return os.str();
}

}  // namespace marp::bench
