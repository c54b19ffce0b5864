#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "marp/error.hpp"
#include "marp/guidance.hpp"
#include "marp/mapf/plan.hpp"
#include "marp/mapf/step_rules.hpp"
#include "marp/mode_graph.hpp"
#include "marp/planner/motion.hpp"
#include "marp/planner/task_state.hpp"
#include "marp/random.hpp"

namespace marp {

// Work clock: the default budget is measured in nominal milliseconds derived
// from planner iterations and solver expansions, so identical inputs spend
// identical budgets. The wall clock is available for timing studies.
// The constants were fitted against wall time on a single desktop core
// (4-arm instances, all strategies); expect roughly +-30%.
enum class ClockKind { Work, Wall };

inline constexpr double kWorkMsPerIteration = 0.013;
inline constexpr double kWorkMsPerExpansion = 0.018;

struct PlannerConfig {
  Strategy strategy{Strategy::Smart};
  double goal_bias_fraction{0.5};
  double add_fraction{0.2};
  double guidance_fraction{0.8};
  // Only guided transitions; the search fails once no tau has a groundable
  // next-step goal left.
  bool pure_guidance{false};
  long max_iters{1'000'000};
  double time_budget_ms{10'000.0};
  std::uint64_t seed{0};
  int samples_per_transition{3};
  // Zero connects directly; otherwise extensions move at most this far in
  // stacked configuration space.
  double step_size{0.0};
  ClockKind clock{ClockKind::Work};
  std::vector<int> priority;  // Sequential object order; empty = ascending
  bool stop_at_first{false};

  void validate() const {
    const auto frac = [](double f) { return f >= 0.0 && f <= 1.0; };
    if (!frac(goal_bias_fraction) || !frac(add_fraction) || !frac(guidance_fraction))
      throw InputError("planner fractions must lie in [0, 1]");
    if (max_iters < 1) throw InputError("max_iters must be positive");
    if (samples_per_transition < 1) throw InputError("samples_per_transition must be positive");
    if (step_size < 0.0) throw InputError("step_size must be >= 0");
    if (time_budget_ms < 0.0) throw InputError("time budget must be >= 0");
  }
};

// A grounded candidate transition out of a tau: required per-arm grounding
// points, optional pre-positioning points for otherwise idle arms, the
// actions realized once all required points are reached, and the result.
struct TransitionSample {
  ActionVector actions;
  std::vector<std::optional<Point>> targets;
  std::vector<std::optional<Point>> approach;
  std::vector<std::pair<int, Point>> place_poses;
  MultiModalState result;
};

struct TreeNode {
  TaskState state;
  int tau{0};
  int parent{-1};
  int step_index{0};
  std::vector<int> children;
  ActionVector entry_actions;  // actions that minted this node's tau (entry nodes only)
};

struct TauInfo {
  MultiModalState projection;
  int entry{-1};
  int parent_tau{-1};
  std::vector<int> nodes;
  std::vector<TransitionSample> pool;
  bool pool_built{false};
  bool goal{false};
  bool exhausted{false};
  int remaining{0};
  std::set<std::string> realized;
};

struct PlannerStats {
  long iterations{0};
  std::size_t nodes{0};
  std::size_t taus{0};
  std::size_t states_checked{0};
  std::size_t capacity_violations{0};
  std::size_t transitions_checked{0};
  std::size_t step_violations{0};
  std::size_t plans_checked{0};
  std::size_t plan_violations{0};
  std::size_t solver_expansions{0};
  std::size_t rejected_motions{0};
  std::size_t rewires{0};
  int best_partial{0};  // fewest objects away from their goal over all taus
  double elapsed_ms{0.0};
  bool exhausted{false};
};

struct PlanResult {
  std::optional<Solution> solution;
  PlannerStats stats;

  bool success() const { return solution.has_value(); }
};

// Anytime guided tree search over (task state, tau). Single-threaded; one
// instance per invocation.
class Planner {
 public:
  static constexpr int kUnreachable = std::numeric_limits<int>::max() / 2;

  Planner(const PlanningProblem& problem, const MotionModel& motion, PlannerConfig config)
      : p_(problem),
        motion_(motion),
        config_(std::move(config)),
        rng_(config_.seed),
        guidance_(problem.graph, problem.goal, config_.strategy, config_.priority) {
    config_.validate();
    if (config_.pure_guidance) {
      config_.add_fraction = 0.0;
      config_.guidance_fraction = 1.0;
    }
    if (!validate_state(p_.graph, p_.start.projection()).ok()) throw InputError("start state exceeds capacity");
    if (p_.start.arms.size() != p_.num_arms()) throw InputError("start state has the wrong arm count");
    start_ = std::chrono::steady_clock::now();
    TreeNode root;
    root.state = p_.start;
    root.entry_actions = ActionVector(p_.num_arms());
    mint_tau_(std::move(root), -1);
  }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const std::vector<TauInfo>& taus() const { return taus_; }
  const PlannerConfig& config() const { return config_; }
  GuidanceProvider& guidance() { return guidance_; }

  double now_ms() const {
    if (config_.clock == ClockKind::Wall)
      return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    return static_cast<double>(iterations_) * kWorkMsPerIteration +
           static_cast<double>(guidance_.expansions()) * kWorkMsPerExpansion;
  }

  // Goal-biased or uniform choice among taus that are neither goals nor
  // exhausted; -1 when none is left.
  int select_mode() {
    if (open_.empty()) return -1;
    if (rng_.bernoulli(config_.goal_bias_fraction)) {
      const auto& ties = by_remaining_.begin()->second;
      return ties[rng_.index(ties.size())];
    }
    return open_[rng_.index(open_.size())];
  }

  // Grounds a per-arm action vector from tau's state. Returns nullopt when
  // the actions are inconsistent with the state, no free place pose is
  // found, or the induced mode step breaks a step rule.
  std::optional<TransitionSample> ground(int tau, const ActionVector& actions,
                                         const ActionVector* heuristic = nullptr) {
    const auto& info = taus_.at(static_cast<std::size_t>(tau));
    const TaskState& s = nodes_[static_cast<std::size_t>(info.entry)].state;
    const auto& g = p_.graph;
    const std::size_t r = p_.num_arms();
    TransitionSample out;
    out.actions = ActionVector(r);
    out.targets.assign(r, std::nullopt);
    out.approach.assign(r, std::nullopt);
    out.result = info.projection;
    std::vector<std::pair<VertexId, Point>> occupied;
    for (const auto& o : s.objects)
      if (!g.is_arm(o.vertex)) occupied.emplace_back(o.vertex, o.pose);
    bool any = false;
    for (std::size_t i = 0; i < r && i < actions.size(); ++i) {
      if (!actions[i]) continue;
      const ArmAction& a = *actions[i];
      if (a.arm != g.arms()[i] || a.object < 0 || static_cast<std::size_t>(a.object) >= s.objects.size())
        return std::nullopt;
      const auto obj = static_cast<std::size_t>(a.object);
      const VertexId at = s.objects[obj].vertex;
      switch (a.kind) {
        case EdgeKind::Pick:
          if (at != a.counterpart) return std::nullopt;
          out.targets[i] = s.objects[obj].pose;
          out.result.modes[obj] = a.arm;
          break;
        case EdgeKind::Place: {
          if (at != a.arm || g.is_arm(a.counterpart)) return std::nullopt;
          auto pose = sample_place_pose_(a.counterpart, occupied);
          if (!pose) return std::nullopt;
          occupied.emplace_back(a.counterpart, *pose);
          out.targets[i] = *pose;
          out.place_poses.emplace_back(a.object, *pose);
          out.result.modes[obj] = a.counterpart;
          break;
        }
        case EdgeKind::Handoff: {
          const int partner = arm_ordinal(g, a.counterpart);
          const auto& other = actions.at(static_cast<std::size_t>(partner));
          const HandoffRole want = a.role == HandoffRole::Give ? HandoffRole::Receive : HandoffRole::Give;
          if (!other || other->kind != EdgeKind::Handoff || other->role != want || other->object != a.object ||
              other->counterpart != a.arm)
            return std::nullopt;
          if (a.role == HandoffRole::Give) {
            if (at != a.arm) return std::nullopt;
            out.result.modes[obj] = a.counterpart;
          }
          out.targets[i] = handoff_point_(i, static_cast<std::size_t>(partner));
          break;
        }
      }
      out.actions[i] = a;
      any = true;
    }
    if (!any) return std::nullopt;
    if (!mapf::step_ok(g, info.projection, out.result)) return std::nullopt;
    if (heuristic)
      for (std::size_t i = 0; i < r && i < heuristic->size(); ++i) {
        if (out.actions[i] || !(*heuristic)[i]) continue;
        const ArmAction& h = *(*heuristic)[i];
        if (h.kind == EdgeKind::Handoff)
          out.approach[i] = handoff_point_(i, static_cast<std::size_t>(arm_ordinal(g, h.counterpart)));
        else if (h.kind == EdgeKind::Pick && s.objects[static_cast<std::size_t>(h.object)].vertex == h.counterpart)
          out.approach[i] = s.objects[static_cast<std::size_t>(h.object)].pose;
      }
    return out;
  }

  // Single-action transitions adjacent to tau's projection: picks into free
  // arms, places into non-full regions (n pose samples each), handoffs from
  // a holding arm to a free one.
  std::vector<TransitionSample> sample_trans(int tau, int n) {
    std::vector<TransitionSample> out;
    const auto q = taus_.at(static_cast<std::size_t>(tau)).projection;
    const auto& g = p_.graph;
    for (std::size_t j = 0; j < q.size(); ++j) {
      for (std::size_t e : g.out_edges(q[j])) {
        const auto& edge = g.edges()[e];
        ActionVector av(p_.num_arms());
        for (const auto& a : arm_actions_of_move(g, static_cast<int>(j), edge.from, edge.to))
          av[static_cast<std::size_t>(arm_ordinal(g, a.arm))] = a;
        const int reps = edge.kind == EdgeKind::Place ? n : 1;
        for (int k = 0; k < reps; ++k)
          if (auto s = ground(tau, av)) out.push_back(std::move(*s));
      }
    }
    return out;
  }

  // Adds a node in `tau` moving the nearest node toward the sample's points.
  // Returns the new node, or nullopt when every candidate motion is
  // infeasible.
  std::optional<int> extend(int tau, const TransitionSample& s) {
    auto& info = taus_.at(static_cast<std::size_t>(tau));
    const std::size_t r = p_.num_arms();
    const auto desired = [&](std::size_t i) -> std::optional<Point> {
      if (s.targets.size() > i && s.targets[i]) return s.targets[i];
      if (s.approach.size() > i && s.approach[i]) return s.approach[i];
      return std::nullopt;
    };
    int nearest = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int id : info.nodes) {
      const auto& arms = nodes_[static_cast<std::size_t>(id)].state.arms;
      double d = 0.0;
      for (std::size_t i = 0; i < r; ++i)
        if (auto p = desired(i)) d += (arms[i] - *p).norm() * (arms[i] - *p).norm();
      if (d < best) {
        best = d;
        nearest = id;
      }
    }
    const auto& from = nodes_[static_cast<std::size_t>(nearest)].state.arms;
    std::vector<Point> config = from;
    for (std::size_t i = 0; i < r; ++i)
      if (auto p = desired(i)) config[i] = *p;
    double length = config_distance(from, config);
    if (config_.step_size > 0.0 && length > config_.step_size) {
      const double f = config_.step_size / length;
      for (std::size_t i = 0; i < r; ++i) config[i] = lerp(from[i], config[i], f);
      length = config_.step_size;
    }
    extension_sum_ += length;
    ++extension_count_;
    const double radius = 2.0 * extension_sum_ / static_cast<double>(extension_count_);

    // Choose the cheapest feasible parent among the nearest node and the
    // same-tau nodes within the rewire radius.
    int parent = -1;
    std::vector<double> parent_arc;
    for (int id : info.nodes) {
      const auto& st = nodes_[static_cast<std::size_t>(id)].state;
      if (id != nearest && config_distance(st.arms, config) > radius) continue;
      auto arc = st.arc;
      const auto c = motion_.cost(st.arms, config);
      for (std::size_t i = 0; i < r; ++i) arc[i] += c[i];
      if (parent >= 0 && !better_(arc, parent_arc)) continue;
      if (!motion_.feasible(st.arms, config)) {
        ++stats_.rejected_motions;
        continue;
      }
      parent = id;
      parent_arc = std::move(arc);
    }
    if (parent < 0) return std::nullopt;
    const auto id = connect(parent, config);
    if (!id) return std::nullopt;
    rewire(tau, *id, radius);
    return id;
  }

  // Adds a same-tau child of `parent` at `config` without feasibility checks.
  std::optional<int> connect(int parent, const std::vector<Point>& config) {
    const auto& from = nodes_.at(static_cast<std::size_t>(parent));
    TreeNode node;
    node.state = from.state;
    node.state.arms = config;
    const auto c = motion_.cost(from.state.arms, config);
    for (std::size_t i = 0; i < c.size(); ++i) node.state.arc[i] += c[i];
    node.tau = from.tau;
    node.parent = parent;
    node.step_index = from.step_index;
    const int id = add_node_(std::move(node));
    if (id < 0) return std::nullopt;
    return id;
  }

  // Re-parents same-tau neighbors of `id` within `radius` whose per-arm arc
  // lengths would all drop (at least one strictly) by passing through it.
  void rewire(int tau, int id, double radius) {
    const auto& info = taus_.at(static_cast<std::size_t>(tau));
    const std::vector<int> members = info.nodes;
    for (int n : members) {
      if (n == id || n == info.entry || is_ancestor_(n, id)) continue;
      const auto& nn = nodes_[static_cast<std::size_t>(n)];
      const auto& src = nodes_[static_cast<std::size_t>(id)].state;
      if (config_distance(src.arms, nn.state.arms) > radius) continue;
      auto arc = src.arc;
      const auto c = motion_.cost(src.arms, nn.state.arms);
      bool strict = false, dominated = true;
      for (std::size_t i = 0; i < arc.size(); ++i) {
        arc[i] += c[i];
        if (arc[i] > nn.state.arc[i] + 1e-12) dominated = false;
        if (arc[i] < nn.state.arc[i] - 1e-12) strict = true;
      }
      if (!dominated || !strict) continue;
      if (!motion_.feasible(src.arms, nn.state.arms)) {
        ++stats_.rejected_motions;
        continue;
      }
      std::vector<double> delta(arc.size());
      for (std::size_t i = 0; i < arc.size(); ++i) delta[i] = arc[i] - nn.state.arc[i];
      auto& old_children = nodes_[static_cast<std::size_t>(nn.parent)].children;
      old_children.erase(std::remove(old_children.begin(), old_children.end(), n), old_children.end());
      nodes_[static_cast<std::size_t>(n)].parent = id;
      nodes_[static_cast<std::size_t>(id)].children.push_back(n);
      shift_subtree_(n, delta);
      ++stats_.rewires;
    }
  }

  // Passes when `node` grounds every required point of the sample; then a
  // new tau is minted and its entry node (post-action state) returned. An
  // action-free sample passes vacuously and returns `node`.
  std::optional<int> modal_check(int node, const TransitionSample& s) {
    if (all_empty(s.actions)) return node;
    const TreeNode& n = nodes_.at(static_cast<std::size_t>(node));
    for (std::size_t i = 0; i < s.targets.size(); ++i)
      if (s.targets[i] && distance(n.state.arms[i], *s.targets[i]) > 1e-9) return std::nullopt;
    TreeNode child;
    child.state = n.state;
    for (const auto& a : s.actions) {
      if (!a || a->role == HandoffRole::Receive) continue;
      auto& loc = child.state.objects.at(static_cast<std::size_t>(a->object));
      switch (a->kind) {
        case EdgeKind::Pick: loc.vertex = a->arm; break;
        case EdgeKind::Handoff: loc.vertex = a->counterpart; break;
        case EdgeKind::Place: {
          loc.vertex = a->counterpart;
          for (const auto& [obj, pose] : s.place_poses)
            if (obj == a->object) loc.pose = pose;
          break;
        }
      }
    }
    ++stats_.transitions_checked;
    if (child.state.projection() != s.result ||
        !mapf::step_ok(p_.graph, taus_[static_cast<std::size_t>(n.tau)].projection, s.result)) {
      ++stats_.step_violations;
      return std::nullopt;
    }
    child.parent = node;
    child.step_index = n.step_index + 1;
    child.entry_actions = s.actions;
    return mint_tau_(std::move(child), n.tau);
  }

  // Walks parents to the root and groups motions into synchronized steps at
  // tau boundaries.
  Solution retrace(int node) const {
    std::vector<int> chain;
    for (int id = node; id >= 0; id = nodes_[static_cast<std::size_t>(id)].parent) chain.push_back(id);
    std::reverse(chain.begin(), chain.end());
    Solution sol;
    const std::size_t r = p_.num_arms();
    SolutionStep current;
    current.arm_paths.assign(r, {});
    for (std::size_t k = 1; k < chain.size(); ++k) {
      const auto& prev = nodes_[static_cast<std::size_t>(chain[k - 1])];
      const auto& n = nodes_[static_cast<std::size_t>(chain[k])];
      if (n.tau == prev.tau) {
        for (std::size_t i = 0; i < r; ++i) current.arm_paths[i].push_back(n.state.arms[i]);
        continue;
      }
      for (std::size_t i = 0; i < r; ++i)
        if (current.arm_paths[i].empty()) current.arm_paths[i].push_back(n.state.arms[i]);
      current.actions = n.entry_actions;
      current.objects = n.state.objects;
      sol.steps.push_back(std::move(current));
      current = SolutionStep{};
      current.arm_paths.assign(r, {});
    }
    const auto& last = nodes_[static_cast<std::size_t>(node)].state;
    sol.arc = last.arc;
    sol.makespan = last.cost();
    for (const auto& st : sol.steps) sol.n_action_instants += st.has_action() ? 1 : 0;
    return sol;
  }

  // Runs until the budget is spent (or the first solution, if configured).
  PlanResult run() {
    PlanResult result;
    root_mapf_steps_();
    std::optional<Solution> best;
    double best_cost = std::numeric_limits<double>::infinity();
    int best_node = -1;
    double initial_ms = 0.0;
    std::vector<std::pair<double, double>> history;
    // Goal nodes only get cheaper, so checking new and shifted ones suffices.
    const auto refresh = [&]() {
      for (int id : pending_goals_) {
        const double c = nodes_[static_cast<std::size_t>(id)].state.cost();
        if (c < best_cost - 1e-12) {
          if (best_node < 0) initial_ms = now_ms();
          best_cost = c;
          best_node = id;
          history.emplace_back(now_ms(), c);
        }
      }
      pending_goals_.clear();
    };
    refresh();
    while (!(config_.stop_at_first && best_node >= 0) && iterations_ < config_.max_iters &&
           now_ms() < config_.time_budget_ms) {
      ++iterations_;
      const int tau = select_mode();
      if (tau < 0) {
        stats_.exhausted = true;
        break;
      }
      step_(tau);
      if (!pending_goals_.empty()) refresh();
    }
    stats_.iterations = iterations_;
    stats_.nodes = nodes_.size();
    stats_.taus = taus_.size();
    stats_.solver_expansions = guidance_.expansions();
    stats_.plans_checked = guidance_.plans_checked();
    stats_.plan_violations = guidance_.plan_violations();
    stats_.elapsed_ms = now_ms();
    stats_.best_partial = static_cast<int>(p_.goal.size());
    for (const auto& t : taus_) {
      int away = 0;
      for (std::size_t j = 0; j < p_.goal.size(); ++j) away += t.projection[j] != p_.goal[j];
      stats_.best_partial = std::min(stats_.best_partial, away);
    }
    if (best_node >= 0) {
      Solution sol = retrace(best_node);
      sol.initial_solution_ms = initial_ms;
      sol.cost_history = std::move(history);
      sol.mapf_steps_at_root = mapf_steps_at_root_;
      result.solution = std::move(sol);
    }
    result.stats = stats_;
    return result;
  }

  int mapf_steps_at_root() {
    root_mapf_steps_();
    return mapf_steps_at_root_;
  }

 private:
  static bool better_(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = *std::max_element(a.begin(), a.end());
    const double mb = *std::max_element(b.begin(), b.end());
    if (ma < mb - 1e-12) return true;
    if (ma > mb + 1e-12) return false;
    double sa = 0.0, sb = 0.0;
    for (double x : a) sa += x;
    for (double x : b) sb += x;
    return sa < sb - 1e-12;
  }

  void root_mapf_steps_() {
    if (root_mapf_done_) return;
    root_mapf_done_ = true;
    const auto r = mapf::solve_mapf(p_.graph, p_.start.projection(), p_.goal);
    mapf_steps_at_root_ = r.plan ? r.plan->n_steps : -1;
  }

  Point handoff_point_(std::size_t i, std::size_t j) const {
    return midpoint(p_.workspace.arms[i].base, p_.workspace.arms[j].base);
  }

  std::optional<Point> sample_place_pose_(VertexId region, const std::vector<std::pair<VertexId, Point>>& occupied) {
    const auto& spec = p_.region(region);
    for (int attempt = 0; attempt < 64; ++attempt) {
      const Point pose = rng_.in_disk(spec.centroid, spec.extent);
      bool clear = true;
      for (const auto& [v, q] : occupied)
        if (v == region && distance(pose, q) < 2.0 * p_.footprint_radius) {
          clear = false;
          break;
        }
      if (clear) return pose;
    }
    return std::nullopt;
  }

  int add_node_(TreeNode node) {
    ++stats_.states_checked;
    if (!validate_state(p_.graph, node.state.projection()).ok()) {
      ++stats_.capacity_violations;
      return -1;
    }
    const int id = static_cast<int>(nodes_.size());
    if (node.parent >= 0) nodes_[static_cast<std::size_t>(node.parent)].children.push_back(id);
    taus_.at(static_cast<std::size_t>(node.tau)).nodes.push_back(id);
    nodes_.push_back(std::move(node));
    return id;
  }

  int mint_tau_(TreeNode entry, int parent_tau) {
    TauInfo info;
    info.projection = entry.state.projection();
    info.parent_tau = parent_tau;
    info.goal = info.projection == p_.goal;
    const int tau = static_cast<int>(taus_.size());
    entry.tau = tau;
    taus_.push_back(std::move(info));
    const int id = add_node_(std::move(entry));
    if (id < 0) {
      taus_.pop_back();
      return -1;
    }
    auto& t = taus_.back();
    t.entry = id;
    if (t.goal) {
      t.remaining = 0;
      pending_goals_.push_back(id);
    } else {
      const auto& gd = guidance_.at(t.projection);
      t.remaining = gd ? gd->remaining_steps : kUnreachable;
      open_.push_back(tau);
      by_remaining_[t.remaining].push_back(tau);
    }
    return id;
  }

  bool is_ancestor_(int a, int n) const {
    for (int id = n; id >= 0; id = nodes_[static_cast<std::size_t>(id)].parent)
      if (id == a) return true;
    return false;
  }

  void shift_subtree_(int id, const std::vector<double>& delta) {
    std::vector<int> stack{id};
    while (!stack.empty()) {
      const int n = stack.back();
      stack.pop_back();
      auto& arc = nodes_[static_cast<std::size_t>(n)].state.arc;
      for (std::size_t i = 0; i < arc.size(); ++i) arc[i] += delta[i];
      if (taus_[static_cast<std::size_t>(nodes_[static_cast<std::size_t>(n)].tau)].goal) pending_goals_.push_back(n);
      for (int c : nodes_[static_cast<std::size_t>(n)].children) stack.push_back(c);
    }
  }

  static std::string key_(const TransitionSample& s) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& a : s.actions) {
      if (!a) {
        os << "-;";
        continue;
      }
      os << static_cast<int>(a->kind) << ',' << a->object << ',' << a->counterpart << ','
         << static_cast<int>(a->role) << ';';
    }
    for (const auto& [obj, pose] : s.place_poses) os << obj << ':' << pose.x << ',' << pose.y << ',' << pose.z << ';';
    return os.str();
  }

  void step_(int tau) {
    const MultiModalState projection = taus_[static_cast<std::size_t>(tau)].projection;
    const auto guid = guidance_.at(projection);  // copy: the cache may rehash
    std::optional<TransitionSample> sample;
    const bool guided_available = guid && !all_empty(guid->goal);
    if (guided_available && rng_.bernoulli(config_.guidance_fraction))
      sample = ground(tau, guid->goal, &guid->heuristic);
    if (config_.pure_guidance) {
      if (!sample) {
        close_(tau);
        return;
      }
    } else if (!sample) {
      auto& info = taus_[static_cast<std::size_t>(tau)];
      if (!info.pool_built || rng_.bernoulli(config_.add_fraction)) {
        auto fresh = sample_trans(tau, config_.samples_per_transition);
        auto& again = taus_[static_cast<std::size_t>(tau)];
        again.pool_built = true;
        for (auto& f : fresh) again.pool.push_back(std::move(f));
      }
      auto& pool = taus_[static_cast<std::size_t>(tau)].pool;
      if (pool.empty()) {
        close_(tau);
        return;
      }
      sample = pool[rng_.index(pool.size())];
    }
    const std::string key = key_(*sample);
    if (taus_[static_cast<std::size_t>(tau)].realized.count(key)) {
      if (config_.pure_guidance) close_(tau);
      return;
    }
    const auto node = extend(tau, *sample);
    if (!node) return;
    const auto child = modal_check(*node, *sample);
    if (!child || *child == *node) return;
    auto& info = taus_[static_cast<std::size_t>(tau)];
    info.realized.insert(key);
    if (config_.pure_guidance) close_(tau);
  }

  void close_(int tau) {
    auto& t = taus_[static_cast<std::size_t>(tau)];
    if (t.exhausted || t.goal) return;
    t.exhausted = true;
    open_.erase(std::lower_bound(open_.begin(), open_.end(), tau));
    auto it = by_remaining_.find(t.remaining);
    auto& bucket = it->second;
    bucket.erase(std::lower_bound(bucket.begin(), bucket.end(), tau));
    if (bucket.empty()) by_remaining_.erase(it);
  }

  const PlanningProblem& p_;
  const MotionModel& motion_;
  PlannerConfig config_;
  Rng rng_;
  GuidanceProvider guidance_;
  std::vector<TreeNode> nodes_;
  std::vector<TauInfo> taus_;
  std::vector<int> pending_goals_;
  std::vector<int> open_;                      // non-goal, non-exhausted taus, ascending
  std::map<int, std::vector<int>> by_remaining_;  // the same, bucketed by remaining steps
  PlannerStats stats_;
  long iterations_{0};
  double extension_sum_{0.0};
  long extension_count_{0};
  bool root_mapf_done_{false};
  int mapf_steps_at_root_{-1};
  std::chrono::steady_clock::time_point start_;
};

inline PlanResult plan(const PlanningProblem& problem, const MotionModel& motion, const PlannerConfig& config) {
  Planner planner(problem, motion, config);
  return planner.run();
}

}  // namespace marp
