#pragma once

#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "marp/error.hpp"
#include "marp/geometry.hpp"
#include "marp/mapf/step_rules.hpp"
#include "marp/mode_graph.hpp"
#include "marp/planner/motion.hpp"
#include "marp/planner/task_state.hpp"

// Step-trace text format:
//
//   # step-trace arms=L,R objects=A,B
//   1<TAB>L|pick:A@S1|x,y,z;x,y,z<TAB>R|NOACT|x,y,z<TAB>A@L<TAB>B@S2:x,y,z
//
// One line per synchronized step, numbered from 1. Each arm field lists the
// arm id, its action (pick/place/give/receive:OBJECT@COUNTERPART or NOACT)
// and the waypoints it visits during the step; the last waypoint is the
// grounding point. Object fields give the location after the step: an arm
// id when held, otherwise region id and pose.
namespace marp {

namespace trace_detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline std::string fmt(const Point& p) { return fmt(p.x) + "," + fmt(p.y) + "," + fmt(p.z); }

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline double number(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("trace: bad number '" + s + "'");
  }
}

inline Point point(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 3) throw InputError("trace: bad point '" + s + "'");
  return {number(parts[0]), number(parts[1]), number(parts[2])};
}

}  // namespace trace_detail

inline void write_trace(std::ostream& os, const PlanningProblem& p, const Solution& sol) {
  using trace_detail::fmt;
  const auto& g = p.graph;
  os << "# step-trace arms=";
  for (std::size_t i = 0; i < p.workspace.arms.size(); ++i) os << (i ? "," : "") << p.workspace.arms[i].id;
  os << " objects=";
  for (std::size_t j = 0; j < p.object_ids.size(); ++j) os << (j ? "," : "") << p.object_ids[j];
  os << "\n";
  for (std::size_t k = 0; k < sol.steps.size(); ++k) {
    const auto& st = sol.steps[k];
    os << (k + 1);
    for (std::size_t i = 0; i < p.workspace.arms.size(); ++i) {
      os << '\t' << p.workspace.arms[i].id << '|';
      if (i < st.actions.size() && st.actions[i])
        os << describe(g, *st.actions[i], p.object_ids);
      else
        os << "NOACT";
      os << '|';
      for (std::size_t w = 0; w < st.arm_paths[i].size(); ++w) os << (w ? ";" : "") << fmt(st.arm_paths[i][w]);
    }
    for (std::size_t j = 0; j < st.objects.size(); ++j) {
      const auto& loc = st.objects[j];
      os << '\t' << p.object_ids[j] << '@' << g.vertex(loc.vertex).id;
      if (!g.is_arm(loc.vertex)) os << ':' << fmt(loc.pose);
    }
    os << '\n';
  }
}

// A parsed step: per-arm action text and waypoints, per-object location.
struct TraceStep {
  std::vector<std::string> actions;  // "NOACT" or kind:object@counterpart
  std::vector<std::vector<Point>> arm_paths;
  std::vector<std::string> object_vertex;
  std::vector<std::optional<Point>> object_pose;
};

struct Trace {
  std::vector<std::string> arms;
  std::vector<std::string> objects;
  std::vector<TraceStep> steps;
};

inline Trace read_trace(std::istream& is) {
  using namespace trace_detail;
  Trace t;
  std::string line;
  bool header = false;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string word;
      hs >> word;
      if (word != "step-trace") continue;
      while (hs >> word) {
        if (word.rfind("arms=", 0) == 0) t.arms = split(word.substr(5), ',');
        if (word.rfind("objects=", 0) == 0) t.objects = split(word.substr(8), ',');
      }
      header = true;
      continue;
    }
    if (!header) throw InputError("trace: missing '# step-trace' header");
    const auto fields = split(line, '\t');
    const std::string where = "trace line " + std::to_string(line_no);
    if (fields.size() != 1 + t.arms.size() + t.objects.size()) throw InputError(where + ": wrong field count");
    if (static_cast<std::size_t>(number(fields[0])) != t.steps.size() + 1)
      throw InputError(where + ": steps must be numbered consecutively from 1");
    TraceStep st;
    for (std::size_t i = 0; i < t.arms.size(); ++i) {
      const auto parts = split(fields[1 + i], '|');
      if (parts.size() != 3 || parts[0] != t.arms[i]) throw InputError(where + ": bad arm field");
      st.actions.push_back(parts[1]);
      std::vector<Point> path;
      for (const auto& w : split(parts[2], ';')) path.push_back(point(w));
      if (path.empty()) throw InputError(where + ": arm field without waypoints");
      st.arm_paths.push_back(std::move(path));
    }
    for (std::size_t j = 0; j < t.objects.size(); ++j) {
      const auto& f = fields[1 + t.arms.size() + j];
      const auto at = f.find('@');
      if (at == std::string::npos || f.substr(0, at) != t.objects[j]) throw InputError(where + ": bad object field");
      const auto rest = f.substr(at + 1);
      const auto colon = rest.find(':');
      st.object_vertex.push_back(rest.substr(0, colon));
      st.object_pose.push_back(colon == std::string::npos ? std::nullopt
                                                          : std::optional<Point>(point(rest.substr(colon + 1))));
    }
    t.steps.push_back(std::move(st));
  }
  if (!header) throw InputError("trace: missing '# step-trace' header");
  return t;
}

struct ReplayReport {
  std::vector<std::string> problems;
  int steps{0};
  int action_steps{0};
  double makespan{0.0};

  bool ok() const { return problems.empty(); }
};

// Replays a trace from the problem's start: motions must be feasible under
// the motion model, every action must be grounded at the right point with
// the right preconditions, the mode step must satisfy the step rules, and
// the final arrangement must put every object in its goal region.
inline ReplayReport replay(const PlanningProblem& p, const Trace& t, const MotionModel& motion) {
  constexpr double kTol = 1e-6;
  ReplayReport rep;
  const auto& g = p.graph;
  const auto& w = p.workspace;
  const std::size_t r = w.arms.size();
  const std::size_t k = p.object_ids.size();
  auto fail = [&](int step, const std::string& msg) {
    rep.problems.push_back((step > 0 ? "step " + std::to_string(step) + ": " : std::string()) + msg);
  };
  if (t.arms.size() != r || t.objects.size() != k) {
    fail(0, "trace arms/objects do not match the scenario");
    return rep;
  }
  for (std::size_t i = 0; i < r; ++i)
    if (t.arms[i] != w.arms[i].id) fail(0, "arm order differs from the scenario");
  for (std::size_t j = 0; j < k; ++j)
    if (t.objects[j] != p.object_ids[j]) fail(0, "object order differs from the scenario");
  if (!rep.ok()) return rep;

  std::map<std::string, std::size_t> arm_index, object_index;
  for (std::size_t i = 0; i < r; ++i) arm_index[w.arms[i].id] = i;
  for (std::size_t j = 0; j < k; ++j) object_index[p.object_ids[j]] = j;
  std::map<std::string, const RegionSpec*> regions;
  for (const auto& reg : w.regions) regions[reg.id] = &reg;

  std::vector<Point> arms;
  for (const auto& a : w.arms) arms.push_back(a.base);
  std::vector<std::string> where(k);  // region or arm id
  std::vector<Point> pose(k);
  for (std::size_t j = 0; j < k; ++j) {
    where[j] = g.vertex(p.start.objects[j].vertex).id;
    pose[j] = p.start.objects[j].pose;
  }
  std::vector<double> arc(r, 0.0);

  for (std::size_t s = 0; s < t.steps.size(); ++s) {
    const int step = static_cast<int>(s + 1);
    const auto& st = t.steps[s];
    // Motion, segment by segment, all arms synchronized.
    std::size_t segments = 0;
    for (const auto& path : st.arm_paths) segments = std::max(segments, path.size());
    for (std::size_t m = 0; m < segments; ++m) {
      std::vector<Point> next = arms;
      for (std::size_t i = 0; i < r; ++i)
        next[i] = st.arm_paths[i][std::min(m, st.arm_paths[i].size() - 1)];
      if (!motion.feasible(arms, next)) fail(step, "infeasible motion in segment " + std::to_string(m + 1));
      const auto c = motion.cost(arms, next);
      for (std::size_t i = 0; i < r; ++i) arc[i] += c[i];
      arms = std::move(next);
    }
    // Actions.
    MultiModalState before, after;
    for (std::size_t j = 0; j < k; ++j) before.modes.push_back(g.at(where[j]));
    auto new_where = where;
    auto new_pose = pose;
    bool acted = false;
    std::map<std::string, std::pair<std::size_t, std::size_t>> gives, receives;  // object -> (arm, partner)
    for (std::size_t i = 0; i < r; ++i) {
      const auto& text = st.actions[i];
      if (text == "NOACT") continue;
      acted = true;
      const auto colon = text.find(':');
      const auto at = text.find('@');
      if (colon == std::string::npos || at == std::string::npos || at < colon) {
        fail(step, "unparsable action '" + text + "'");
        continue;
      }
      const auto kind = text.substr(0, colon);
      const auto obj_id = text.substr(colon + 1, at - colon - 1);
      const auto counterpart = text.substr(at + 1);
      auto oi = object_index.find(obj_id);
      if (oi == object_index.end()) {
        fail(step, "unknown object '" + obj_id + "'");
        continue;
      }
      const std::size_t j = oi->second;
      const std::string& arm = w.arms[i].id;
      if (kind == "pick") {
        if (where[j] != counterpart || !regions.count(counterpart))
          fail(step, arm + " picks " + obj_id + " from " + counterpart + " but it is at " + where[j]);
        else if (distance(arms[i], pose[j]) > kTol)
          fail(step, arm + " is not at " + obj_id + "'s pose when picking");
        new_where[j] = arm;
      } else if (kind == "place") {
        auto reg = regions.find(counterpart);
        if (where[j] != arm) fail(step, arm + " places " + obj_id + " without holding it");
        if (reg == regions.end()) {
          fail(step, "place into unknown region '" + counterpart + "'");
          continue;
        }
        if (distance(arms[i], reg->second->centroid) > reg->second->extent + kTol)
          fail(step, arm + " places " + obj_id + " outside " + counterpart);
        new_where[j] = counterpart;
        new_pose[j] = arms[i];
      } else if (kind == "give" || kind == "receive") {
        auto partner = arm_index.find(counterpart);
        if (partner == arm_index.end()) {
          fail(step, "handoff with unknown arm '" + counterpart + "'");
          continue;
        }
        const Point meet = midpoint(w.arms[i].base, w.arms[partner->second].base);
        if (distance(arms[i], meet) > kTol) fail(step, arm + " is not at the handoff point");
        if (kind == "give") {
          if (where[j] != arm) fail(step, arm + " gives " + obj_id + " without holding it");
          gives[obj_id] = {i, partner->second};
          new_where[j] = counterpart;
        } else {
          receives[obj_id] = {i, partner->second};
        }
      } else {
        fail(step, "unknown action kind '" + kind + "'");
      }
    }
    for (const auto& [obj, gr] : gives) {
      auto it = receives.find(obj);
      if (it == receives.end() || it->second.first != gr.second || it->second.second != gr.first)
        fail(step, "handoff of " + obj + " lacks a matching receive");
    }
    for (const auto& [obj, rc] : receives)
      if (!gives.count(obj)) fail(step, "receive of " + obj + " lacks a matching give");
    if (!acted) fail(step, "step realizes no action");
    else ++rep.action_steps;
    for (std::size_t j = 0; j < k; ++j) {
      auto v = g.find(new_where[j]);
      if (!v) {
        fail(step, "object at unknown vertex");
        return rep;
      }
      after.modes.push_back(*v);
    }
    for (const auto& v : mapf::step_violations(g, before, after)) fail(step, v.describe(g));
    // Placed poses must not intersect other grounded objects in the region.
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b) {
        if (g.is_arm(after[a]) || after[a] != after[b]) continue;
        if ((new_where[a] != where[a] || new_where[b] != where[b]) &&
            distance(new_pose[a], new_pose[b]) < 2.0 * p.footprint_radius - kTol)
          fail(step, "objects " + p.object_ids[a] + " and " + p.object_ids[b] + " intersect");
      }
    // The trace's own object column must agree with the replay.
    for (std::size_t j = 0; j < k; ++j) {
      if (st.object_vertex[j] != new_where[j]) fail(step, "object column for " + p.object_ids[j] + " disagrees");
      else if (!g.is_arm(after[j]) && (!st.object_pose[j] || distance(*st.object_pose[j], new_pose[j]) > kTol))
        fail(step, "pose column for " + p.object_ids[j] + " disagrees");
    }
    where = std::move(new_where);
    pose = std::move(new_pose);
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (g.at(where[j]) != p.goal[j]) {
      rep.problems.push_back("object " + p.object_ids[j] + " ends at " + where[j] + ", not its goal");
      continue;
    }
    const auto* reg = regions.at(where[j]);
    if (distance(pose[j], reg->centroid) > reg->extent + kTol)
      rep.problems.push_back("object " + p.object_ids[j] + " ends outside its goal region");
  }
  rep.steps = static_cast<int>(t.steps.size());
  for (double a : arc) rep.makespan = std::max(rep.makespan, a);
  return rep;
}

inline ReplayReport replay(const PlanningProblem& p, const Solution& sol, const MotionModel& motion) {
  std::stringstream ss;
  write_trace(ss, p, sol);
  auto rep = replay(p, read_trace(ss), motion);
  if (rep.ok() && std::abs(rep.makespan - sol.makespan) > 1e-6)
    rep.problems.push_back("reported makespan " + trace_detail::fmt(sol.makespan) + " differs from replayed " +
                           trace_detail::fmt(rep.makespan));
  return rep;
}

}  // namespace marp
