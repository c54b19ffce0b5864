#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "marp/error.hpp"
#include "marp/geometry.hpp"
#include "marp/mode_graph.hpp"
#include "marp/random.hpp"

namespace marp::bench {

enum class Family { Switch, SideToSide, Random, SwapBuffer, Custom };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::Switch: return "switch";
    case Family::SideToSide: return "side_to_side";
    case Family::Random: return "random";
    case Family::SwapBuffer: return "swap_buffer";
    case Family::Custom: return "custom";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "switch") return Family::Switch;
  if (s == "side_to_side") return Family::SideToSide;
  if (s == "random") return Family::Random;
  if (s == "swap_buffer") return Family::SwapBuffer;
  if (s == "custom") return Family::Custom;
  throw InputError("unknown family '" + s + "'");
}

struct ObjectSpec {
  std::string id;
  std::string start_region;
  Point start_pose;
  std::string goal_region;
  Point goal_pose;
};

struct Scenario {
  Workspace workspace;
  std::vector<ObjectSpec> objects;
  double footprint_radius{0.0};
  std::uint64_t seed{0};
  Family family{Family::Custom};

  std::string id() const {
    return std::string(to_string(family)) + "-r" + std::to_string(workspace.arms.size()) + "-k" +
           std::to_string(objects.size()) + "-s" + std::to_string(seed);
  }

  std::vector<std::string> object_ids() const {
    std::vector<std::string> ids;
    for (const auto& o : objects) ids.push_back(o.id);
    return ids;
  }

  std::vector<std::pair<std::string, std::string>> start_arrangement() const {
    std::vector<std::pair<std::string, std::string>> a;
    for (const auto& o : objects) a.emplace_back(o.id, o.start_region);
    return a;
  }

  std::vector<std::pair<std::string, std::string>> goal_arrangement() const {
    std::vector<std::pair<std::string, std::string>> a;
    for (const auto& o : objects) a.emplace_back(o.id, o.goal_region);
    return a;
  }

  // Throws InputError unless object ids are unique, start and goal regions
  // exist and are served, poses lie in their region extents, and poses on
  // the same side do not intersect.
  void validate() const {
    workspace.validate();
    if (footprint_radius < 0.0) throw InputError("footprint_radius must be >= 0");
    const auto g = build_mode_graph(workspace);
    std::map<std::string, const RegionSpec*> regions;
    for (const auto& r : workspace.regions) regions[r.id] = &r;
    std::set<std::string> ids;
    const auto check_pose = [&](const std::string& object, const std::string& region, const Point& p) {
      auto it = regions.find(region);
      if (it == regions.end()) throw InputError("object '" + object + "' uses unknown region '" + region + "'");
      if (distance(p, it->second->centroid) > it->second->extent + 1e-9)
        throw InputError("object '" + object + "' pose lies outside region '" + region + "'");
    };
    for (const auto& o : objects) {
      if (o.id.empty()) throw InputError("object with empty id");
      if (!ids.insert(o.id).second) throw InputError("duplicate object id '" + o.id + "'");
      if (g.find(o.id)) throw InputError("object id '" + o.id + "' collides with an arm or region id");
      check_pose(o.id, o.start_region, o.start_pose);
      check_pose(o.id, o.goal_region, o.goal_pose);
    }
    const auto check_separation = [&](bool start) {
      for (std::size_t i = 0; i < objects.size(); ++i)
        for (std::size_t j = i + 1; j < objects.size(); ++j) {
          const auto& a = objects[i];
          const auto& b = objects[j];
          const bool same = start ? a.start_region == b.start_region : a.goal_region == b.goal_region;
          if (!same) continue;
          const double d = start ? distance(a.start_pose, b.start_pose) : distance(a.goal_pose, b.goal_pose);
          if (d < 2.0 * footprint_radius)
            throw InputError("objects '" + a.id + "' and '" + b.id + "' intersect at their " +
                             (start ? "start" : "goal") + " poses");
        }
    };
    check_separation(true);
    check_separation(false);
    const auto sa = start_arrangement();
    const auto ga = goal_arrangement();
    mode_of(g, sa);
    mode_of(g, ga);
  }
};

// JSON helpers -------------------------------------------------------------

inline Point point_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3)
    throw InputError(what + " must be an array of 2 or 3 numbers");
  for (const auto& v : j)
    if (!v.is_number()) throw InputError(what + " must contain numbers");
  return {j[0].get<double>(), j[1].get<double>(), j.size() == 3 ? j[2].get<double>() : 0.0};
}

inline nlohmann::json point_to_json(const Point& p) {
  if (p.z != 0.0) return nlohmann::json::array({p.x, p.y, p.z});
  return nlohmann::json::array({p.x, p.y});
}

inline nlohmann::json to_json(const Scenario& s) {
  nlohmann::json j;
  j["arms"] = nlohmann::json::array();
  for (const auto& a : s.workspace.arms)
    j["arms"].push_back({{"id", a.id}, {"base", point_to_json(a.base)}, {"reach", a.reach}});
  j["regions"] = nlohmann::json::array();
  for (const auto& r : s.workspace.regions)
    j["regions"].push_back(
        {{"id", r.id}, {"centroid", point_to_json(r.centroid)}, {"capacity", r.capacity}, {"extent", r.extent}});
  j["handoff_distance"] = s.workspace.handoff_distance;
  j["objects"] = nlohmann::json::array();
  for (const auto& o : s.objects)
    j["objects"].push_back({{"id", o.id},
                            {"start_region", o.start_region},
                            {"start_pose", point_to_json(o.start_pose)},
                            {"goal_region", o.goal_region},
                            {"goal_pose", point_to_json(o.goal_pose)}});
  j["footprint_radius"] = s.footprint_radius;
  j["seed"] = s.seed;
  j["family"] = to_string(s.family);
  return j;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw InputError("scenario must be a JSON object");
    Scenario s;
    for (const auto& a : j.at("arms"))
      s.workspace.arms.push_back({a.at("id").get<std::string>(), point_from_json(a.at("base"), "arm base"),
                                  a.at("reach").get<double>()});
    for (const auto& r : j.at("regions"))
      s.workspace.regions.push_back({r.at("id").get<std::string>(), point_from_json(r.at("centroid"), "centroid"),
                                     r.at("capacity").get<int>(), r.value("extent", 0.0)});
    s.workspace.handoff_distance = j.at("handoff_distance").get<double>();
    for (const auto& o : j.at("objects"))
      s.objects.push_back({o.at("id").get<std::string>(), o.at("start_region").get<std::string>(),
                           point_from_json(o.at("start_pose"), "start_pose"), o.at("goal_region").get<std::string>(),
                           point_from_json(o.at("goal_pose"), "goal_pose")});
    s.footprint_radius = j.value("footprint_radius", 0.0);
    s.seed = j.value("seed", std::uint64_t{0});
    s.family = parse_family(j.value("family", std::string("custom")));
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("scenario JSON: ") + e.what());
  }
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("scenario '" + path + "': " + e.what());
  }
  return scenario_from_json(j);
}

inline std::string dump_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

// Generation -----------------------------------------------------------------

// Table and arm layout shared by the two-table families: table regions S1 at
// x = 0 and S2 at x = r + 1, arms a1..ar at x = 1..r. Each end arm reaches
// its adjacent table and consecutive arms are within handoff distance.
struct LayoutParams {
  double spacing{1.0};
  double reach{1.2};
  double handoff_distance{1.1};
  double table_extent{0.3};
  double footprint_radius{0.03};
  int capacity{0};  // per table; zero means k
};

inline Workspace two_table_workspace(int r, int capacity, const LayoutParams& p = {}) {
  Workspace w;
  for (int i = 1; i <= r; ++i)
    w.arms.push_back({"a" + std::to_string(i), {p.spacing * i, 0.0, 0.0}, p.reach});
  w.regions.push_back({"S1", {0.0, 0.0, 0.0}, capacity, p.table_extent});
  w.regions.push_back({"S2", {p.spacing * (r + 1), 0.0, 0.0}, capacity, p.table_extent});
  w.handoff_distance = p.handoff_distance;
  return w;
}

// Two arms sharing a unit-capacity buffer between unit-capacity regions.
inline Workspace swap_buffer_workspace() {
  Workspace w;
  w.arms = {{"L", {0, 0, 0}, 1.5}, {"R", {2, 0, 0}, 1.5}};
  w.regions = {{"P1", {0, 1, 0}, 1, 0.1}, {"P2", {2, 1, 0}, 1, 0.1}, {"Bf", {1, 1, 0}, 1, 0.1}};
  w.handoff_distance = 2.0;
  return w;
}

namespace detail {

inline Point sample_pose(Rng& rng, const RegionSpec& region, const std::vector<Point>& taken, double footprint) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const Point p = rng.in_disk(region.centroid, region.extent);
    bool clear = true;
    for (const auto& q : taken)
      if (distance(p, q) < 2.0 * footprint) {
        clear = false;
        break;
      }
    if (clear) return p;
  }
  throw InputError("no free pose left in region '" + region.id + "'");
}

}  // namespace detail

// Pure function of (family, r, k, seed).
inline Scenario generate(Family family, int r, int k, std::uint64_t seed, const LayoutParams& params = {}) {
  if (r < 1) throw InputError("need at least one arm");
  if (k < 1) throw InputError("need at least one object");
  Scenario s;
  s.family = family;
  s.seed = seed;
  s.footprint_radius = params.footprint_radius;
  Rng rng(mix_seed(seed, 0x5ce9a710));

  std::vector<bool> forward(static_cast<std::size_t>(k), true);
  switch (family) {
    case Family::Switch:
      for (int j = 0; j < k; ++j) forward[static_cast<std::size_t>(j)] = j < (k + 1) / 2;
      break;
    case Family::SideToSide: break;
    case Family::Random:
      for (int j = 0; j < k; ++j) forward[static_cast<std::size_t>(j)] = rng.bernoulli(0.5);
      break;
    case Family::SwapBuffer: {
      if (r != 2 || k != 2) throw InputError("swap_buffer needs exactly 2 arms and 2 objects");
      s.workspace = swap_buffer_workspace();
      s.objects = {{"o1", "P1", {0, 1, 0}, "P2", {2, 1, 0}}, {"o2", "P2", {2, 1, 0}, "P1", {0, 1, 0}}};
      s.validate();
      return s;
    }
    case Family::Custom: throw InputError("custom scenarios are loaded from file, not generated");
  }

  const int capacity = params.capacity > 0 ? params.capacity : k;
  const auto forward_count = static_cast<int>(std::count(forward.begin(), forward.end(), true));
  if (std::max(forward_count, k - forward_count) > capacity)
    throw InputError(std::to_string(k) + " objects exceed the goal-side capacity " + std::to_string(capacity));
  s.workspace = two_table_workspace(r, capacity, params);
  const auto& t1 = s.workspace.regions[0];
  const auto& t2 = s.workspace.regions[1];
  std::map<std::string, std::vector<Point>> start_taken, goal_taken;
  for (int j = 0; j < k; ++j) {
    const bool fwd = forward[static_cast<std::size_t>(j)];
    const auto& from = fwd ? t1 : t2;
    const auto& to = fwd ? t2 : t1;
    ObjectSpec o;
    o.id = "o" + std::to_string(j + 1);
    o.start_region = from.id;
    o.goal_region = to.id;
    o.start_pose = detail::sample_pose(rng, from, start_taken[from.id], s.footprint_radius);
    start_taken[from.id].push_back(o.start_pose);
    o.goal_pose = detail::sample_pose(rng, to, goal_taken[to.id], s.footprint_radius);
    goal_taken[to.id].push_back(o.goal_pose);
    s.objects.push_back(std::move(o));
  }
  s.validate();
  return s;
}

}  // namespace marp::bench
