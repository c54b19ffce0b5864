#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "marp/error.hpp"
#include "marp/mapf/time_expanded_graph.hpp"
#include "marp/mode_graph.hpp"

namespace marp::mapf {

enum class Sense { LessEq, Equal, GreaterEq };

struct Term {
  int var{-1};
  double coef{0.0};
};

enum class RowKind { FlowConservation, HeadOn, Occupancy, Throughput, ObjectiveBound };

struct Row {
  std::vector<Term> terms;
  Sense sense{Sense::LessEq};
  double rhs{0.0};
  RowKind kind{RowKind::FlowConservation};
};

struct Variable {
  int object{-1};  // -1 for the objective variable
  int arc{-1};
  int step{-1};
  bool binary{true};
  double lower{0.0};
  double upper{1.0};
};

// 0/1 program over x[object, arc] plus one continuous objective variable z:
//   minimize z
//   s.t. per-object unit flow conservation on the time-expanded graph,
//        head-on exclusion, occupancy and throughput capacities,
//        z >= sum_arcs C'(arc) x[object, arc] for every object,
// with C'(arc) = (1 + step) * base_cost(arc).
struct IlpModel {
  int num_objects{0};
  int num_arcs{0};
  int horizon{0};
  std::vector<Variable> vars;
  std::vector<Row> rows;
  int objective_var{-1};

  int var_index(int object, int arc) const { return object * num_arcs + arc; }

  static double tolerance() { return 1e-7; }

  // True when `values` satisfies bounds, integrality, and every row.
  bool satisfied(std::span<const double> values, std::string* why = nullptr) const {
    const double tol = tolerance();
    if (values.size() != vars.size()) {
      if (why) *why = "value vector has the wrong size";
      return false;
    }
    for (std::size_t j = 0; j < vars.size(); ++j) {
      const auto& v = vars[j];
      if (values[j] < v.lower - tol || values[j] > v.upper + tol ||
          (v.binary && std::abs(values[j] - std::round(values[j])) > tol)) {
        if (why) *why = "variable " + std::to_string(j) + " out of bounds";
        return false;
      }
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      double act = 0.0;
      for (const auto& t : rows[r].terms) act += t.coef * values[static_cast<std::size_t>(t.var)];
      const double rhs = rows[r].rhs;
      const bool ok = rows[r].sense == Sense::LessEq   ? act <= rhs + tol
                      : rows[r].sense == Sense::Equal ? std::abs(act - rhs) <= tol
                                                       : act >= rhs - tol;
      if (!ok) {
        if (why) *why = "row " + std::to_string(r) + " violated";
        return false;
      }
    }
    return true;
  }
};

// Time-weighted arc cost; slice-0 departures carry weight 1.
inline double time_weighted_cost(const Arc& a) { return (1.0 + a.step) * a.base_cost; }

inline IlpModel build_model(const TimeExpandedGraph& teg, const ModeGraph& g,
                            const MultiModalState& q_init, const MultiModalState& q_goal) {
  if (q_init.size() != q_goal.size()) throw InputError("start and goal have different sizes");
  const int n = static_cast<int>(g.num_vertices());
  if (teg.num_vertices() != n) throw InputError("time-expanded graph built from another graph");
  for (std::size_t j = 0; j < q_init.size(); ++j) {
    if (q_init[j] < 0 || q_init[j] >= n) throw InputError("start vertex missing from mode graph");
    if (q_goal[j] < 0 || q_goal[j] >= n) throw InputError("goal vertex missing from mode graph");
  }
  if (!validate_state(g, q_init).ok()) throw InputError("start state exceeds capacity");
  if (!validate_state(g, q_goal).ok()) throw InputError("goal state exceeds capacity");

  IlpModel m;
  m.num_objects = static_cast<int>(q_init.size());
  m.num_arcs = static_cast<int>(teg.arcs().size());
  m.horizon = teg.horizon();
  const int T = teg.horizon();

  for (int i = 0; i < m.num_objects; ++i)
    for (const auto& a : teg.arcs()) m.vars.push_back({i, a.id, a.step, true, 0.0, 1.0});
  m.objective_var = static_cast<int>(m.vars.size());
  m.vars.push_back({-1, -1, -1, false, 0.0, std::numeric_limits<double>::infinity()});

  // Flow conservation: inflow - outflow = demand(node).
  for (int i = 0; i < m.num_objects; ++i) {
    const auto obj = static_cast<std::size_t>(i);
    for (int node = 0; node < teg.num_nodes(); ++node) {
      Row row;
      row.kind = RowKind::FlowConservation;
      row.sense = Sense::Equal;
      for (int a : teg.in_arcs(node)) row.terms.push_back({m.var_index(i, a), 1.0});
      for (int a : teg.out_arcs(node)) row.terms.push_back({m.var_index(i, a), -1.0});
      if (teg.is_slice_node(node)) {
        const VertexId v = teg.vertex_of(node);
        const int t = teg.slice_of(node);
        if (t == 0 && v == q_init[obj]) row.rhs -= 1.0;
        if (t == T && v == q_goal[obj]) row.rhs += 1.0;
      }
      m.rows.push_back(std::move(row));
    }
  }

  // (a) at most one object crosses a bidirectional pair per step.
  for (const auto& gd : teg.gadgets()) {
    Row row;
    row.kind = RowKind::HeadOn;
    row.sense = Sense::LessEq;
    row.rhs = 1.0;
    for (int i = 0; i < m.num_objects; ++i) row.terms.push_back({m.var_index(i, gd.core_arc), 1.0});
    m.rows.push_back(std::move(row));
  }

  // (b) occupancy of every slice vertex after the first slice.
  for (int t = 1; t <= T; ++t) {
    for (VertexId v = 0; v < n; ++v) {
      Row row;
      row.kind = RowKind::Occupancy;
      row.sense = Sense::LessEq;
      row.rhs = g.capacity(v);
      for (int i = 0; i < m.num_objects; ++i)
        for (int a : teg.in_arcs(teg.slice_node(v, t))) row.terms.push_back({m.var_index(i, a), 1.0});
      m.rows.push_back(std::move(row));
    }
  }

  // (c) throughput: non-stay departures from v_t plus non-stay arrivals at
  // v_{t+1}.
  for (int t = 0; t < T; ++t) {
    for (VertexId v = 0; v < n; ++v) {
      Row row;
      row.kind = RowKind::Throughput;
      row.sense = Sense::LessEq;
      row.rhs = g.capacity(v);
      for (int i = 0; i < m.num_objects; ++i) {
        for (int a : teg.out_arcs(teg.slice_node(v, t)))
          if (teg.arc(a).kind != ArcKind::Stay) row.terms.push_back({m.var_index(i, a), 1.0});
        for (int a : teg.in_arcs(teg.slice_node(v, t + 1)))
          if (teg.arc(a).kind != ArcKind::Stay) row.terms.push_back({m.var_index(i, a), 1.0});
      }
      m.rows.push_back(std::move(row));
    }
  }

  // z >= C'(path of object i).
  for (int i = 0; i < m.num_objects; ++i) {
    Row row;
    row.kind = RowKind::ObjectiveBound;
    row.sense = Sense::GreaterEq;
    row.rhs = 0.0;
    row.terms.push_back({m.objective_var, 1.0});
    for (const auto& a : teg.arcs()) {
      const double c = time_weighted_cost(a);
      if (c != 0.0) row.terms.push_back({m.var_index(i, a.id), -c});
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

}  // namespace marp::mapf
