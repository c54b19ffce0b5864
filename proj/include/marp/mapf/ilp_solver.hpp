#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "marp/error.hpp"
#include "marp/mapf/ilp_model.hpp"

namespace marp::mapf {

struct SolveOptions {
  // Stop at the first integer-feasible assignment instead of optimizing.
  bool feasibility_only{false};
  std::size_t max_expansions{20'000'000};
};

struct SolveStats {
  std::size_t expansions{0};  // search nodes expanded over all phases
  std::size_t options{0};     // per-object step options enumerated
};

struct IlpSolution {
  enum class Status { Optimal, Feasible, Infeasible };
  Status status{Status::Infeasible};
  std::vector<double> values;
  double objective{std::numeric_limits<double>::infinity()};  // z = max object cost
  double total_cost{std::numeric_limits<double>::infinity()};  // sum of object costs
  SolveStats stats;

  bool feasible() const { return status != Status::Infeasible; }
};

namespace detail {

// Exact solver for 0/1 programs with a time-layered block structure:
//   - every binary variable belongs to one object (block) and one step;
//   - single-object rows span at most two consecutive steps;
//   - rows coupling several objects lie within one step;
//   - the objective is min z with rows z - sum_j c_j x_j >= 0, one per object.
// The search walks steps in order. A state is the vector of per-object
// "boundaries": the partial activities of that object's rows linking step
// t-1 to step t. Per-object options for a step are all 0/1 assignments of
// its step variables that satisfy its rows; coupling rows are checked when
// objects are combined.
//
// Optimization is hierarchical: minimize the largest object cost, then the
// sum of object costs, then take the lexicographically smallest assignment
// with variables ordered by (step, object, variable index). Phase one is a
// best-first search bounded by per-object cost-to-go; phase two is a
// depth-first search for the lexicographically first assignment within the
// optimal bounds.
class LayeredSolver {
 public:
  explicit LayeredSolver(const IlpModel& m, SolveOptions opts) : m_(m), opts_(opts) { analyze_(); }

  IlpSolution solve() {
    IlpSolution sol;
    if (trivially_infeasible_) return finish_(sol);
    const std::vector<int> root = root_joint_();
    for (int i = 0; i < nobj_; ++i)
      if (std::isinf(h_(i, 0, root[static_cast<std::size_t>(i)]))) return finish_(sol);
    const int root_id = intern_joint_(0, root);

    if (opts_.feasibility_only) {
      std::vector<std::vector<const Option*>> chosen;
      if (!dfs_feasible_(0, root_id, chosen)) return finish_(sol);
      fill_(sol, chosen);
      sol.status = IlpSolution::Status::Feasible;
      return finish_(sol);
    }

    const auto bounds = astar_(root_id);
    if (!bounds) return finish_(sol);
    zmax_ = bounds->first;
    zsum_ = bounds->second;
    std::vector<std::vector<const Option*>> chosen;
    std::vector<double> costs(static_cast<std::size_t>(nobj_), 0.0);
    if (!dfs_lex_(0, root_id, costs, chosen))
      throw Error("internal error: optimal bound found but no assignment reproduces it");
    fill_(sol, chosen);
    sol.status = IlpSolution::Status::Optimal;
    return finish_(sol);
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  static constexpr double kTol = 1e-9;

  using Boundary = std::vector<std::pair<int, double>>;  // (row, partial), sorted

  struct Option {
    std::vector<int> ones;
    int next{-1};  // boundary id at the next slice
    std::vector<std::pair<int, double>> coupling;
    double cost{0.0};
  };

  struct RowInfo {
    enum class Kind { Empty, Block, Coupling, Objective } kind{Kind::Empty};
    int object{-1};
    int lo{0};
    int hi{0};
    bool monotone{false};  // <= row with non-negative coefficients
  };

  // ---- analysis ----------------------------------------------------------

  void analyze_() {
    const auto nvars = m_.vars.size();
    horizon_ = 0;
    nobj_ = 0;
    for (std::size_t j = 0; j < nvars; ++j) {
      const auto& v = m_.vars[j];
      if (static_cast<int>(j) == m_.objective_var) continue;
      if (!v.binary || v.object < 0 || v.step < 0)
        throw InputError("layered solver: every non-objective variable must be a binary with an "
                         "object and a step");
      nobj_ = std::max(nobj_, v.object + 1);
      horizon_ = std::max(horizon_, v.step + 1);
    }
    nobj_ = std::max(nobj_, m_.num_objects);
    horizon_ = std::max(horizon_, m_.horizon);

    vars_.assign(static_cast<std::size_t>(nobj_),
                 std::vector<std::vector<int>>(static_cast<std::size_t>(horizon_)));
    for (std::size_t j = 0; j < nvars; ++j) {
      if (static_cast<int>(j) == m_.objective_var) continue;
      const auto& v = m_.vars[j];
      vars_[static_cast<std::size_t>(v.object)][static_cast<std::size_t>(v.step)].push_back(
          static_cast<int>(j));
    }

    objective_coef_.assign(nvars, 0.0);
    has_objective_row_.assign(static_cast<std::size_t>(nobj_), false);
    terms_.assign(nvars, {});
    info_.assign(m_.rows.size(), {});
    inner_.assign(static_cast<std::size_t>(nobj_),
                  std::vector<std::vector<int>>(static_cast<std::size_t>(horizon_)));
    link_.assign(static_cast<std::size_t>(nobj_),
                 std::vector<std::vector<int>>(static_cast<std::size_t>(horizon_)));
    coupling_.assign(static_cast<std::size_t>(horizon_), {});

    for (std::size_t r = 0; r < m_.rows.size(); ++r) {
      const auto& row = m_.rows[r];
      auto& info = info_[r];
      bool has_objective = false;
      double objective_coef = 0.0;
      int lo = std::numeric_limits<int>::max();
      int hi = -1;
      std::vector<int> objects;
      bool nonneg = true;
      for (const auto& t : row.terms) {
        if (t.var == m_.objective_var) {
          has_objective = true;
          objective_coef += t.coef;
          continue;
        }
        const auto& v = m_.vars[static_cast<std::size_t>(t.var)];
        lo = std::min(lo, v.step);
        hi = std::max(hi, v.step);
        if (std::find(objects.begin(), objects.end(), v.object) == objects.end())
          objects.push_back(v.object);
        if (t.coef < 0) nonneg = false;
      }
      if (has_objective) {
        if (row.sense != Sense::GreaterEq || std::abs(objective_coef - 1.0) > kTol ||
            std::abs(row.rhs) > kTol || objects.size() > 1)
          throw InputError("layered solver: objective rows must read z - sum c x >= 0 for one object");
        info.kind = RowInfo::Kind::Objective;
        if (!objects.empty()) {
          const auto obj = static_cast<std::size_t>(objects.front());
          if (has_objective_row_[obj])
            throw InputError("layered solver: at most one objective row per object");
          has_objective_row_[obj] = true;
          for (const auto& t : row.terms)
            if (t.var != m_.objective_var) objective_coef_[static_cast<std::size_t>(t.var)] -= t.coef;
        }
        continue;
      }
      if (objects.empty()) {
        info.kind = RowInfo::Kind::Empty;
        if (!satisfied_(row.sense, 0.0, row.rhs)) trivially_infeasible_ = true;
        continue;
      }
      info.lo = lo;
      info.hi = hi;
      if (hi - lo > 1) throw InputError("layered solver: row spans more than two steps");
      if (objects.size() == 1) {
        info.kind = RowInfo::Kind::Block;
        info.object = objects.front();
        const auto obj = static_cast<std::size_t>(info.object);
        if (lo == hi)
          inner_[obj][static_cast<std::size_t>(lo)].push_back(static_cast<int>(r));
        else
          link_[obj][static_cast<std::size_t>(hi)].push_back(static_cast<int>(r));
      } else {
        if (lo != hi) throw InputError("layered solver: coupling rows must lie within one step");
        info.kind = RowInfo::Kind::Coupling;
        info.monotone = nonneg && row.sense == Sense::LessEq;
        coupling_[static_cast<std::size_t>(lo)].push_back(static_cast<int>(r));
      }
      for (const auto& t : row.terms) terms_[static_cast<std::size_t>(t.var)].push_back({static_cast<int>(r), t.coef});
    }

    boundaries_.assign(static_cast<std::size_t>(nobj_),
                       std::vector<BoundaryTable>(static_cast<std::size_t>(horizon_ + 1)));
    activity_.assign(m_.rows.size(), 0.0);
    rem_pos_.assign(m_.rows.size(), 0.0);
    rem_neg_.assign(m_.rows.size(), 0.0);
    relevant_.assign(m_.rows.size(), 0);
    joint_.assign(static_cast<std::size_t>(horizon_ + 1), {});
  }

  static bool satisfied_(Sense s, double act, double rhs) {
    switch (s) {
      case Sense::LessEq: return act <= rhs + kTol;
      case Sense::Equal: return std::abs(act - rhs) <= kTol;
      case Sense::GreaterEq: return act >= rhs - kTol;
    }
    return false;
  }

  // ---- boundaries and per-object options --------------------------------

  struct BoundaryTable {
    std::map<Boundary, int> ids;
    std::vector<Boundary> values;
    std::vector<std::optional<std::vector<Option>>> options;
    std::vector<double> h;
    std::vector<char> h_done;
  };

  int intern_boundary_(int obj, int t, Boundary b) {
    auto& table = boundaries_[static_cast<std::size_t>(obj)][static_cast<std::size_t>(t)];
    auto [it, inserted] = table.ids.emplace(b, static_cast<int>(table.values.size()));
    if (inserted) {
      table.values.push_back(std::move(b));
      table.options.emplace_back();
      table.h.push_back(kInf);
      table.h_done.push_back(0);
    }
    return it->second;
  }

  std::vector<int> root_joint_() {
    std::vector<int> root;
    for (int i = 0; i < nobj_; ++i) root.push_back(intern_boundary_(i, 0, {}));
    return root;
  }

  const std::vector<Option>& options_(int obj, int t, int bid) {
    auto& table = boundaries_[static_cast<std::size_t>(obj)][static_cast<std::size_t>(t)];
    auto& slot = table.options[static_cast<std::size_t>(bid)];
    if (!slot) {
      auto opts = enumerate_(obj, t, table.values[static_cast<std::size_t>(bid)]);
      // The table may have grown while enumerating; re-fetch the slot.
      auto& fresh = boundaries_[static_cast<std::size_t>(obj)][static_cast<std::size_t>(t)];
      fresh.options[static_cast<std::size_t>(bid)] = std::move(opts);
      return *fresh.options[static_cast<std::size_t>(bid)];
    }
    return *slot;
  }

  std::vector<Option> enumerate_(int obj, int t, const Boundary& boundary) {
    const auto o = static_cast<std::size_t>(obj);
    const auto s = static_cast<std::size_t>(t);
    const std::vector<int>& vars = vars_[o][s];
    std::vector<int> rows = inner_[o][s];
    rows.insert(rows.end(), link_[o][s].begin(), link_[o][s].end());
    for (int r : rows) {
      activity_[static_cast<std::size_t>(r)] = 0.0;
      rem_pos_[static_cast<std::size_t>(r)] = 0.0;
      rem_neg_[static_cast<std::size_t>(r)] = 0.0;
      relevant_[static_cast<std::size_t>(r)] = 1;
    }
    for (const auto& [r, partial] : boundary) activity_[static_cast<std::size_t>(r)] = partial;
    for (int j : vars)
      for (const auto& [r, c] : terms_[static_cast<std::size_t>(j)])
        if (relevant_[static_cast<std::size_t>(r)]) (c > 0 ? rem_pos_ : rem_neg_)[static_cast<std::size_t>(r)] += c;

    std::vector<Option> out;
    std::vector<int> ones;
    // A row can already be violated before any variable is assigned.
    bool viable = true;
    for (int r : rows) viable = viable && window_ok_(r);
    if (viable) enumerate_rec_(obj, t, vars, 0, rows, ones, out);
    for (int r : rows) relevant_[static_cast<std::size_t>(r)] = 0;
    stats_.options += out.size();
    return out;
  }

  bool window_ok_(int r) const {
    const auto& row = m_.rows[static_cast<std::size_t>(r)];
    const auto ri = static_cast<std::size_t>(r);
    const double lo = activity_[ri] + rem_neg_[ri];
    const double hi = activity_[ri] + rem_pos_[ri];
    switch (row.sense) {
      case Sense::LessEq: return lo <= row.rhs + kTol;
      case Sense::Equal: return lo <= row.rhs + kTol && hi >= row.rhs - kTol;
      case Sense::GreaterEq: return hi >= row.rhs - kTol;
    }
    return false;
  }

  void enumerate_rec_(int obj, int t, const std::vector<int>& vars, std::size_t idx,
                      const std::vector<int>& rows, std::vector<int>& ones, std::vector<Option>& out) {
    if (idx == vars.size()) {
      for (int r : rows)
        if (!satisfied_(m_.rows[static_cast<std::size_t>(r)].sense, activity_[static_cast<std::size_t>(r)],
                        m_.rows[static_cast<std::size_t>(r)].rhs))
          return;
      out.push_back(make_option_(obj, t, ones));
      return;
    }
    const int j = vars[idx];
    const auto& var = m_.vars[static_cast<std::size_t>(j)];
    const auto& terms = terms_[static_cast<std::size_t>(j)];
    for (int value = 0; value <= 1; ++value) {
      if (value < var.lower - kTol || value > var.upper + kTol) continue;
      bool ok = true;
      for (const auto& [r, c] : terms) {
        const auto ri = static_cast<std::size_t>(r);
        if (!relevant_[ri]) continue;
        (c > 0 ? rem_pos_ : rem_neg_)[ri] -= c;
        activity_[ri] += c * value;
      }
      for (const auto& [r, c] : terms)
        if (relevant_[static_cast<std::size_t>(r)] && !window_ok_(r)) ok = false;
      if (ok) {
        if (value) ones.push_back(j);
        enumerate_rec_(obj, t, vars, idx + 1, rows, ones, out);
        if (value) ones.pop_back();
      }
      for (const auto& [r, c] : terms) {
        const auto ri = static_cast<std::size_t>(r);
        if (!relevant_[ri]) continue;
        (c > 0 ? rem_pos_ : rem_neg_)[ri] += c;
        activity_[ri] -= c * value;
      }
    }
  }

  Option make_option_(int obj, int t, const std::vector<int>& ones) {
    Option opt;
    opt.ones = ones;
    std::map<int, double> next;
    std::map<int, double> coupling;
    for (int j : ones) {
      opt.cost += objective_coef_[static_cast<std::size_t>(j)];
      for (const auto& [r, c] : terms_[static_cast<std::size_t>(j)]) {
        const auto& info = info_[static_cast<std::size_t>(r)];
        if (info.kind == RowInfo::Kind::Coupling)
          coupling[r] += c;
        else if (info.kind == RowInfo::Kind::Block && info.lo == t && info.hi == t + 1)
          next[r] += c;
      }
    }
    Boundary b;
    for (const auto& [r, v] : next)
      if (v != 0.0) b.emplace_back(r, v);
    opt.next = intern_boundary_(obj, t + 1, std::move(b));
    opt.coupling.assign(coupling.begin(), coupling.end());
    return opt;
  }

  // Lower bound on one object's remaining cost from (t, boundary), ignoring
  // coupling rows; +inf when the object cannot complete.
  double h_(int obj, int t, int bid) {
    if (t == horizon_) {
      const auto& b = boundaries_[static_cast<std::size_t>(obj)][static_cast<std::size_t>(t)].values[static_cast<std::size_t>(bid)];
      return b.empty() ? 0.0 : kInf;
    }
    {
      auto& table = boundaries_[static_cast<std::size_t>(obj)][static_cast<std::size_t>(t)];
      if (table.h_done[static_cast<std::size_t>(bid)]) return table.h[static_cast<std::size_t>(bid)];
    }
    double best = kInf;
    const auto& opts = options_(obj, t, bid);
    for (const auto& o : opts) best = std::min(best, o.cost + h_(obj, t + 1, o.next));
    auto& table = boundaries_[static_cast<std::size_t>(obj)][static_cast<std::size_t>(t)];
    table.h[static_cast<std::size_t>(bid)] = best;
    table.h_done[static_cast<std::size_t>(bid)] = 1;
    return best;
  }

  // ---- joint states -----------------------------------------------------

  struct JointTable {
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> values;
    std::vector<std::vector<std::vector<double>>> closed;  // expanded or failed cost vectors
    std::vector<char> failed;                              // feasibility search
  };

  int intern_joint_(int t, const std::vector<int>& key) {
    auto& table = joint_[static_cast<std::size_t>(t)];
    auto [it, inserted] = table.ids.emplace(key, static_cast<int>(table.values.size()));
    if (inserted) {
      table.values.push_back(key);
      table.closed.emplace_back();
      table.failed.push_back(0);
    }
    return it->second;
  }

  // Usable per-object options at (t, joint): those from which the object can
  // still finish.
  std::vector<std::vector<const Option*>> usable_(int t, int jid) {
    const std::vector<int> key = joint_[static_cast<std::size_t>(t)].values[static_cast<std::size_t>(jid)];
    std::vector<std::vector<const Option*>> usable(static_cast<std::size_t>(nobj_));
    for (int i = 0; i < nobj_; ++i) {
      const auto& opts = options_(i, t, key[static_cast<std::size_t>(i)]);
      for (const auto& o : opts)
        if (!std::isinf(h_(i, t + 1, o.next))) usable[static_cast<std::size_t>(i)].push_back(&o);
    }
    return usable;
  }

  // Visits every combination of per-object options (objects in index order,
  // options in enumeration order) that satisfies the coupling rows of step t.
  // Stops early when `visit` returns true.
  template <typename Visit>
  bool combine_(int t, const std::vector<std::vector<const Option*>>& usable, Visit&& visit) {
    const auto& rows = coupling_[static_cast<std::size_t>(t)];
    std::vector<double> act(rows.size(), 0.0);
    std::unordered_map<int, std::size_t> local;
    for (std::size_t k = 0; k < rows.size(); ++k) local.emplace(rows[k], k);
    std::vector<const Option*> pick(static_cast<std::size_t>(nobj_), nullptr);

    std::function<bool(int)> rec = [&](int i) -> bool {
      if (i == nobj_) {
        for (std::size_t k = 0; k < rows.size(); ++k) {
          const auto& row = m_.rows[static_cast<std::size_t>(rows[k])];
          if (!satisfied_(row.sense, act[k], row.rhs)) return false;
        }
        return visit(pick);
      }
      for (const Option* o : usable[static_cast<std::size_t>(i)]) {
        bool ok = true;
        for (const auto& [r, c] : o->coupling) {
          const std::size_t k = local.at(r);
          act[k] += c;
          if (info_[static_cast<std::size_t>(r)].monotone && act[k] > m_.rows[static_cast<std::size_t>(r)].rhs + kTol)
            ok = false;
        }
        pick[static_cast<std::size_t>(i)] = o;
        const bool stop = ok && rec(i + 1);
        for (const auto& [r, c] : o->coupling) act[local.at(r)] -= c;
        if (stop) return true;
      }
      return false;
    };
    return rec(0);
  }

  void count_expansion_() {
    if (++stats_.expansions > opts_.max_expansions)
      throw SearchLimitError("ILP search exceeded its expansion budget");
  }

  bool dfs_feasible_(int t, int jid, std::vector<std::vector<const Option*>>& chosen) {
    if (t == horizon_) return true;
    auto& table = joint_[static_cast<std::size_t>(t)];
    if (table.failed[static_cast<std::size_t>(jid)]) return false;
    count_expansion_();
    const auto usable = usable_(t, jid);
    const bool found = combine_(t, usable, [&](const std::vector<const Option*>& pick) {
      std::vector<int> next;
      for (const Option* o : pick) next.push_back(o->next);
      const int nid = intern_joint_(t + 1, next);
      chosen.push_back(pick);
      if (dfs_feasible_(t + 1, nid, chosen)) return true;
      chosen.pop_back();
      return false;
    });
    if (!found) joint_[static_cast<std::size_t>(t)].failed[static_cast<std::size_t>(jid)] = 1;
    return found;
  }

  static bool dominated_(const std::vector<std::vector<double>>& seen, const std::vector<double>& c) {
    for (const auto& s : seen) {
      bool le = true;
      for (std::size_t i = 0; i < c.size() && le; ++i) le = s[i] <= c[i] + kTol;
      if (le) return true;
    }
    return false;
  }

  std::optional<std::pair<double, double>> astar_(int root_id) {
    struct Node {
      double fmax;
      double fsum;
      std::uint64_t seq;
      int t;
      int jid;
      std::vector<double> costs;
    };
    struct Worse {
      bool operator()(const Node& a, const Node& b) const {
        if (a.fmax != b.fmax) return a.fmax > b.fmax;
        if (a.fsum != b.fsum) return a.fsum > b.fsum;
        return a.seq > b.seq;
      }
    };
    std::priority_queue<Node, std::vector<Node>, Worse> open;
    std::uint64_t seq = 0;
    const auto push = [&](int t, int jid, std::vector<double> costs) {
      const auto& key = joint_[static_cast<std::size_t>(t)].values[static_cast<std::size_t>(jid)];
      double fmax = 0.0;
      double fsum = 0.0;
      for (int i = 0; i < nobj_; ++i) {
        const double f = costs[static_cast<std::size_t>(i)] + h_(i, t, key[static_cast<std::size_t>(i)]);
        fmax = std::max(fmax, f);
        fsum += f;
      }
      open.push({fmax, fsum, seq++, t, jid, std::move(costs)});
    };
    push(0, root_id, std::vector<double>(static_cast<std::size_t>(nobj_), 0.0));
    while (!open.empty()) {
      Node node = open.top();
      open.pop();
      if (node.t == horizon_) {
        double zmax = 0.0;
        double zsum = 0.0;
        for (double c : node.costs) {
          zmax = std::max(zmax, c);
          zsum += c;
        }
        return std::pair{zmax, zsum};
      }
      auto& closed = joint_[static_cast<std::size_t>(node.t)].closed[static_cast<std::size_t>(node.jid)];
      if (dominated_(closed, node.costs)) continue;
      closed.push_back(node.costs);
      count_expansion_();
      const auto usable = usable_(node.t, node.jid);
      combine_(node.t, usable, [&](const std::vector<const Option*>& pick) {
        std::vector<int> next;
        std::vector<double> costs = node.costs;
        for (int i = 0; i < nobj_; ++i) {
          next.push_back(pick[static_cast<std::size_t>(i)]->next);
          costs[static_cast<std::size_t>(i)] += pick[static_cast<std::size_t>(i)]->cost;
        }
        const int nid = intern_joint_(node.t + 1, next);
        if (!dominated_(joint_[static_cast<std::size_t>(node.t + 1)].closed[static_cast<std::size_t>(nid)], costs))
          push(node.t + 1, nid, std::move(costs));
        return false;
      });
    }
    return std::nullopt;
  }

  bool within_bounds_(int t, int jid, const std::vector<double>& costs) {
    const auto& key = joint_[static_cast<std::size_t>(t)].values[static_cast<std::size_t>(jid)];
    double sum = 0.0;
    for (int i = 0; i < nobj_; ++i) {
      const double f = costs[static_cast<std::size_t>(i)] + h_(i, t, key[static_cast<std::size_t>(i)]);
      if (f > zmax_ + bound_tol_(zmax_)) return false;
      sum += f;
    }
    return sum <= zsum_ + bound_tol_(zsum_);
  }

  static double bound_tol_(double v) { return 1e-9 * std::max(1.0, std::abs(v)); }

  bool dfs_lex_(int t, int jid, const std::vector<double>& costs,
                std::vector<std::vector<const Option*>>& chosen) {
    if (t == horizon_) return true;
    auto& failed = lex_failed_[{t, jid}];
    if (dominated_(failed, costs)) return false;
    count_expansion_();
    const auto usable = usable_(t, jid);
    const bool found = combine_(t, usable, [&](const std::vector<const Option*>& pick) {
      std::vector<int> next;
      std::vector<double> next_costs = costs;
      for (int i = 0; i < nobj_; ++i) {
        next.push_back(pick[static_cast<std::size_t>(i)]->next);
        next_costs[static_cast<std::size_t>(i)] += pick[static_cast<std::size_t>(i)]->cost;
      }
      const int nid = intern_joint_(t + 1, next);
      if (!within_bounds_(t + 1, nid, next_costs)) return false;
      chosen.push_back(pick);
      if (dfs_lex_(t + 1, nid, next_costs, chosen)) return true;
      chosen.pop_back();
      return false;
    });
    if (!found) lex_failed_[{t, jid}].push_back(costs);
    return found;
  }

  void fill_(IlpSolution& sol, const std::vector<std::vector<const Option*>>& chosen) {
    sol.values.assign(m_.vars.size(), 0.0);
    std::vector<double> costs(static_cast<std::size_t>(nobj_), 0.0);
    for (const auto& step : chosen)
      for (int i = 0; i < nobj_; ++i) {
        const Option* o = step[static_cast<std::size_t>(i)];
        for (int j : o->ones) sol.values[static_cast<std::size_t>(j)] = 1.0;
        costs[static_cast<std::size_t>(i)] += o->cost;
      }
    sol.objective = 0.0;
    sol.total_cost = 0.0;
    for (double c : costs) {
      sol.objective = std::max(sol.objective, c);
      sol.total_cost += c;
    }
    if (m_.objective_var >= 0) sol.values[static_cast<std::size_t>(m_.objective_var)] = sol.objective;
  }

  IlpSolution& finish_(IlpSolution& sol) {
    sol.stats = stats_;
    return sol;
  }

  const IlpModel& m_;
  SolveOptions opts_;
  int nobj_{0};
  int horizon_{0};
  bool trivially_infeasible_{false};

  std::vector<std::vector<std::vector<int>>> vars_;   // [object][step] -> vars
  std::vector<std::vector<std::vector<int>>> inner_;  // [object][step] -> rows within step
  std::vector<std::vector<std::vector<int>>> link_;   // [object][step] -> rows spanning step-1..step
  std::vector<std::vector<int>> coupling_;            // [step] -> rows
  std::vector<std::vector<std::pair<int, double>>> terms_;  // var -> (row, coef), objective rows excluded
  std::vector<RowInfo> info_;
  std::vector<double> objective_coef_;
  std::vector<bool> has_objective_row_;

  std::vector<std::vector<BoundaryTable>> boundaries_;  // [object][slice]
  std::vector<JointTable> joint_;                       // [slice]
  std::map<std::pair<int, int>, std::vector<std::vector<double>>> lex_failed_;

  std::vector<double> activity_;
  std::vector<double> rem_pos_;
  std::vector<double> rem_neg_;
  std::vector<char> relevant_;

  double zmax_{0.0};
  double zsum_{0.0};
  SolveStats stats_;
};

}  // namespace detail

// Exact solve of a layered 0/1 model. Infeasible models yield an explicit
// Infeasible status. Deterministic for a fixed model.
inline IlpSolution solve(const IlpModel& model, const SolveOptions& options = {}) {
  detail::LayeredSolver solver(model, options);
  return solver.solve();
}

}  // namespace marp::mapf
