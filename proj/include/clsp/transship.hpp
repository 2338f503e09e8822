#pragma once

// Fixed-setup subproblem: given the set of (item, period) slots where
// production is allowed, find the production plan with minimum holding cost.
//
// With loads z_is = K_i x_is the problem is a min-cost flow:
//
//   source --C_s--> period s --(allowed)--> (i,s) --h_i/K_i--> (i,s+1) ...
//                                            (i,t) --K_i d_it--> sink
//
// Forbidden slots simply have no production arc, which is the big-M penalty
// taken to the limit. Arc costs are scaled by lcm(K) so the flow costs are
// integral; supplies and demands are integral so the optimal loads are too.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "clsp/errors.hpp"
#include "clsp/model.hpp"

namespace clsp {

class SetupPattern {
 public:
  SetupPattern() = default;
  SetupPattern(std::size_t items, std::size_t periods, bool value = false)
      : allowed_(items, periods, value ? 1 : 0) {}

  static SetupPattern all(const Instance& inst) { return {inst.items(), inst.periods(), true}; }
  static SetupPattern none(const Instance& inst) { return {inst.items(), inst.periods(), false}; }
  /// Slots where the plan produces.
  static SetupPattern of(const Plan& plan) {
    SetupPattern p(plan.items(), plan.periods());
    for (std::size_t i = 0; i < plan.items(); ++i)
      for (std::size_t t = 0; t < plan.periods(); ++t) p.set(i, t, plan.produces(i, t));
    return p;
  }

  std::size_t items() const noexcept { return allowed_.rows(); }
  std::size_t periods() const noexcept { return allowed_.cols(); }
  bool allowed(std::size_t i, std::size_t t) const noexcept { return allowed_(i, t) != 0; }
  void set(std::size_t i, std::size_t t, bool v) noexcept { allowed_(i, t) = v ? 1 : 0; }
  void flip(std::size_t i, std::size_t t) noexcept { allowed_(i, t) ^= 1; }

  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (auto v : allowed_.flat()) n += v;
    return n;
  }

  std::uint64_t hash() const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : allowed_.flat()) h = (h ^ v) * 1099511628211ULL;
    return h;
  }

  friend bool operator==(const SetupPattern&, const SetupPattern&) = default;

 private:
  Matrix<std::uint8_t> allowed_;
};

enum class LpStatus { Optimal, Infeasible };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Plan plan;
  /// holding_total is the P2 objective; total adds S_i for every slot with positive production.
  CostBreakdown cost;

  bool optimal() const noexcept { return status == LpStatus::Optimal; }
};

/// Reusable min-cost-flow solver for one instance. The network is built once;
/// each solve only toggles production arcs and resets flows.
class FixedSetupSolver {
 public:
  explicit FixedSetupSolver(const Instance& inst) : inst_(&inst) { build(); }

  LpResult solve(const SetupPattern& pattern) {
    const Instance& inst = *inst_;
    if (pattern.items() != inst.items() || pattern.periods() != inst.periods())
      throw StructuralError("setup pattern dimensions do not match the instance");

    LpResult res;
    if (!coverable(pattern)) return res;

    for (auto& a : arcs_) a.flow = 0;
    for (std::size_t i = 0; i < inst.items(); ++i)
      for (std::size_t t = 0; t < inst.periods(); ++t) {
        const int a = production_arc_[i * inst.periods() + t];
        if (a >= 0) arcs_[a].cap = pattern.allowed(i, t) ? required_ : 0;
      }

    if (run() < required_) return res;

    res.status = LpStatus::Optimal;
    res.plan = Plan(inst);
    for (std::size_t i = 0; i < inst.items(); ++i)
      for (std::size_t t = 0; t < inst.periods(); ++t) {
        const int a = production_arc_[i * inst.periods() + t];
        if (a >= 0) res.plan.set_load(i, t, arcs_[a].flow);
      }
    res.cost = evaluate_cost(inst, res.plan);
    return res;
  }

 private:
  struct Arc {
    int to;
    Count cap;
    Count cost;
    Count flow;
  };
  static constexpr Count kInf = std::numeric_limits<Count>::max() / 4;

  int add_arc(int from, int to, Count cap, Count cost) {
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back({to, cap, cost, 0});
    adj_[from].push_back(id);
    arcs_.push_back({from, 0, -cost, 0});
    adj_[to].push_back(id + 1);
    return id;
  }

  void build() {
    const Instance& inst = *inst_;
    const std::size_t n = inst.items();
    const std::size_t T = inst.periods();
    const Count scale = inst.cost_scale();
    node_count_ = static_cast<int>(2 + T + n * T);
    source_ = 0;
    sink_ = node_count_ - 1;
    adj_.assign(node_count_, {});
    production_arc_.assign(n * T, -1);
    required_ = 0;
    auto period_node = [](std::size_t t) { return static_cast<int>(1 + t); };
    auto item_node = [&](std::size_t i, std::size_t t) { return static_cast<int>(1 + T + i * T + t); };

    for (std::size_t t = 0; t < T; ++t) add_arc(source_, period_node(t), inst.capacity(t), 0);
    for (std::size_t i = 0; i < n; ++i) {
      Count remaining = 0;
      for (std::size_t t = 0; t < T; ++t) remaining += inst.demand_load(i, t);
      if (remaining == 0) continue;
      required_ += remaining;
      const Count carry = inst.holding(i) * (scale / inst.usage(i));
      for (std::size_t t = 0; t < T && remaining > 0; ++t) {
        production_arc_[i * T + t] = add_arc(period_node(t), item_node(i, t), 0, 0);
        if (inst.demand_load(i, t) > 0) add_arc(item_node(i, t), sink_, inst.demand_load(i, t), 0);
        remaining -= inst.demand_load(i, t);
        if (remaining > 0) add_arc(item_node(i, t), item_node(i, t + 1), kInf, carry);
      }
    }
    potential_.assign(node_count_, 0);
    dist_.assign(node_count_, kInf);
    level_.assign(node_count_, -1);
    iter_.assign(node_count_, 0);
  }

  /// Every demand has an allowed slot at or before its period.
  bool coverable(const SetupPattern& pattern) const {
    const Instance& inst = *inst_;
    for (std::size_t i = 0; i < inst.items(); ++i) {
      bool open = false;
      for (std::size_t t = 0; t < inst.periods(); ++t) {
        open = open || pattern.allowed(i, t);
        if (inst.demand(i, t) > 0 && !open) return false;
      }
    }
    return true;
  }

  Count reduced(const Arc& a, int from) const { return a.cost + potential_[from] - potential_[a.to]; }

  bool dijkstra() {
    std::fill(dist_.begin(), dist_.end(), kInf);
    using Item = std::pair<Count, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist_[source_] = 0;
    pq.push({0, source_});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d != dist_[u]) continue;
      if (u == sink_) break;
      for (int id : adj_[u]) {
        const Arc& a = arcs_[id];
        if (a.cap - a.flow <= 0) continue;
        const Count nd = d + reduced(a, u);
        if (nd < dist_[a.to]) {
          dist_[a.to] = nd;
          pq.push({nd, a.to});
        }
      }
    }
    if (dist_[sink_] >= kInf) return false;
    const Count cap = dist_[sink_];
    for (int v = 0; v < node_count_; ++v) potential_[v] += std::min(dist_[v], cap);
    return true;
  }

  bool admissible(const Arc& a, int from) const { return a.cap - a.flow > 0 && reduced(a, from) == 0; }

  bool bfs_levels() {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<int>& q = queue_;
    q.clear();
    q.push_back(source_);
    level_[source_] = 0;
    for (std::size_t h = 0; h < q.size(); ++h) {
      const int u = q[h];
      for (int id : adj_[u]) {
        const Arc& a = arcs_[id];
        if (level_[a.to] < 0 && admissible(a, u)) {
          level_[a.to] = level_[u] + 1;
          q.push_back(a.to);
        }
      }
    }
    return level_[sink_] >= 0;
  }

  Count augment(int u, Count limit) {
    if (u == sink_) return limit;
    for (std::size_t& k = iter_[u]; k < adj_[u].size(); ++k) {
      const int id = adj_[u][k];
      Arc& a = arcs_[id];
      if (level_[a.to] != level_[u] + 1 || !admissible(a, u)) continue;
      const Count pushed = augment(a.to, std::min(limit, a.cap - a.flow));
      if (pushed > 0) {
        a.flow += pushed;
        arcs_[id ^ 1].flow -= pushed;
        return pushed;
      }
    }
    return 0;
  }

  Count run() {
    std::fill(potential_.begin(), potential_.end(), 0);
    Count total = 0;
    while (total < required_ && dijkstra()) {
      while (total < required_ && bfs_levels()) {
        std::fill(iter_.begin(), iter_.end(), 0);
        while (Count f = augment(source_, required_ - total)) total += f;
      }
    }
    return total;
  }

  const Instance* inst_;
  int node_count_ = 0;
  int source_ = 0;
  int sink_ = 0;
  Count required_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> production_arc_;
  std::vector<Count> potential_;
  std::vector<Count> dist_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
  std::vector<int> queue_;
};

inline LpResult solve_fixed_setup(const Instance& inst, const SetupPattern& pattern) {
  return FixedSetupSolver(inst).solve(pattern);
}

struct ExactResult {
  LpStatus status = LpStatus::Infeasible;
  Plan plan;
  CostBreakdown cost;
  bool optimal() const noexcept { return status == LpStatus::Optimal; }
};

/// Largest N*T accepted by exact_optimum (2^(N*T) setup patterns).
inline constexpr std::size_t kExactSlotBudget = 18;

/// Exact CLSP optimum by enumerating setup patterns and solving the
/// fixed-setup flow for each. Patterns whose total setup cost already reaches
/// the incumbent are pruned (holding is nonnegative), as are patterns leaving
/// some demand without an earlier-or-equal slot.
inline ExactResult exact_optimum(const Instance& inst) {
  const std::size_t n = inst.items();
  const std::size_t T = inst.periods();
  if (n * T > kExactSlotBudget)
    throw StructuralError("exact_optimum refuses instances with more than " + std::to_string(kExactSlotBudget) +
                          " item-period slots");
  ExactResult best;
  if (!instance_feasible(inst)) return best;

  // Slots worth opening: some demand at or after the slot.
  struct Slot {
    std::size_t item, period;
  };
  std::vector<Slot> slots;
  std::vector<std::size_t> first_demand(n, T);
  for (std::size_t i = 0; i < n; ++i) {
    Count tail = 0;
    for (std::size_t t = T; t-- > 0;) tail += inst.demand(i, t);
    Count after = tail;
    for (std::size_t t = 0; t < T; ++t) {
      if (after > 0) slots.push_back({i, t});
      if (inst.demand(i, t) > 0 && first_demand[i] == T) first_demand[i] = t;
      after -= inst.demand(i, t);
    }
  }

  FixedSetupSolver solver(inst);
  SetupPattern pattern = SetupPattern::none(inst);
  const Count scale = inst.cost_scale();
  std::optional<Count> incumbent;

  std::function<void(std::size_t, Count)> dfs = [&](std::size_t k, Count setup_sum) {
    if (incumbent && setup_sum * scale >= *incumbent) return;
    if (k == slots.size()) {
      LpResult r = solver.solve(pattern);
      if (r.optimal() && (!incumbent || r.cost.exact_total < *incumbent)) {
        incumbent = r.cost.exact_total;
        best.status = LpStatus::Optimal;
        best.plan = std::move(r.plan);
        best.cost = r.cost;
      }
      return;
    }
    const Slot s = slots[k];
    // Open the slot first so a good incumbent appears early.
    pattern.set(s.item, s.period, true);
    dfs(k + 1, setup_sum + inst.setup(s.item));
    pattern.set(s.item, s.period, false);
    // Closing is only allowed if the item's first demand still has a slot.
    bool covered = s.period != first_demand[s.item];
    for (std::size_t t = 0; !covered && t < s.period; ++t) covered = pattern.allowed(s.item, t);
    if (covered) dfs(k + 1, setup_sum);
  };
  dfs(0, 0);
  return best;
}

}  // namespace clsp
