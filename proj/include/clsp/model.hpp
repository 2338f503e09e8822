#pragma once

// Multi-item capacitated lot-sizing: instance data, production plans,
// cost evaluation and feasibility checks.
//
// Quantities inside a Plan are kept as capacity loads z_it = K_i * x_it.
// Every algorithm in this library moves whole capacity units (partial shifts
// are Q capacity units, P2 flows are integral in capacity units), so loads
// stay integral and x_it is always a multiple of 1/K_i. Costs are therefore
// exact when scaled by lcm(K_1..K_N).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "clsp/errors.hpp"
#include "clsp/matrix.hpp"

namespace clsp {

using Count = std::int64_t;

class Instance {
 public:
  Instance() = default;

  /// demand: item x period; usage K_i > 0; capacity C_t; setup S_i; holding h_i.
  Instance(Matrix<Count> demand, std::vector<Count> usage, std::vector<Count> capacity,
           std::vector<Count> setup, std::vector<Count> holding)
      : demand_(std::move(demand)),
        usage_(std::move(usage)),
        capacity_(std::move(capacity)),
        setup_(std::move(setup)),
        holding_(std::move(holding)) {
    validate();
  }

  static Instance from_rows(const std::vector<std::vector<Count>>& demand, std::vector<Count> usage,
                            std::vector<Count> capacity, std::vector<Count> setup,
                            std::vector<Count> holding) {
    return Instance(Matrix<Count>::from_rows(demand), std::move(usage), std::move(capacity),
                    std::move(setup), std::move(holding));
  }

  std::size_t items() const noexcept { return demand_.rows(); }
  std::size_t periods() const noexcept { return demand_.cols(); }

  Count demand(std::size_t i, std::size_t t) const noexcept { return demand_(i, t); }
  Count usage(std::size_t i) const noexcept { return usage_[i]; }
  Count capacity(std::size_t t) const noexcept { return capacity_[t]; }
  Count setup(std::size_t i) const noexcept { return setup_[i]; }
  Count holding(std::size_t i) const noexcept { return holding_[i]; }

  const Matrix<Count>& demand() const noexcept { return demand_; }
  const std::vector<Count>& usage() const noexcept { return usage_; }
  const std::vector<Count>& capacity() const noexcept { return capacity_; }
  const std::vector<Count>& setup() const noexcept { return setup_; }
  const std::vector<Count>& holding() const noexcept { return holding_; }

  /// Capacity needed to serve d_it, i.e. K_i * d_it.
  Count demand_load(std::size_t i, std::size_t t) const noexcept { return usage_[i] * demand_(i, t); }

  /// lcm of all K_i; multiplying any plan cost by it yields an integer.
  Count cost_scale() const noexcept {
    Count l = 1;
    for (Count k : usage_) l = std::lcm(l, k);
    return l;
  }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  void validate() const {
    const std::size_t n = demand_.rows();
    const std::size_t t = demand_.cols();
    if (n == 0 || t == 0) throw StructuralError("instance needs at least one item and one period");
    if (usage_.size() != n || setup_.size() != n || holding_.size() != n)
      throw StructuralError("per-item vectors must have one entry per item");
    if (capacity_.size() != t) throw StructuralError("capacity must have one entry per period");
    auto negative = [](Count v) { return v < 0; };
    if (std::ranges::any_of(demand_.flat(), negative) || std::ranges::any_of(capacity_, negative) ||
        std::ranges::any_of(setup_, negative) || std::ranges::any_of(holding_, negative))
      throw StructuralError("instance data must be nonnegative");
    if (std::ranges::any_of(usage_, [](Count k) { return k <= 0; }))
      throw StructuralError("resource usage per unit must be positive");
  }

  Matrix<Count> demand_;
  std::vector<Count> usage_;
  std::vector<Count> capacity_;
  std::vector<Count> setup_;
  std::vector<Count> holding_;
};

/// Production plan stored as capacity loads (K_i * x_it). Setups are derived:
/// item i is set up in period t iff its load there is positive.
class Plan {
 public:
  Plan() = default;
  explicit Plan(const Instance& inst) : load_(inst.items(), inst.periods(), 0), usage_(inst.usage()) {}

  /// Build from integral lot sizes x_it (units).
  static Plan from_lots(const Instance& inst, const Matrix<Count>& lots) {
    if (lots.rows() != inst.items() || lots.cols() != inst.periods())
      throw StructuralError("lot matrix dimensions do not match the instance");
    Plan p(inst);
    for (std::size_t i = 0; i < inst.items(); ++i)
      for (std::size_t t = 0; t < inst.periods(); ++t) p.load_(i, t) = lots(i, t) * inst.usage(i);
    return p;
  }
  static Plan from_lots(const Instance& inst, const std::vector<std::vector<Count>>& lots) {
    return from_lots(inst, Matrix<Count>::from_rows(lots));
  }

  static Plan lot_for_lot(const Instance& inst) { return from_lots(inst, inst.demand()); }

  /// Build from capacity loads K_i * x_it directly.
  static Plan from_loads(const Instance& inst, Matrix<Count> loads) {
    if (loads.rows() != inst.items() || loads.cols() != inst.periods())
      throw StructuralError("load matrix dimensions do not match the instance");
    Plan p(inst);
    p.load_ = std::move(loads);
    return p;
  }

  std::size_t items() const noexcept { return load_.rows(); }
  std::size_t periods() const noexcept { return load_.cols(); }

  Count load(std::size_t i, std::size_t t) const noexcept { return load_(i, t); }
  void set_load(std::size_t i, std::size_t t, Count z) noexcept { load_(i, t) = z; }
  const Matrix<Count>& loads() const noexcept { return load_; }

  /// Lot size x_it in product units.
  double lot(std::size_t i, std::size_t t) const noexcept {
    return static_cast<double>(load_(i, t)) / static_cast<double>(usage_[i]);
  }
  bool produces(std::size_t i, std::size_t t) const noexcept { return load_(i, t) > 0; }

  std::size_t setup_count() const noexcept {
    return static_cast<std::size_t>(std::ranges::count_if(load_.flat(), [](Count z) { return z > 0; }));
  }

  /// End-of-period inventory I_it in units (recomputed, never cached).
  double inventory(const Instance& inst, std::size_t i, std::size_t t) const {
    Count cum = 0;
    for (std::size_t s = 0; s <= t; ++s) cum += load_(i, s) - inst.demand_load(i, s);
    return static_cast<double>(cum) / static_cast<double>(usage_[i]);
  }

  friend bool operator==(const Plan&, const Plan&) = default;

 private:
  Matrix<Count> load_;
  std::vector<Count> usage_;
};

struct CostBreakdown {
  double setup_total = 0;
  double holding_total = 0;
  double total = 0;
  /// total * scale, exact. Compare plans of one instance through this field.
  Count exact_total = 0;
  Count scale = 1;
};

inline void require_same_shape(const Instance& inst, const Plan& plan) {
  if (plan.items() != inst.items() || plan.periods() != inst.periods())
    throw StructuralError("plan dimensions do not match the instance");
}

/// Setup plus holding cost of a plan. Negative inventories are charged as-is
/// (check_plan reports them); the result is only meaningful for feasible plans.
inline CostBreakdown evaluate_cost(const Instance& inst, const Plan& plan) {
  require_same_shape(inst, plan);
  const Count scale = inst.cost_scale();
  Count setup = 0;
  Count holding_scaled = 0;
  for (std::size_t i = 0; i < inst.items(); ++i) {
    const Count per_load = inst.holding(i) * (scale / inst.usage(i));
    Count cum = 0;
    for (std::size_t t = 0; t < inst.periods(); ++t) {
      if (plan.load(i, t) > 0) setup += inst.setup(i);
      cum += plan.load(i, t) - inst.demand_load(i, t);
      holding_scaled += per_load * cum;
    }
  }
  CostBreakdown c;
  c.scale = scale;
  c.exact_total = setup * scale + holding_scaled;
  c.setup_total = static_cast<double>(setup);
  c.holding_total = static_cast<double>(holding_scaled) / static_cast<double>(scale);
  c.total = static_cast<double>(c.exact_total) / static_cast<double>(scale);
  return c;
}

struct Violation {
  enum class Kind { NegativeLot, Shortage, CapacityExcess };
  Kind kind;
  /// Item index, or -1 for capacity rows.
  int item;
  int period;
  /// Magnitude in units (lots, inventory) or capacity units (capacity excess).
  double amount;
};

inline std::vector<Violation> check_plan(const Instance& inst, const Plan& plan) {
  require_same_shape(inst, plan);
  std::vector<Violation> out;
  for (std::size_t i = 0; i < inst.items(); ++i) {
    Count cum = 0;
    for (std::size_t t = 0; t < inst.periods(); ++t) {
      if (plan.load(i, t) < 0)
        out.push_back({Violation::Kind::NegativeLot, static_cast<int>(i), static_cast<int>(t), -plan.lot(i, t)});
      cum += plan.load(i, t) - inst.demand_load(i, t);
      if (cum < 0)
        out.push_back({Violation::Kind::Shortage, static_cast<int>(i), static_cast<int>(t),
                       -static_cast<double>(cum) / static_cast<double>(inst.usage(i))});
    }
  }
  for (std::size_t t = 0; t < inst.periods(); ++t) {
    Count used = 0;
    for (std::size_t i = 0; i < inst.items(); ++i) used += plan.load(i, t);
    if (used > inst.capacity(t))
      out.push_back({Violation::Kind::CapacityExcess, -1, static_cast<int>(t),
                     static_cast<double>(used - inst.capacity(t))});
  }
  return out;
}

inline bool plan_feasible(const Instance& inst, const Plan& plan) { return check_plan(inst, plan).empty(); }

/// Cumulative-capacity criterion: without setup times, production can always be
/// moved earlier, so a plan exists iff cumulative requirement never exceeds
/// cumulative capacity.
inline bool instance_feasible(const Instance& inst) {
  Count need = 0;
  Count have = 0;
  for (std::size_t t = 0; t < inst.periods(); ++t) {
    for (std::size_t i = 0; i < inst.items(); ++i) need += inst.demand_load(i, t);
    have += inst.capacity(t);
    if (need > have) return false;
  }
  return true;
}

}  // namespace clsp
