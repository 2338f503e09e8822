#pragma once

// Tabu search over setup patterns. A move flips one setup (never in the
// first period); each neighbour is priced by re-solving the fixed-setup flow.

#include <map>
#include <optional>
#include <vector>

#include "clsp/errors.hpp"
#include "clsp/transship.hpp"

namespace clsp {

inline int tabu_tenure(std::size_t T) { return std::max(1, static_cast<int>(3 * T / 5)); }

struct TabuConfig {
  std::optional<int> theta;            // default tabu_tenure(T)
  int non_improve_limit = 2;
  std::optional<int> iteration_cap;    // F
  std::optional<double> reference_cost;
  bool restricted = false;
};

struct TabuEntry {
  std::size_t item = 0, period = 0;
  bool y_value = false;
  int expires_at = 0;  // last iteration during which the move stays forbidden
};

struct TabuResult {
  Plan plan;
  CostBreakdown cost;
  int iterations = 0;
  std::size_t lp_solves = 0;
};

namespace detail {

struct Neighbour {
  std::size_t item, period;
  bool y_value;
  Count cost;
};

}  // namespace detail

inline TabuResult run_tabu(const Instance& inst, const Plan& initial, const TabuConfig& cfg = {}) {
  if (!plan_feasible(inst, initial)) throw InfeasibleInput("tabu search needs a feasible initial plan");
  const std::size_t N = inst.items(), T = inst.periods();
  const int theta = cfg.theta.value_or(tabu_tenure(T));
  if (theta < 1) throw StructuralError("tabu tenure must be at least 1");

  // Slots with no demand at or after them can never carry useful production.
  Matrix<std::uint8_t> useful(N, T, 0);
  for (std::size_t i = 0; i < N; ++i) {
    Count tail = 0;
    for (std::size_t t = T; t-- > 0;) {
      tail += inst.demand(i, t);
      useful(i, t) = tail > 0;
    }
  }

  FixedSetupSolver solver(inst);
  std::map<std::vector<std::uint8_t>, LpResult> cache;
  TabuResult out{initial, evaluate_cost(inst, initial), 0, 0};
  Plan now = initial;
  std::vector<TabuEntry> tabu;
  int stale = 0;
  const auto scale = static_cast<double>(inst.cost_scale());
  auto reached_reference = [&] {
    return cfg.reference_cost && static_cast<double>(out.cost.exact_total) <= *cfg.reference_cost * scale + 1e-9;
  };

  auto evaluate = [&](const SetupPattern& p) -> const LpResult& {
    std::vector<std::uint8_t> key(N * T);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t t = 0; t < T; ++t) key[i * T + t] = p.allowed(i, t);
    auto it = cache.find(key);
    if (it == cache.end()) {
      ++out.lp_solves;
      it = cache.emplace(std::move(key), solver.solve(p)).first;
    }
    return it->second;
  };

  for (int j = 1;; ++j) {
    if (reached_reference()) break;
    if (stale >= cfg.non_improve_limit) break;
    if (cfg.iteration_cap && j > *cfg.iteration_cap) break;

    // Restricted mode: two closing iterations, then one opening iteration.
    const bool close_only = cfg.restricted && (j - 1) % 3 != 2;
    const bool open_only = cfg.restricted && (j - 1) % 3 == 2;
    SetupPattern pattern = SetupPattern::of(now);
    std::vector<detail::Neighbour> hood;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t t = 1; t < T; ++t) {
        const bool on = pattern.allowed(i, t);
        if ((on && open_only) || (!on && close_only) || (!on && !useful(i, t))) continue;
        pattern.flip(i, t);
        const LpResult& r = evaluate(pattern);
        pattern.flip(i, t);
        if (r.optimal()) hood.push_back({i, t, !on, r.cost.exact_total});
      }
    if (hood.empty()) break;
    out.iterations = j;

    auto is_tabu = [&](const detail::Neighbour& n) {
      for (const auto& e : tabu)
        if (e.item == n.item && e.period == n.period && e.y_value == n.y_value && j <= e.expires_at) return true;
      return false;
    };
    const detail::Neighbour* best_any = nullptr;
    const detail::Neighbour* best_free = nullptr;
    for (const auto& n : hood) {
      if (!best_any || n.cost < best_any->cost) best_any = &n;
      if (!is_tabu(n) && (!best_free || n.cost < best_free->cost)) best_free = &n;
    }
    const detail::Neighbour* pick = best_any;
    if (best_any->cost >= out.cost.exact_total && best_free) pick = best_free;

    SetupPattern next = SetupPattern::of(now);
    next.flip(pick->item, pick->period);
    const LpResult& chosen = evaluate(next);
    now = chosen.plan;
    std::erase_if(tabu, [&](const TabuEntry& e) { return e.expires_at < j; });
    tabu.push_back({pick->item, pick->period, pick->y_value, j + theta});

    if (chosen.cost.exact_total < out.cost.exact_total) {
      out.plan = chosen.plan;
      out.cost = chosen.cost;
      stale = 0;
    } else {
      ++stale;
    }
  }
  return out;
}

}  // namespace clsp
