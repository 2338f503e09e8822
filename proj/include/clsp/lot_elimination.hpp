#pragma once

// Lot elimination: walk periods backwards and try to close each producing
// setup (costliest item first), re-planning the remaining setups with the
// fixed-setup flow. Randomized variants perturb the closing order (RLE-1)
// or skip attempts at random (RLE-2).

#include <algorithm>
#include <numeric>
#include <vector>

#include "clsp/errors.hpp"
#include "clsp/pbp.hpp"
#include "clsp/rng.hpp"
#include "clsp/transship.hpp"

namespace clsp {

enum class LeVariant { Deterministic, RLE1, RLE2 };

struct LeConfig {
  LeVariant variant = LeVariant::Deterministic;
  double w = 0;
  int m = 1;
  std::uint64_t seed = 0;
};

struct LeResult {
  Plan plan;
  CostBreakdown cost;
  int best_rep = 0;
  std::size_t lp_solves = 0;
};

/// Attempt an elimination iff r > w.
inline bool ps4_gate(double r, double w) { return r > w; }

namespace detail {

inline LeResult le_pass(const Instance& inst, FixedSetupSolver& solver, const Plan& start, LeVariant variant,
                        double w, Rng* rng) {
  std::vector<double> order_cost(inst.items());
  if (variant == LeVariant::RLE1)
    order_cost = ps3_perturb_setups(inst, w, *rng);
  else
    for (std::size_t i = 0; i < inst.items(); ++i) order_cost[i] = static_cast<double>(inst.setup(i));

  LeResult cur{start, evaluate_cost(inst, start), 0, 0};
  SetupPattern pattern = SetupPattern::of(start);
  for (std::size_t k = inst.periods(); k-- > 0;) {
    std::vector<std::size_t> M;
    for (std::size_t i = 0; i < inst.items(); ++i)
      if (cur.plan.produces(i, k)) M.push_back(i);
    std::stable_sort(M.begin(), M.end(), [&](std::size_t a, std::size_t b) { return order_cost[a] > order_cost[b]; });
    for (std::size_t i : M) {
      if (variant == LeVariant::RLE2 && !ps4_gate(rng->uniform01(), w)) continue;
      pattern.set(i, k, false);
      LpResult r = solver.solve(pattern);
      ++cur.lp_solves;
      if (r.optimal() && r.cost.exact_total < cur.cost.exact_total) {
        cur.plan = std::move(r.plan);
        cur.cost = r.cost;
      } else {
        pattern.set(i, k, true);
      }
    }
  }
  return cur;
}

}  // namespace detail

/// Deterministic pass as candidate 0, then m randomized passes (RLE-1/2)
/// seeded derive_seed(seed, r); the cheapest plan wins, earliest on ties.
/// `on_candidate` as in run_rpp.
inline LeResult run_le(const Instance& inst, const Plan& initial, const LeConfig& cfg = {},
                       const CandidateHook& on_candidate = {}) {
  if (!plan_feasible(inst, initial)) throw InfeasibleInput("lot elimination needs a feasible initial plan");
  if (!(cfg.w >= 0 && cfg.w <= 1)) throw StructuralError("perturbation level w must lie in [0, 1]");
  FixedSetupSolver solver(inst);
  LeResult best = detail::le_pass(inst, solver, initial, LeVariant::Deterministic, 0, nullptr);
  if (on_candidate) on_candidate(0, best.cost.exact_total);
  if (cfg.variant == LeVariant::Deterministic) return best;
  if (cfg.m < 1) throw StructuralError("repetitions m must be at least 1");
  std::size_t solves = best.lp_solves;
  for (int r = 1; r <= cfg.m; ++r) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    LeResult cand = detail::le_pass(inst, solver, initial, cfg.variant, cfg.w, &rng);
    solves += cand.lp_solves;
    if (cand.cost.exact_total < best.cost.exact_total) {
      best = std::move(cand);
      best.best_rep = r;
    }
    if (on_candidate) on_candidate(r, best.cost.exact_total);
  }
  best.lp_solves = solves;
  return best;
}

}  // namespace clsp
