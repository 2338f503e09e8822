#pragma once

// Self-adaptive choice of the perturbation level: bisection over a grid of
// w values, probing each with a full randomized run.

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "clsp/errors.hpp"
#include "clsp/pbp.hpp"

namespace clsp {

/// 0.05, 0.10, ..., 0.90
inline std::vector<double> default_w_grid() {
  std::vector<double> g;
  for (int j = 1; j <= 18; ++j) g.push_back(j * 5 / 100.0);
  return g;
}

/// Stop once the best gap is at most this many percent.
inline constexpr double kAdaptiveGapStop = 0.1;

struct ArppConfig {
  Strategy strategy = Strategy::PS3;
  int m = 20;
  std::uint64_t seed = 0;
  std::vector<double> grid = default_w_grid();
  std::optional<double> reference_cost;
};

struct ArppProbe {
  std::size_t index;
  double w;
  CostBreakdown cost;
};

struct ArppResult {
  Plan plan;
  CostBreakdown cost;
  double w_star = 0;
  int probe_count = 0;
  std::vector<ArppProbe> probes;  // in probing order
};

inline ArppResult run_arpp(const Instance& inst, const ArppConfig& cfg) {
  const std::size_t n = cfg.grid.size();
  if (n < 3) throw StructuralError("adaptive search needs at least three grid points");
  if (!std::is_sorted(cfg.grid.begin(), cfg.grid.end())) throw StructuralError("w grid must be sorted");
  if (cfg.strategy == Strategy::None) throw StructuralError("adaptive search needs a perturbation strategy");
  if (cfg.reference_cost && *cfg.reference_cost <= 0) throw StructuralError("reference cost must be positive");

  RppResult baseline;
  baseline.plan = run_pbp(inst, presets::HeinB);
  baseline.cost = evaluate_cost(inst, baseline.plan);

  ArppResult out;
  std::map<std::size_t, double> key;  // grid index -> gap (or cost)
  std::optional<double> best_gap;
  auto probe = [&](std::size_t p) {
    PerturbationConfig pc{cfg.strategy, cfg.grid[p], cfg.m, derive_seed(cfg.seed, p)};
    RppResult r = run_rpp(inst, pc, presets::HeinB, &baseline);
    ++out.probe_count;
    out.probes.push_back({p, cfg.grid[p], r.cost});
    if (out.probe_count == 1 || r.cost.exact_total < out.cost.exact_total) {
      out.plan = std::move(r.plan);
      out.cost = r.cost;
      out.w_star = cfg.grid[p];
    }
    double v = r.cost.total;
    if (cfg.reference_cost) {
      v = (r.cost.total - *cfg.reference_cost) / *cfg.reference_cost * 100.0;
      best_gap = best_gap ? std::min(*best_gap, v) : v;
    }
    key[p] = v;
  };

  std::size_t p1 = 0, p2 = (n - 1) / 2, p3 = n - 1;
  probe(p1);
  probe(p2);
  probe(p3);
  while (!(best_gap && *best_gap <= kAdaptiveGapStop)) {
    std::array<std::size_t, 3> tri{p1, p2, p3};
    std::stable_sort(tri.begin(), tri.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
    p1 = std::min(tri[0], tri[1]);
    p3 = std::max(tri[0], tri[1]);
    if (p3 - p1 <= 1) break;
    p2 = (p1 + p3) / 2;
    if (key.contains(p2)) break;
    probe(p2);
  }
  return out;
}

}  // namespace clsp
