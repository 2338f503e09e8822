#pragma once

// Period-by-period construction (ranking, lot-sizing step, feasibility
// routine) and its randomized repetitions.

#include <array>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "clsp/errors.hpp"
#include "clsp/indices.hpp"
#include "clsp/model.hpp"
#include "clsp/rng.hpp"

namespace clsp {

struct RuleConfig {
  Rule ranking = Rule::HeinB;
  Rule lotsizing = Rule::HeinB;
  Rule feasibility = Rule::HeinB;

  friend bool operator==(const RuleConfig&, const RuleConfig&) = default;
};

namespace presets {
inline constexpr RuleConfig Gunther{Rule::Gunther, Rule::Gunther, Rule::Gunther};
inline constexpr RuleConfig DixonSilver{Rule::DixonSilver, Rule::DixonSilver, Rule::DixonSilver};
inline constexpr RuleConfig HeinA1{Rule::HeinARank, Rule::DixonSilver, Rule::HeinAFeas};
inline constexpr RuleConfig HeinA2_LUC{Rule::HeinARank, Rule::LUC, Rule::HeinAFeas};
inline constexpr RuleConfig HeinA2_SM{Rule::HeinARank, Rule::SilverMeal, Rule::HeinAFeas};
inline constexpr RuleConfig HeinA3_LTC{Rule::HeinARank, Rule::LTC, Rule::HeinAFeas};
inline constexpr RuleConfig HeinA3_AC{Rule::HeinARank, Rule::AC, Rule::HeinAFeas};
inline constexpr RuleConfig HeinB{Rule::HeinB, Rule::HeinB, Rule::HeinB};
}  // namespace presets

struct NamedPreset {
  std::string_view name;
  RuleConfig rules;
};

inline constexpr std::array<NamedPreset, 8> kPresets{{
    {"Gunther", presets::Gunther},
    {"DixonSilver", presets::DixonSilver},
    {"HeinA1", presets::HeinA1},
    {"HeinA2_LUC", presets::HeinA2_LUC},
    {"HeinA2_SM", presets::HeinA2_SM},
    {"HeinA3_LTC", presets::HeinA3_LTC},
    {"HeinA3_AC", presets::HeinA3_AC},
    {"HeinB", presets::HeinB},
}};

inline std::optional<RuleConfig> find_preset(std::string_view name) {
  for (const auto& p : kPresets)
    if (p.name == name) return p.rules;
  return std::nullopt;
}

enum class Strategy { None, PS1, PS2, PS3 };

/// Progress callback for best-of-m loops: (candidate index, best exact cost so far).
using CandidateHook = std::function<void(int, Count)>;

struct PerturbationConfig {
  Strategy strategy = Strategy::None;
  double w = 0;
  int m = 1;
  std::uint64_t seed = 0;
};

/// Rule mixing: `a` in [0,1) picks one of five alternatives with total
/// probability w, HeinB otherwise.
inline Rule ps1_select_rule(double a, double w) {
  if (w <= 0) return Rule::HeinB;
  constexpr std::array<Rule, 5> others{Rule::Gunther, Rule::DixonSilver, Rule::SilverMeal, Rule::LUC, Rule::AC};
  for (std::size_t j = 0; j < others.size(); ++j)
    if (a <= w * static_cast<double>(j + 1) / 5.0) return others[j];
  return Rule::HeinB;
}

inline double ps2_noise(double u, double b) { return u * b; }

/// Setup costs scaled by independent U[1-w, 1+w] factors, one per item.
inline std::vector<double> ps3_perturb_setups(const Instance& inst, double w, Rng& rng) {
  std::vector<double> S(inst.items());
  for (std::size_t i = 0; i < inst.items(); ++i) S[i] = static_cast<double>(inst.setup(i)) * rng.multiplier(w);
  return S;
}

namespace detail {

inline void require_level(double w) {
  if (!(w >= 0 && w <= 1)) throw StructuralError("perturbation level w must lie in [0, 1]");
}

class PbpBuilder {
 public:
  PbpBuilder(const Instance& inst, const RuleConfig& rules, Strategy strategy, double w, Rng* rng)
      : inst_(inst), rules_(rules), strategy_(strategy), w_(w), rng_(rng) {
    require_level(w);
    if (strategy != Strategy::None && rng == nullptr) throw StructuralError("perturbed run needs a generator");
    std::vector<double> S(inst.items());
    if (strategy == Strategy::PS3)
      S = ps3_perturb_setups(inst, w, *rng);
    else
      for (std::size_t i = 0; i < inst.items(); ++i) S[i] = static_cast<double>(inst.setup(i));
    terms_.resize(inst.items());
    for (std::size_t i = 0; i < inst.items(); ++i) {
      auto& it = terms_[i];
      it.S = S[i];
      it.h = static_cast<double>(inst.holding(i));
      it.K = static_cast<double>(inst.usage(i));
      it.d_bar = average_demand(inst, i);
      auto [tbo, E] = tbo_terms(it.S, it.h, it.d_bar);
      it.TBO = tbo;
      it.E = E;
    }
  }

  Plan build() {
    const std::size_t T = inst_.periods();
    loads_ = Matrix<Count>(inst_.items(), T);
    for (std::size_t i = 0; i < inst_.items(); ++i)
      for (std::size_t t = 0; t < T; ++t) loads_(i, t) = inst_.demand_load(i, t);
    ctx_.s = surplus(inst_, loads_);
    for (std::size_t k = 0; k + 1 < T; ++k) {
      ctx_.k = k;
      RuleConfig rules = rules_;
      if (strategy_ == Strategy::PS1) {
        const Rule r = ps1_select_rule(rng_->uniform01(), w_);
        rules = {r, r, r};
      }
      lot_sizing(rules);
      feasibility(rules.feasibility);
    }
    return Plan::from_loads(inst_, std::move(loads_));
  }

 private:
  double noise() { return strategy_ == Strategy::PS2 ? rng_->multiplier(w_) : 1.0; }

  const ItemTerms& terms(std::size_t i) const { return terms_[i]; }

  void move(std::size_t i, std::size_t from, Count z) {
    const std::size_t k = ctx_.k;
    loads_(i, k) += z;
    loads_(i, from) -= z;
    ctx_.s[k] -= z;
    ctx_.s[from] += z;
  }

  void relocate() {
    auto [alpha, beta] = locate_overload(ctx_.s, ctx_.k);
    ctx_.alpha = alpha;
    ctx_.beta = beta;
  }

  void lot_sizing(const RuleConfig& rules) {
    const std::size_t k = ctx_.k;
    relocate();
    ctx_.M = candidate_items(loads_, k, ctx_.horizon());
    while (ctx_.s[k] > 0 && !ctx_.M.empty()) {
      // Rank every candidate afresh; items without an extended period leave M.
      std::optional<Extension> best;
      double best_rank = kIneligible, best_u = kIneligible;
      std::vector<std::size_t> keep;
      keep.reserve(ctx_.M.size());
      for (std::size_t i : ctx_.M) {
        const auto t = extended_period(ctx_, loads_, i);
        if (!t) continue;
        keep.push_back(i);
        const Extension e = describe_extension(inst_, loads_, k, i, *t);
        const ItemTerms& it = terms(i);
        const double rank = ps2_noise(index_value(rules.ranking, e, it), noise());
        if (!best || rank > best_rank) {
          best = e;
          best_rank = rank;
          best_u = rules.lotsizing == rules.ranking ? rank : index_value(rules.lotsizing, e, it);
        }
      }
      ctx_.M = std::move(keep);
      if (!best) break;

      const std::size_t i = best->item;
      if (best_u >= -kIndexTolerance && ctx_.s[k] >= best->load) {
        const Count P = best->load;
        move(i, best->period, P);
        if (ctx_.alpha < inst_.periods()) {
          if (P >= ctx_.beta) {
            relocate();
            ctx_.M = candidate_items(loads_, k, ctx_.horizon());
          } else {
            ctx_.beta -= P;
          }
        }
      } else {
        std::erase(ctx_.M, i);
      }
    }
  }

  void feasibility(Rule rule) {
    const std::size_t k = ctx_.k;
    relocate();
    if (ctx_.alpha >= inst_.periods()) return;
    Count Q = overload_peak(ctx_.s, k, ctx_.alpha);
    while (Q > 0) {
      if (ctx_.s[k] < Q)
        throw ConstructionFailure("period " + std::to_string(k + 1) + " cannot absorb the forced overload");
      std::optional<Shift> best;
      double best_v = kIneligible;
      for (std::size_t i = 0; i < inst_.items(); ++i) {
        const auto sh = feasibility_shift(inst_, loads_, ctx_, i, Q);
        if (!sh) continue;
        const double v = ps2_noise(feasibility_value(rule, *sh, terms(i)), noise());
        if (!best || v > best_v) {
          best = sh;
          best_v = v;
        }
      }
      if (!best) throw ConstructionFailure("no lot left to shift into period " + std::to_string(k + 1));
      move(best->item, best->period, best->load);
      relocate();
      Q = ctx_.alpha < inst_.periods() ? overload_peak(ctx_.s, k, ctx_.alpha) : 0;
    }
  }

  const Instance& inst_;
  RuleConfig rules_;
  Strategy strategy_;
  double w_;
  Rng* rng_;
  std::vector<ItemTerms> terms_;
  Matrix<Count> loads_;
  IndexContext ctx_;
};

}  // namespace detail

/// One construction. `rng` is required unless strategy is None.
inline Plan run_pbp(const Instance& inst, const RuleConfig& rules, Strategy strategy = Strategy::None,
                    double w = 0, Rng* rng = nullptr) {
  if (!instance_feasible(inst)) throw InfeasibleInput("instance has no feasible plan");
  return detail::PbpBuilder(inst, rules, strategy, w, rng).build();
}

struct RppResult {
  Plan plan;
  CostBreakdown cost;
  int best_rep = 0;  // 0 is the unperturbed baseline
};

/// Best of the unperturbed construction and m perturbed repetitions;
/// repetition r draws from stream derive_seed(seed, r). A caller running
/// several configurations may pass the unperturbed result in `baseline`.
/// `on_candidate(r, best)` fires after each candidate r with the best exact
/// cost so far, which is what run_rpp with m = r would return.
inline RppResult run_rpp(const Instance& inst, const PerturbationConfig& cfg,
                         const RuleConfig& rules = presets::HeinB, const RppResult* baseline = nullptr,
                         const CandidateHook& on_candidate = {}) {
  detail::require_level(cfg.w);
  if (cfg.m < 1 && cfg.strategy != Strategy::None) throw StructuralError("repetitions m must be at least 1");
  RppResult best;
  if (baseline) {
    best = *baseline;
    best.best_rep = 0;
  } else {
    best.plan = run_pbp(inst, rules);
    best.cost = evaluate_cost(inst, best.plan);
  }
  if (on_candidate) on_candidate(0, best.cost.exact_total);
  if (cfg.strategy == Strategy::None) return best;
  for (int r = 1; r <= cfg.m; ++r) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    Plan p = run_pbp(inst, rules, cfg.strategy, cfg.w, &rng);
    CostBreakdown c = evaluate_cost(inst, p);
    if (c.exact_total < best.cost.exact_total) {
      best.plan = std::move(p);
      best.cost = c;
      best.best_rep = r;
    }
    if (on_candidate) on_candidate(r, best.cost.exact_total);
  }
  return best;
}

}  // namespace clsp
