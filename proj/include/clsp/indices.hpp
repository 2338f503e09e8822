#pragma once

// Working context of the period-by-period heuristics and the priority
// indices that rank lot extensions.
//
// Periods are 0-based here: k runs over 0..T-2 and "no overload" is encoded
// as alpha == T. All capacity quantities (s, beta, loads) are in capacity
// units; holding amounts H are money.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "clsp/model.hpp"

namespace clsp {

enum class Rule { Gunther, DixonSilver, SilverMeal, LUC, AC, LTC, HeinARank, HeinAFeas, HeinB };

inline std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::Gunther: return "Gunther";
    case Rule::DixonSilver: return "DixonSilver";
    case Rule::SilverMeal: return "SilverMeal";
    case Rule::LUC: return "LUC";
    case Rule::AC: return "AC";
    case Rule::LTC: return "LTC";
    case Rule::HeinARank: return "HeinA-ranking";
    case Rule::HeinAFeas: return "HeinA-feasibility";
    case Rule::HeinB: return "HeinB";
  }
  return "?";
}

inline constexpr double kIneligible = -std::numeric_limits<double>::infinity();
inline constexpr double kIndexTolerance = 1e-9;

inline std::vector<Count> surplus(const Instance& inst, const Matrix<Count>& loads) {
  std::vector<Count> s(inst.capacity());
  for (std::size_t i = 0; i < inst.items(); ++i)
    for (std::size_t t = 0; t < inst.periods(); ++t) s[t] -= loads(i, t);
  return s;
}

struct Overload {
  std::size_t alpha;
  Count beta;
};

/// First t > k where the cumulative shortfall of s over (k, t] turns
/// positive, and that shortfall. alpha == s.size() when there is none.
inline Overload locate_overload(const std::vector<Count>& s, std::size_t k) {
  Count acc = 0;
  for (std::size_t t = k + 1; t < s.size(); ++t) {
    acc -= s[t];
    if (acc > 0) return {t, acc};
  }
  return {s.size(), 0};
}

/// Largest cumulative shortfall over (k, t] for t >= alpha.
inline Count overload_peak(const std::vector<Count>& s, std::size_t k, std::size_t alpha) {
  Count acc = 0, peak = 0;
  for (std::size_t t = k + 1; t < s.size(); ++t) {
    acc -= s[t];
    if (t >= alpha) peak = std::max(peak, acc);
  }
  return peak;
}

struct IndexContext {
  std::size_t k = 0;
  std::vector<Count> s;
  std::size_t alpha = 0;
  Count beta = 0;
  std::vector<std::size_t> M;

  /// Last period an extension may reach.
  std::size_t horizon() const noexcept { return alpha < s.size() ? alpha : s.size() - 1; }
};

inline std::vector<std::size_t> candidate_items(const Matrix<Count>& loads, std::size_t k, std::size_t tstar) {
  std::vector<std::size_t> M;
  for (std::size_t i = 0; i < loads.rows(); ++i) {
    if (loads(i, k) <= 0) continue;
    for (std::size_t t = k + 1; t <= tstar; ++t)
      if (loads(i, t) > 0) {
        M.push_back(i);
        break;
      }
  }
  return M;
}

inline IndexContext compute_context(const Instance& inst, const Matrix<Count>& loads, std::size_t k) {
  IndexContext ctx;
  ctx.k = k;
  ctx.s = surplus(inst, loads);
  auto [alpha, beta] = locate_overload(ctx.s, k);
  ctx.alpha = alpha;
  ctx.beta = beta;
  ctx.M = candidate_items(loads, k, ctx.horizon());
  return ctx;
}

/// Earliest t in [k+1, t*] whose lot fits the surplus of period k.
inline std::optional<std::size_t> extended_period(const IndexContext& ctx, const Matrix<Count>& loads,
                                                  std::size_t item) {
  const Count room = ctx.s[ctx.k];
  for (std::size_t t = ctx.k + 1; t <= ctx.horizon(); ++t)
    if (loads(item, t) > 0 && loads(item, t) <= room) return t;
  return std::nullopt;
}

struct Coverage {
  std::size_t periods = 0;  // number of periods, counted from k, fed by the lot
  double holding = 0;       // money
};

/// Periods served by the lot of period k (plus `extra` capacity units) when
/// stock is consumed oldest first.
inline Coverage lot_coverage(const Instance& inst, const Matrix<Count>& loads, std::size_t i, std::size_t k,
                             Count extra = 0) {
  const Count K = inst.usage(i);
  Count old = 0;
  for (std::size_t j = 0; j < k; ++j) old += loads(i, j) - K * inst.demand(i, j);
  Count lot = loads(i, k) + extra;
  Coverage c;
  for (std::size_t j = k; j < inst.periods() && lot > 0; ++j) {
    Count need = K * inst.demand(i, j);
    const Count from_old = std::min(std::max<Count>(old, 0), need);
    old -= from_old;
    need -= from_old;
    const Count use = std::min(lot, need);
    if (use > 0) {
      lot -= use;
      c.periods = j - k + 1;
      c.holding += static_cast<double>(inst.holding(i)) * static_cast<double>(j - k) * static_cast<double>(use) /
                   static_cast<double>(K);
    }
  }
  return c;
}

/// Everything an index needs to judge moving lot (item, period) into k.
struct Extension {
  std::size_t item = 0, period = 0;
  Count load = 0;          // capacity units moved
  double units = 0;        // product units moved
  double lot_units = 0;    // product units already in the lot of k (Q1)
  double T1 = 1, T2 = 2;   // periods covered before / after
  double H1 = 0, dH = 0;   // holding of the current lot, holding added by the move
};

inline Extension describe_extension(const Instance& inst, const Matrix<Count>& loads, std::size_t k,
                                    std::size_t item, std::size_t t) {
  Extension e;
  e.item = item;
  e.period = t;
  e.load = loads(item, t);
  const double K = static_cast<double>(inst.usage(item));
  e.units = static_cast<double>(e.load) / K;
  e.lot_units = static_cast<double>(loads(item, k)) / K;
  const Coverage before = lot_coverage(inst, loads, item, k);
  const Coverage after = lot_coverage(inst, loads, item, k, e.load);
  e.T1 = static_cast<double>(std::max<std::size_t>(before.periods, 1));
  e.T2 = static_cast<double>(std::max({after.periods, t - k + 1, before.periods + 1}));
  e.H1 = before.holding;
  e.dH = static_cast<double>(inst.holding(item)) * static_cast<double>(t - k) * e.units;
  return e;
}

struct IndexQuantities {
  double d_bar = 0;
  double d_tilde = 0;
  double TBO = 1;
  double E = 0;
  std::vector<Count> CO;   // per period, zero at and before k
  std::vector<Count> CH;   // per period after k
  std::vector<double> q;   // per period after k, product units
};

/// Time between orders and the expected saving of ordering that far ahead.
struct TboTerms {
  double TBO = 1;
  double E = 0;
};

inline TboTerms tbo_terms(double S, double h, double d_bar) {
  if (d_bar <= 0 || h <= 0) return {};
  const double tbo = std::sqrt(2.0 * S / (h * d_bar));
  return {tbo, S * (tbo - 1) - tbo * (tbo - 1) * d_bar * h / 2};
}

inline double average_demand(const Instance& inst, std::size_t i) {
  double sum = 0;
  for (std::size_t t = 0; t < inst.periods(); ++t) sum += static_cast<double>(inst.demand(i, t));
  return sum / static_cast<double>(inst.periods());
}

inline double remaining_average(const Instance& inst, const Matrix<Count>& loads, std::size_t i, std::size_t k) {
  const std::size_t T = inst.periods();
  if (k + 1 >= T) return 0;
  Count sum = 0;
  for (std::size_t j = k + 1; j < T; ++j) sum += loads(i, j);
  return static_cast<double>(sum) / static_cast<double>(inst.usage(i)) / static_cast<double>(T - k - 1);
}

inline IndexQuantities index_quantities(const Instance& inst, const Matrix<Count>& loads, std::size_t k,
                                        std::size_t item, std::optional<double> setup = std::nullopt) {
  const std::size_t T = inst.periods();
  IndexQuantities iq;
  iq.d_bar = average_demand(inst, item);
  iq.d_tilde = remaining_average(inst, loads, item, k);
  auto [tbo, E] = tbo_terms(setup.value_or(static_cast<double>(inst.setup(item))),
                            static_cast<double>(inst.holding(item)), iq.d_bar);
  iq.TBO = tbo;
  iq.E = E;
  const auto s = surplus(inst, loads);
  iq.CO.assign(T, 0);
  iq.CH.assign(T, 0);
  iq.q.assign(T, 0);
  Count acc = 0, worst = 0;
  for (std::size_t t = k + 1; t < T; ++t) {
    acc -= s[t];
    worst = std::max(worst, acc);
    iq.CO[t] = worst;
  }
  for (std::size_t t = k + 1; t < T; ++t) {
    iq.CH[t] = s[k] - iq.CO[t - 1];
    const double K = static_cast<double>(inst.usage(item));
    iq.q[t] = std::max(0.0, std::min(static_cast<double>(loads(item, t)) / K, static_cast<double>(iq.CH[t]) / K));
  }
  return iq;
}

/// Item data an index may consult besides the move itself.
struct ItemTerms {
  double S = 0, h = 0, K = 1;
  double TBO = 1, E = 0;
  double d_bar = 0;
};

/// Lot-sizing / ranking index of an extension (larger is better, >= 0 means
/// the extension pays off under the rule).
inline double index_value(Rule rule, const Extension& e, const ItemTerms& it) {
  if (e.load <= 0 || e.units <= 0) return kIneligible;
  const double cap = static_cast<double>(e.load);
  const double S = it.S;
  const double H2 = e.H1 + e.dH;
  const double avg_drop = (S + e.H1) / e.T1 - (S + H2) / e.T2;
  switch (rule) {
    case Rule::SilverMeal:
      return avg_drop;
    case Rule::DixonSilver:
      return avg_drop / cap;
    case Rule::LUC:
      if (e.lot_units <= 0) return kIneligible;
      return (S + e.H1) / e.lot_units - (S + H2) / (e.lot_units + e.units);
    case Rule::AC:
      return S - e.dH;
    case Rule::LTC:
      return S - H2;
    case Rule::Gunther:
      // Groff: marginal setup saving per period against half the added holding.
      return (S / e.T1 - S / e.T2 - it.h * e.units / 2) / cap;
    case Rule::HeinARank:
    case Rule::HeinAFeas:
      return (S - e.dH) / cap;
    case Rule::HeinB:
      // Dixon-Silver drop while the lot stays within its order interval;
      // beyond it the saved setup must also pay for the added holding.
      if (e.T2 <= it.TBO + 0.5) return avg_drop / cap;
      return std::min(avg_drop, (S - e.dH) / e.T2) / cap;
  }
  return kIneligible;
}

/// A forced pre-production of (part of) a future lot into period k.
struct Shift {
  std::size_t item = 0, period = 0;
  Count load = 0;          // capacity units moved
  double units = 0;
  double dH = 0;           // holding added (money)
  bool whole_lot = false;  // removes the setup in `period`
  bool new_setup = false;  // item has no lot in k yet
  double q_units = 0;      // largest amount the capacity profile lets through
};

/// Earliest positive lot of `item` in [k+1, alpha] and the part of it that
/// is moved to remove an overload of Q capacity units.
inline std::optional<Shift> feasibility_shift(const Instance& inst, const Matrix<Count>& loads,
                                              const IndexContext& ctx, std::size_t item, Count Q) {
  const std::size_t last = std::min(ctx.alpha, ctx.s.size() - 1);
  for (std::size_t t = ctx.k + 1; t <= last; ++t) {
    const Count z = loads(item, t);
    if (z <= 0) continue;
    Shift sh;
    sh.item = item;
    sh.period = t;
    sh.load = std::min(z, Q);
    const double K = static_cast<double>(inst.usage(item));
    sh.units = static_cast<double>(sh.load) / K;
    sh.dH = static_cast<double>(inst.holding(item)) * static_cast<double>(t - ctx.k) * sh.units;
    sh.whole_lot = sh.load == z;
    sh.new_setup = loads(item, ctx.k) == 0;
    Count worst = 0, acc = 0;
    for (std::size_t j = ctx.k + 1; j < t; ++j) {
      acc -= ctx.s[j];
      worst = std::max(worst, acc);
    }
    sh.q_units = std::max(0.0, std::min(static_cast<double>(z), static_cast<double>(ctx.s[ctx.k] - worst)) / K);
    return sh;
  }
  return std::nullopt;
}

/// Feasibility-routine index: minus the cost increase per capacity unit
/// shifted (always <= 0; larger is cheaper).
inline double feasibility_value(Rule rule, const Shift& sh, const ItemTerms& it) {
  if (sh.load <= 0) return kIneligible;
  const double cap = static_cast<double>(sh.load);
  switch (rule) {
    case Rule::Gunther: {
      // Judged on the largest shiftable amount rather than the amount needed.
      const double q = sh.q_units > 0 ? std::min(sh.q_units, sh.units) : sh.units;
      const bool whole = sh.whole_lot || q * it.K >= cap;
      const double cost = sh.dH / sh.units * q + (sh.new_setup ? it.S : 0.0) - (whole ? it.S : 0.0);
      return -std::max(0.0, cost) / (q * it.K);
    }
    case Rule::HeinAFeas:
    case Rule::HeinB: {
      const double cost = sh.dH + (sh.new_setup ? it.S : 0.0) - (sh.whole_lot ? it.S : 0.0);
      return -std::max(0.0, cost) / cap;
    }
    default:
      return -sh.dH / cap;
  }
}

}  // namespace clsp
