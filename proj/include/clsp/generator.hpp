#pragma once

// Benchmark instances over the five-factor design: demand variability,
// capacity absorption, average TBO, capacity tightness and lumpiness.
// Each factor level carries the letter used in instance ids (a..l).

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "clsp/errors.hpp"
#include "clsp/model.hpp"
#include "clsp/rng.hpp"

namespace clsp {

enum class DemandStd { High, Medium, Low };       // a b c
enum class Absorption { Constant, Random };       // d e
enum class AvgTbo { High, Low };                  // f g
enum class Tightness { High, Medium, Low };       // h i j
enum class Lumpiness { Normal, Lumpy };           // k l

inline constexpr double kDemandMean = 100.0;
inline constexpr int kGenerateAttempts = 1000;

struct FactorLevels {
  DemandStd demand_std = DemandStd::Medium;
  Absorption absorption = Absorption::Constant;
  AvgTbo tbo = AvgTbo::High;
  Tightness tightness = Tightness::Medium;
  Lumpiness lumpiness = Lumpiness::Normal;
  std::size_t items = 12;
  std::size_t periods = 12;
  std::uint64_t seed = 0;

  /// Five letters, one per factor, e.g. "adfhk".
  std::string letters() const {
    std::string s;
    s += static_cast<char>('a' + static_cast<int>(demand_std));
    s += static_cast<char>('d' + static_cast<int>(absorption));
    s += static_cast<char>('f' + static_cast<int>(tbo));
    s += static_cast<char>('h' + static_cast<int>(tightness));
    s += static_cast<char>('k' + static_cast<int>(lumpiness));
    return s;
  }

  static std::optional<FactorLevels> from_letters(const std::string& s) {
    if (s.size() != 5) return std::nullopt;
    auto in = [](char c, char lo, char hi) { return c >= lo && c <= hi; };
    if (!in(s[0], 'a', 'c') || !in(s[1], 'd', 'e') || !in(s[2], 'f', 'g') || !in(s[3], 'h', 'j') ||
        !in(s[4], 'k', 'l'))
      return std::nullopt;
    FactorLevels f;
    f.demand_std = static_cast<DemandStd>(s[0] - 'a');
    f.absorption = static_cast<Absorption>(s[1] - 'd');
    f.tbo = static_cast<AvgTbo>(s[2] - 'f');
    f.tightness = static_cast<Tightness>(s[3] - 'h');
    f.lumpiness = static_cast<Lumpiness>(s[4] - 'k');
    return f;
  }
};

inline double std_upper(DemandStd d) {
  switch (d) {
    case DemandStd::High: return 50;
    case DemandStd::Medium: return 25;
    case DemandStd::Low: return 10;
  }
  return 0;
}

inline double tightness_factor(Tightness t) {
  switch (t) {
    case Tightness::High: return 1.11;
    case Tightness::Medium: return 1.25;
    case Tightness::Low: return 2.00;
  }
  return 1;
}

inline double tbo_upper(AvgTbo t) { return t == AvgTbo::High ? 6.0 : 2.0; }

namespace detail {

inline Instance draw_instance(const FactorLevels& f, Rng& rng) {
  const std::size_t N = f.items, T = f.periods;
  Matrix<Count> d(N, T);
  const double sigma = rng.uniform(0, std_upper(f.demand_std));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t t = 0; t < T; ++t) {
      Count v = static_cast<Count>(std::ceil(std::max(0.0, rng.normal(kDemandMean, sigma))));
      if (f.lumpiness == Lumpiness::Lumpy) v = rng.uniform01() < 0.5 ? 0 : 2 * v;
      d(i, t) = v;
    }
  std::vector<Count> K(N, 1), S(N), h(N, 1);
  for (std::size_t i = 0; i < N; ++i)
    if (f.absorption == Absorption::Random) K[i] = static_cast<Count>(std::ceil(rng.uniform(1, 5)));
  Count requirement = 0;
  for (std::size_t i = 0; i < N; ++i) {
    Count sum = 0;
    for (std::size_t t = 0; t < T; ++t) sum += d(i, t);
    requirement += K[i] * sum;
    const double tbo = rng.uniform(1, tbo_upper(f.tbo));
    const double d_bar = static_cast<double>(sum) / static_cast<double>(T);
    S[i] = static_cast<Count>(std::ceil(tbo * tbo * static_cast<double>(h[i]) * d_bar / 2.0));
  }
  const auto cap = static_cast<Count>(
      std::ceil(tightness_factor(f.tightness) * static_cast<double>(requirement) / static_cast<double>(T)));
  return Instance(std::move(d), std::move(K), std::vector<Count>(T, cap), std::move(S), std::move(h));
}

}  // namespace detail

/// Draw until the instance admits a feasible plan (fresh sub-stream each try).
inline Instance generate(const FactorLevels& f) {
  if (f.items == 0 || f.periods == 0) throw StructuralError("instance needs at least one item and one period");
  for (int attempt = 0; attempt < kGenerateAttempts; ++attempt) {
    Rng rng(derive_seed(f.seed, static_cast<std::uint64_t>(attempt)));
    Instance inst = detail::draw_instance(f, rng);
    if (instance_feasible(inst)) return inst;
  }
  throw InfeasibleInput("no feasible instance after " + std::to_string(kGenerateAttempts) +
                        " draws for factor cell " + f.letters());
}

/// All 72 factor combinations in id order.
inline std::vector<FactorLevels> factor_cells(std::size_t items, std::size_t periods) {
  std::vector<FactorLevels> cells;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int e = 0; e < 3; ++e)
          for (int g = 0; g < 2; ++g) {
            FactorLevels f;
            f.demand_std = static_cast<DemandStd>(a);
            f.absorption = static_cast<Absorption>(b);
            f.tbo = static_cast<AvgTbo>(c);
            f.tightness = static_cast<Tightness>(e);
            f.lumpiness = static_cast<Lumpiness>(g);
            f.items = items;
            f.periods = periods;
            cells.push_back(f);
          }
  return cells;
}

inline constexpr int kInstancesPerCell = 5;

struct SuiteEntry {
  std::string id;
  FactorLevels levels;
  Instance instance;
};

inline std::string size_tag(std::size_t items, std::size_t periods) {
  return std::to_string(items) + "x" + std::to_string(periods);
}

/// Id layout: <N>x<T>-<letters>-<replicate 1..5>.
inline std::string instance_id(const FactorLevels& f, int replicate) {
  return size_tag(f.items, f.periods) + "-" + f.letters() + "-" + std::to_string(replicate);
}

/// 72 cells x 5 replicates; cell c, replicate r uses seed derive_seed(seed, 5c + r).
inline std::vector<SuiteEntry> generate_suite(std::size_t items, std::size_t periods, std::uint64_t seed,
                                              std::size_t limit = 0) {
  std::vector<SuiteEntry> suite;
  const auto cells = factor_cells(items, periods);
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (int r = 0; r < kInstancesPerCell; ++r) {
      if (limit && suite.size() >= limit) return suite;
      FactorLevels f = cells[c];
      f.seed = derive_seed(seed, c * kInstancesPerCell + static_cast<std::size_t>(r));
      suite.push_back({instance_id(f, r + 1), f, generate(f)});
    }
  return suite;
}

/// Parse "<N>x<T>-<letters>-<r>" back to its factor levels (seed left 0).
inline std::optional<FactorLevels> levels_from_id(const std::string& id) {
  const auto d1 = id.find('-');
  const auto d2 = id.rfind('-');
  if (d1 == std::string::npos || d2 == d1) return std::nullopt;
  const auto x = id.find('x');
  if (x == std::string::npos || x > d1) return std::nullopt;
  auto f = FactorLevels::from_letters(id.substr(d1 + 1, d2 - d1 - 1));
  if (!f) return std::nullopt;
  try {
    f->items = std::stoul(id.substr(0, x));
    f->periods = std::stoul(id.substr(x + 1, d1 - x - 1));
    const int r = std::stoi(id.substr(d2 + 1));
    if (r < 1 || r > kInstancesPerCell) return std::nullopt;
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return f;
}

}  // namespace clsp
