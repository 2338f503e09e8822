#include <gtest/gtest.h>

#include <algorithm>

#include "clsp/adaptive.hpp"
#include "clsp/generator.hpp"
#include "oracles.hpp"

using namespace clsp;

namespace {

const std::vector<SuiteEntry>& sample_suite() {
  static const auto suite = generate_suite(12, 12, 5, 24);
  return suite;
}

}  // namespace

TEST(Grid, EighteenLevels) {
  auto g = default_w_grid();
  ASSERT_EQ(g.size(), 18u);
  EXPECT_DOUBLE_EQ(g.front(), 0.05);
  EXPECT_DOUBLE_EQ(g.back(), 0.90);
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
}

TEST(Arpp, ProbeBudgetAndGridMembership) {
  const auto grid = default_w_grid();
  for (const auto& e : sample_suite()) {
    ArppConfig cfg;
    cfg.m = 5;
    cfg.seed = 3;
    auto r = run_arpp(e.instance, cfg);
    EXPECT_GE(r.probe_count, 3);
    EXPECT_LE(r.probe_count, 8) << e.id;
    EXPECT_NE(std::find(grid.begin(), grid.end(), r.w_star), grid.end());
    EXPECT_EQ(r.probes.size(), static_cast<std::size_t>(r.probe_count));
    EXPECT_TRUE(plan_feasible(e.instance, r.plan));
  }
}

TEST(Arpp, ReturnsBestAcrossAllProbes) {
  for (const auto& e : sample_suite()) {
    ArppConfig cfg;
    cfg.m = 5;
    cfg.seed = 4;
    auto r = run_arpp(e.instance, cfg);
    Count best = std::numeric_limits<Count>::max();
    std::vector<std::size_t> seen;
    for (const auto& p : r.probes) {
      best = std::min(best, p.cost.exact_total);
      seen.push_back(p.index);
    }
    EXPECT_EQ(r.cost.exact_total, best);
    std::sort(seen.begin(), seen.end());
    EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end()) << "grid point probed twice";
  }
}

TEST(Arpp, ProbeMatchesStandaloneRun) {
  const auto& e = sample_suite().front();
  ArppConfig cfg;
  cfg.m = 6;
  cfg.seed = 11;
  auto r = run_arpp(e.instance, cfg);
  for (const auto& p : r.probes) {
    auto alone = run_rpp(e.instance, {cfg.strategy, p.w, cfg.m, derive_seed(cfg.seed, p.index)});
    EXPECT_EQ(alone.cost.exact_total, p.cost.exact_total);
  }
}

TEST(Arpp, ReferenceAtFirstProbeStopsEarly) {
  for (const auto& e : sample_suite()) {
    ArppConfig cfg;
    cfg.m = 4;
    cfg.seed = 8;
    auto free_run = run_arpp(e.instance, cfg);
    cfg.reference_cost = free_run.probes.front().cost.total;
    auto r = run_arpp(e.instance, cfg);
    EXPECT_LE(r.probe_count, 3);
    EXPECT_LE(r.cost.total, *cfg.reference_cost);
  }
}

TEST(Arpp, GapAndCostRankingAgree) {
  for (const auto& e : sample_suite()) {
    ArppConfig cfg;
    cfg.m = 5;
    cfg.seed = 9;
    auto by_cost = run_arpp(e.instance, cfg);
    cfg.reference_cost = 1.0;  // far below any plan: the gap stop never fires
    auto by_gap = run_arpp(e.instance, cfg);
    ASSERT_EQ(by_cost.probes.size(), by_gap.probes.size());
    for (std::size_t j = 0; j < by_cost.probes.size(); ++j)
      EXPECT_EQ(by_cost.probes[j].index, by_gap.probes[j].index);
    EXPECT_EQ(by_cost.plan.loads(), by_gap.plan.loads());
  }
}

TEST(Arpp, Deterministic) {
  const auto& e = sample_suite()[3];
  ArppConfig cfg;
  cfg.m = 5;
  cfg.seed = 21;
  for (Strategy s : {Strategy::PS1, Strategy::PS2, Strategy::PS3}) {
    cfg.strategy = s;
    auto a = run_arpp(e.instance, cfg);
    auto b = run_arpp(e.instance, cfg);
    EXPECT_EQ(a.plan.loads(), b.plan.loads());
    EXPECT_EQ(a.w_star, b.w_star);
    EXPECT_EQ(a.probe_count, b.probe_count);
  }
}

TEST(Arpp, NeverWorseThanHeinB) {
  for (const auto& e : sample_suite()) {
    ArppConfig cfg;
    cfg.m = 3;
    auto r = run_arpp(e.instance, cfg);
    EXPECT_LE(r.cost.exact_total, evaluate_cost(e.instance, run_pbp(e.instance, presets::HeinB)).exact_total);
  }
}

TEST(Arpp, RejectsBadConfig) {
  auto inst = Instance::from_rows({{3, 4}}, {1}, {10, 10}, {10}, {1});
  ArppConfig cfg;
  cfg.grid = {0.1, 0.2};
  EXPECT_THROW(run_arpp(inst, cfg), StructuralError);
  cfg.grid = {0.3, 0.2, 0.1};
  EXPECT_THROW(run_arpp(inst, cfg), StructuralError);
  cfg = {};
  cfg.strategy = Strategy::None;
  EXPECT_THROW(run_arpp(inst, cfg), StructuralError);
  cfg = {};
  cfg.reference_cost = 0;
  EXPECT_THROW(run_arpp(inst, cfg), StructuralError);
}

TEST(ArppProperty, NotBelowOptimumOnTinyInstances) {
  Rng rng(91);
  oracle::TinySpec spec;
  spec.max_slots = 12;
  for (int trial = 0; trial < 40; ++trial) {
    auto inst = oracle::random_tiny(rng, spec);
    ArppConfig cfg;
    cfg.m = 4;
    cfg.seed = static_cast<std::uint64_t>(trial);
    auto r = run_arpp(inst, cfg);
    EXPECT_GE(r.cost.exact_total, exact_optimum(inst).cost.exact_total);
  }
}
