#include <gtest/gtest.h>

#include "clsp/pbp.hpp"
#include "clsp/tabu.hpp"
#include "oracles.hpp"

using namespace clsp;

namespace {
// Measured once against the enumeration oracle (seed 83, 100 instances), then pinned.
constexpr int kTabuOptimumBaseline = 93;
}  // namespace

TEST(TabuTenure, ThreeFifthsOfHorizon) {
  EXPECT_EQ(tabu_tenure(12), 7);
  EXPECT_EQ(tabu_tenure(24), 14);
  EXPECT_EQ(tabu_tenure(10), 6);
  EXPECT_EQ(tabu_tenure(1), 1);
}

TEST(Tabu, ClosesTheSecondSetup) {
  auto inst = Instance::from_rows({{3, 4}}, {1}, {10, 10}, {10}, {1});
  auto r = run_tabu(inst, Plan::lot_for_lot(inst));
  EXPECT_DOUBLE_EQ(r.cost.total, 14);
  EXPECT_EQ(r.plan.load(0, 0), 7);
  EXPECT_GE(r.iterations, 1);
}

TEST(Tabu, StopsAtReference) {
  auto inst = Instance::from_rows({{3, 4}}, {1}, {10, 10}, {10}, {1});
  TabuConfig cfg;
  cfg.reference_cost = 20;
  auto r = run_tabu(inst, Plan::lot_for_lot(inst), cfg);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.lp_solves, 0u);
  EXPECT_DOUBLE_EQ(r.cost.total, 20);
}

TEST(Tabu, IterationCap) {
  Rng rng(81);
  oracle::TinySpec spec;
  spec.max_slots = 15;
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = oracle::random_tiny(rng, spec);
    TabuConfig cfg;
    cfg.iteration_cap = 1;
    cfg.non_improve_limit = 100;
    EXPECT_LE(run_tabu(inst, run_pbp(inst, presets::HeinB), cfg).iterations, 1);
  }
}

TEST(Tabu, RejectsBadInput) {
  auto inst = Instance::from_rows({{3, 4}}, {1}, {10, 10}, {10}, {1});
  EXPECT_THROW(run_tabu(inst, Plan::from_lots(inst, {{0, 7}})), InfeasibleInput);
  TabuConfig cfg;
  cfg.theta = 0;
  EXPECT_THROW(run_tabu(inst, run_pbp(inst, presets::HeinB), cfg), StructuralError);
}

TEST(Tabu, SinglePeriodHasNoMoves) {
  auto inst = Instance::from_rows({{3}, {4}}, {1, 1}, {10}, {10, 10}, {1, 1});
  auto r = run_tabu(inst, run_pbp(inst, presets::HeinB));
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.plan.loads(), inst.demand());
}

TEST(TabuProperty, NeverWorseNeverBelowOptimum) {
  Rng rng(82);
  oracle::TinySpec spec;
  spec.max_slots = 12;
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = oracle::random_tiny(rng, spec);
    const auto opt = exact_optimum(inst);
    ASSERT_TRUE(opt.optimal());
    for (bool restricted : {false, true}) {
      const Plan start = run_pbp(inst, presets::HeinB);
      TabuConfig cfg;
      cfg.restricted = restricted;
      auto r = run_tabu(inst, start, cfg);
      ASSERT_TRUE(plan_feasible(inst, r.plan));
      EXPECT_LE(r.cost.exact_total, evaluate_cost(inst, start).exact_total);
      EXPECT_GE(r.cost.exact_total, opt.cost.exact_total);
      for (std::size_t i = 0; i < inst.items(); ++i) {
        if (inst.demand(i, 0) > 0) {
          EXPECT_TRUE(r.plan.produces(i, 0));
        }
      }
    }
  }
}

TEST(TabuProperty, ReachesOptimumOnSmallInstances) {
  // Unrestricted, F = 50, non-improve limit 2, from the HeinB plan.
  Rng rng(83);
  oracle::TinySpec spec;
  spec.max_slots = 12;
  int hits = 0;
  const int n = 100;
  for (int trial = 0; trial < n; ++trial) {
    auto inst = oracle::random_tiny(rng, spec);
    TabuConfig cfg;
    cfg.iteration_cap = 50;
    auto r = run_tabu(inst, run_pbp(inst, presets::HeinB), cfg);
    hits += r.cost.exact_total == exact_optimum(inst).cost.exact_total;
  }
  EXPECT_GE(hits, kTabuOptimumBaseline) << hits << " of " << n;
}

TEST(TabuProperty, LongerSearchNeverHurts) {
  Rng rng(84);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = oracle::random_tiny(rng);
    const Plan start = run_pbp(inst, presets::HeinB);
    Count prev = std::numeric_limits<Count>::max();
    for (int cap : {1, 2, 4, 8}) {
      TabuConfig cfg;
      cfg.iteration_cap = cap;
      cfg.non_improve_limit = 100;
      const Count c = run_tabu(inst, start, cfg).cost.exact_total;
      EXPECT_LE(c, prev) << "F=" << cap;
      prev = c;
    }
  }
}
