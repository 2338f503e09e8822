#include <gtest/gtest.h>

#include "clsp/io.hpp"
#include "clsp/model.hpp"
#include "oracles.hpp"

using namespace clsp;

namespace {

Instance single_item(std::vector<Count> d, std::vector<Count> C, Count S = 10, Count h = 1, Count K = 1) {
  return Instance::from_rows({d}, {K}, std::move(C), {S}, {h});
}

bool has_kind(const std::vector<Violation>& v, Violation::Kind k) {
  return std::ranges::any_of(v, [&](const Violation& x) { return x.kind == k; });
}

}  // namespace

TEST(EvaluateCost, LotForLotPaysOnlySetups) {
  auto inst = single_item({3, 4}, {10, 10});
  auto c = evaluate_cost(inst, Plan::lot_for_lot(inst));
  EXPECT_EQ(c.total, 20);
  EXPECT_EQ(c.setup_total, 20);
  EXPECT_EQ(c.holding_total, 0);
}

TEST(EvaluateCost, MergedLotCarriesOnePeriod) {
  auto inst = single_item({3, 4}, {10, 10});
  auto c = evaluate_cost(inst, Plan::from_lots(inst, {{7, 0}}));
  EXPECT_EQ(c.total, 14);
  EXPECT_EQ(c.setup_total, 10);
  EXPECT_EQ(c.holding_total, 4);
}

TEST(EvaluateCost, ZeroDemandZeroPlan) {
  auto inst = single_item({0, 0, 0}, {5, 5, 5});
  EXPECT_EQ(evaluate_cost(inst, Plan(inst)).total, 0);
}

TEST(EvaluateCost, DimensionMismatchIsStructural) {
  auto inst = single_item({3, 4}, {10, 10});
  auto other = single_item({3, 4, 5}, {10, 10, 10});
  EXPECT_THROW(evaluate_cost(inst, Plan(other)), StructuralError);
  EXPECT_THROW(Plan::from_lots(inst, {{1, 2, 3}}), StructuralError);
}

TEST(EvaluateCost, FractionalLotsAreExactUnderScale) {
  // K = 3: a load of 1 capacity unit is a third of a product unit.
  auto inst = Instance::from_rows({{1, 1}}, {3}, {10, 10}, {5}, {2});
  Plan p(inst);
  p.set_load(0, 0, 4);  // 4/3 units
  p.set_load(0, 1, 2);  // 2/3 units
  auto c = evaluate_cost(inst, p);
  EXPECT_EQ(c.scale, 3);
  // inventory after period 1 = 1/3, holding = 2/3
  EXPECT_EQ(c.exact_total, 10 * 3 + 2);
  EXPECT_NEAR(c.total, 10 + 2.0 / 3.0, 1e-12);
}

TEST(CheckPlan, FeasibleMergeHasNoViolations) {
  auto inst = single_item({3, 4}, {10, 10});
  EXPECT_TRUE(check_plan(inst, Plan::from_lots(inst, {{7, 0}})).empty());
}

TEST(CheckPlan, ShortageReported) {
  auto inst = single_item({3, 4}, {10, 10});
  auto v = check_plan(inst, Plan::from_lots(inst, {{2, 5}}));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::Shortage);
  EXPECT_EQ(v[0].period, 0);
  EXPECT_DOUBLE_EQ(v[0].amount, 1.0);
}

TEST(CheckPlan, CapacityExcessReported) {
  auto inst = Instance::from_rows({{2, 0}, {2, 0}}, {1, 2}, {5, 5}, {1, 1}, {1, 1});
  auto v = check_plan(inst, Plan::from_lots(inst, {{2, 0}, {2, 0}}));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::CapacityExcess);
  EXPECT_EQ(v[0].period, 0);
  EXPECT_DOUBLE_EQ(v[0].amount, 1.0);
}

TEST(CheckPlan, NegativeLotReported) {
  auto inst = single_item({0, 0}, {10, 10});
  auto v = check_plan(inst, Plan::from_lots(inst, {{-1, 1}}));
  EXPECT_TRUE(has_kind(v, Violation::Kind::NegativeLot));
}

TEST(InstanceFeasible, CumulativeCapacity) {
  EXPECT_TRUE(instance_feasible(single_item({3, 4}, {5, 5})));
  EXPECT_FALSE(instance_feasible(single_item({3, 4}, {2, 10})));
  EXPECT_TRUE(instance_feasible(single_item({0, 0}, {0, 0})));
}

TEST(InstanceFeasible, AgreesWithSetupPatternEnumeration) {
  // Brute force: some setup pattern admits a feasible allocation.
  auto inst = single_item({3, 4}, {5, 5});
  bool any = false;
  for (int mask = 0; mask < 4; ++mask) {
    SetupPattern p(1, 2);
    p.set(0, 0, mask & 1);
    p.set(0, 1, mask & 2);
    any = any || oracle::p2_by_allocation(inst, p).has_value();
  }
  EXPECT_TRUE(any);
}

TEST(InstanceFeasible, MatchesLpFeasibilityOnRandomTiny) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    oracle::TinySpec spec;
    spec.max_slots = 12;
    auto base = oracle::random_tiny(rng, spec);
    // Tighten capacities at random so both outcomes occur.
    std::vector<Count> C = base.capacity();
    for (auto& c : C) c = static_cast<Count>(rng.next() % static_cast<std::uint64_t>(c + 1));
    Instance inst(base.demand(), base.usage(), C, base.setup(), base.holding());
    const bool lp = oracle::p2_by_simplex(inst, SetupPattern::all(inst)).has_value();
    EXPECT_EQ(instance_feasible(inst), lp) << to_text(inst);
  }
}

TEST(Properties, LotForLotCostIsSumOfSetups) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = oracle::random_tiny(rng);
    Count expect = 0;
    for (std::size_t i = 0; i < inst.items(); ++i)
      for (std::size_t t = 0; t < inst.periods(); ++t)
        if (inst.demand(i, t) > 0) expect += inst.setup(i);
    auto c = evaluate_cost(inst, Plan::lot_for_lot(inst));
    EXPECT_EQ(c.exact_total, expect * c.scale);
  }
}

TEST(Properties, DemandAsPlanFlagsCapacityIffPeriodOverloaded) {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    auto base = oracle::random_tiny(rng);
    std::vector<Count> C = base.capacity();
    for (auto& c : C) c = static_cast<Count>(rng.next() % static_cast<std::uint64_t>(c + 1));
    Instance inst(base.demand(), base.usage(), C, base.setup(), base.holding());
    bool overloaded = false;
    for (std::size_t t = 0; t < inst.periods(); ++t) {
      Count need = 0;
      for (std::size_t i = 0; i < inst.items(); ++i) need += inst.demand_load(i, t);
      overloaded = overloaded || need > inst.capacity(t);
    }
    auto v = check_plan(inst, Plan::lot_for_lot(inst));
    EXPECT_EQ(has_kind(v, Violation::Kind::CapacityExcess), overloaded);
    EXPECT_FALSE(has_kind(v, Violation::Kind::Shortage));
  }
}

TEST(InstanceValidation, RejectsBadData) {
  EXPECT_THROW(Instance::from_rows({{1}}, {0}, {1}, {1}, {1}), StructuralError);
  EXPECT_THROW(Instance::from_rows({{-1}}, {1}, {1}, {1}, {1}), StructuralError);
  EXPECT_THROW(Instance::from_rows({{1, 2}}, {1}, {1}, {1}, {1}), StructuralError);
  EXPECT_THROW(Instance::from_rows({{1}}, {1, 1}, {1}, {1}, {1}), StructuralError);
}

TEST(InstanceText, CanonicalRoundTripIsBitExact) {
  const std::string text =
      "clsp v1\n"
      "items 2\n"
      "periods 3\n"
      "K 1 2\n"
      "S 10 25\n"
      "h 1 3\n"
      "C 40 40 41\n"
      "3 4 5\n"
      "0 7 1\n";
  auto inst = instance_from_text(text);
  EXPECT_EQ(inst.items(), 2u);
  EXPECT_EQ(inst.demand(1, 1), 7);
  EXPECT_EQ(inst.capacity(2), 41);
  EXPECT_EQ(to_text(inst), text);
}

TEST(InstanceText, CommentsAndFreeWhitespace) {
  const std::string text =
      "# generated\nclsp v1 items 1 periods 2\n"
      "K 1   # usage\nS 10\nh 1\nC 5 5\n3\t4\n";
  auto inst = instance_from_text(text);
  EXPECT_EQ(inst.demand(0, 1), 4);
  EXPECT_EQ(instance_from_text(to_text(inst)), inst);
}

TEST(InstanceText, RandomInstancesRoundTrip) {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = oracle::random_tiny(rng);
    EXPECT_EQ(instance_from_text(to_text(inst)), inst);
  }
}

TEST(InstanceText, MalformedInputRejected) {
  EXPECT_THROW(instance_from_text("clsp v2\n"), ParseError);
  EXPECT_THROW(instance_from_text("clsp v1 items 1 periods 2 K 1 S 1 h 1 C 5 5 3\n"), ParseError);
  EXPECT_THROW(instance_from_text("clsp v1 items 1 periods 1 K x S 1 h 1 C 5 3\n"), ParseError);
  EXPECT_THROW(instance_from_text("clsp v1 items 1 periods 1 K 1 S 1 h 1 C 5 3 9\n"), ParseError);
}

TEST(ReferenceFile, ParsesIdCostLines) {
  std::istringstream in("# refs\ninst-a 120\n\ninst-b 99 # note\n");
  auto refs = read_references(in);
  ASSERT_EQ(refs.size(), 2u);
  EXPECT_EQ(refs.at("inst-a"), 120);
  EXPECT_EQ(refs.at("inst-b"), 99);
  std::istringstream bad("inst-a\n");
  EXPECT_THROW(read_references(bad), ParseError);
}
