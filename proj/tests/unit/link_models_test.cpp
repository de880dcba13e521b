#include <gtest/gtest.h>

#include <cmath>

#include "backhaul/link_models.hpp"

using namespace backhaul;

namespace {
const CostModel kPrices = CostModel::constant(13.5, 10000);
const RateReliabilityModel kModel{};
} // namespace

TEST(LinkCost, FiberScalesWithLength) {
    EXPECT_DOUBLE_EQ(link_cost(kPrices, LinkKind::OF, 1000), 13500.0);
    EXPECT_DOUBLE_EQ(link_cost(kPrices, LinkKind::OF, 2000), 27000.0);
}

TEST(LinkCost, HybridIsFlat) {
    for (double d : {1.0, 500.0, 7000.0})
        EXPECT_DOUBLE_EQ(link_cost(kPrices, LinkKind::Hybrid, d), 10000.0);
}

TEST(LinkCost, Errors) {
    EXPECT_THROW(link_cost(kPrices, LinkKind::None, 10), InvalidInput);
    EXPECT_THROW(link_cost(kPrices, LinkKind::OF, 0), InvalidInput);
    EXPECT_THROW(link_cost(kPrices, LinkKind::OF, -1), InvalidInput);
    const CostModel bad = CostModel::distance_dependent(13.5, [](double) { return 0.0; });
    EXPECT_THROW(link_cost(bad, LinkKind::Hybrid, 10), InvalidInput);
}

TEST(HybridRate, PlateauThenDecay) {
    EXPECT_DOUBLE_EQ(hybrid_rate(kModel, 2000), 1000.0);
    EXPECT_DOUBLE_EQ(hybrid_rate(kModel, 3000), 1000.0);
    EXPECT_NEAR(hybrid_rate(kModel, 4000), 1000.0 * std::exp(-1.0), 1e-9);
    EXPECT_NEAR(hybrid_rate(kModel, 4000) / 1000.0, 0.3679, 1e-4);
}

TEST(HybridReliability, PlateauThenDecay) {
    EXPECT_DOUBLE_EQ(hybrid_reliability(kModel, 1000), 0.9);
    EXPECT_DOUBLE_EQ(hybrid_reliability(kModel, 2000), 0.9);
    EXPECT_NEAR(hybrid_reliability(kModel, 3000), 0.9 * std::exp(-1.0), 1e-12);
    EXPECT_NEAR(hybrid_reliability(kModel, 3000), 0.33109, 1e-5);
}

TEST(HybridModels, NonIncreasingAndBounded) {
    double last_rate = INFINITY, last_rel = INFINITY;
    for (double d = 10; d < 20000; d += 37.5) {
        const double r = hybrid_rate(kModel, d), q = hybrid_reliability(kModel, d);
        EXPECT_LE(r, last_rate);
        EXPECT_LE(q, last_rel);
        EXPECT_GT(r, 0.0);
        EXPECT_GT(q, 0.0);
        EXPECT_LE(q, 1.0);
        last_rate = r;
        last_rel = q;
    }
}

TEST(HybridModels, ConfigurablePlateauReliability) {
    RateReliabilityModel m;
    m.plateau_reliability = 0.99;
    EXPECT_DOUBLE_EQ(hybrid_reliability(m, 100), 0.99);
    m.plateau_reliability = 1.0;
    EXPECT_THROW(m.validate(), InvalidInput);
}

TEST(HybridModels, ValidatesParameters) {
    RateReliabilityModel m;
    m.alpha = 1.0;
    EXPECT_THROW(m.validate(), InvalidInput);
    m = {};
    m.rate_plateau_m = 0;
    EXPECT_THROW(m.validate(), InvalidInput);
    m = {};
    m.target_rate_mbps = -1;
    EXPECT_THROW(m.validate(), InvalidInput);
    EXPECT_THROW(hybrid_rate(kModel, 0.0), InvalidInput);
}

TEST(PairCost, PredeployedFiberIsFree) {
    const Topology t = build_topology({{0, 0}, {1000, 0}, {3000, 0}}, {{0, 1}});
    EXPECT_DOUBLE_EQ(pair_cost(t, kPrices, 0, 1, LinkKind::OF), 0.0);
    EXPECT_DOUBLE_EQ(pair_cost(t, kPrices, 1, 2, LinkKind::OF), 27000.0);
    EXPECT_DOUBLE_EQ(pair_cost(t, kPrices, 1, 2, LinkKind::None), 0.0);
    Plan p(3);
    p.set(0, 1, LinkKind::OF);
    p.set(1, 2, LinkKind::Hybrid);
    EXPECT_DOUBLE_EQ(plan_cost(t, kPrices, p), 10000.0);
}
