#include <gtest/gtest.h>

#include <random>

#include "backhaul/io.hpp"
#include "backhaul/topology.hpp"

using namespace backhaul;

TEST(Topology, BuildsSymmetricPredeployedMatrix) {
    const Topology t = build_topology({{0, 0}, {1000, 0}}, {{0, 1}});
    EXPECT_EQ(t.size(), 2u);
    EXPECT_TRUE(t.predeployed(0, 1));
    EXPECT_TRUE(t.predeployed(1, 0));
    EXPECT_FALSE(t.predeployed(0, 0));
}

TEST(Topology, NoPredeployedPairs) {
    const Topology t = build_topology({{0, 0}, {1000, 0}, {0, 1000}}, {});
    EXPECT_EQ(t.size(), 3u);
    for (NodeIndex i = 0; i < 3; ++i)
        for (NodeIndex j = 0; j < 3; ++j)
            EXPECT_FALSE(t.predeployed(i, j));
}

TEST(Topology, RejectsMalformedInput) {
    EXPECT_THROW(build_topology({{0, 0}}, {{0, 0}}), InvalidInput);
    EXPECT_THROW(build_topology({}, {}), InvalidInput);
    EXPECT_THROW(build_topology({{0, 0}, {0, 0}}, {}), InvalidInput);
    EXPECT_THROW(build_topology({{0, 0}, {1, 0}}, {{0, 2}}), InvalidInput);
    EXPECT_THROW(build_topology({{0, std::nan("")}}, {}), InvalidInput);
    EXPECT_THROW(build_topology({{0, 0}, {std::numeric_limits<double>::infinity(), 0}}, {}), InvalidInput);
}

TEST(Topology, Distance) {
    const Topology t = build_topology({{0, 0}, {3000, 4000}, {1000, 0}}, {});
    EXPECT_DOUBLE_EQ(distance(t, 0, 1), 5000.0);
    EXPECT_DOUBLE_EQ(distance(t, 0, 2), 1000.0);
    EXPECT_THROW(distance(t, 1, 1), InvalidInput);
    EXPECT_THROW(distance(t, 0, 3), InvalidInput);
}

TEST(Topology, DistanceIsSymmetric) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1e4, 1e4);
    std::vector<Point> pts(30);
    for (auto &p : pts)
        p = {u(rng), u(rng)};
    const Topology t = build_topology(pts, {});
    for (NodeIndex i = 0; i < t.size(); ++i)
        for (NodeIndex j = 0; j < t.size(); ++j)
            if (i != j) {
                EXPECT_EQ(distance(t, i, j), distance(t, j, i));
            }
}

TEST(Plan, SetIsSymmetricAndDiagonalStaysEmpty) {
    Plan p(3);
    p.set(0, 2, LinkKind::Hybrid);
    EXPECT_EQ(p.kind(2, 0), LinkKind::Hybrid);
    EXPECT_EQ(p.link_count(), 1u);
    EXPECT_THROW(p.set(1, 1, LinkKind::OF), InvalidInput);
    p.set(2, 0, LinkKind::None);
    EXPECT_EQ(p.link_count(), 0u);
}

TEST(Plan, FromMatrixRejectsAsymmetry) {
    using K = LinkKind;
    EXPECT_THROW(Plan::from_matrix({{K::None, K::OF}, {K::None, K::None}}), InvalidInput);
    EXPECT_THROW(Plan::from_matrix({{K::OF, K::None}, {K::None, K::None}}), InvalidInput);
    EXPECT_THROW(Plan::from_matrix({{K::None, K::OF}}), InvalidInput);
    const Plan p = Plan::from_matrix({{K::None, K::Hybrid}, {K::Hybrid, K::None}});
    EXPECT_EQ(p.kind(0, 1), K::Hybrid);
    EXPECT_EQ(p.matrix()[1][0], K::Hybrid);
}

TEST(Plan, ValidateRequiresPredeployedFiber) {
    const Topology t = build_topology({{0, 0}, {1000, 0}, {0, 1000}}, {{0, 1}});
    Plan p(3);
    EXPECT_THROW(validate(t, p), InvalidInput);
    p.set(0, 1, LinkKind::Hybrid);
    EXPECT_THROW(validate(t, p), InvalidInput);
    p.set(0, 1, LinkKind::OF);
    EXPECT_NO_THROW(validate(t, p));
    EXPECT_THROW(validate(t, Plan(2)), InvalidInput);
}

TEST(Plan, LinkKindNames) {
    for (auto k : {LinkKind::None, LinkKind::OF, LinkKind::Hybrid})
        EXPECT_EQ(link_kind_from_string(to_string(k)), k);
    EXPECT_THROW(link_kind_from_string("fso"), InvalidInput);
}

TEST(Io, TopologyAndPlanRoundTrip) {
    const Topology t = build_topology({{0, 0}, {1234.5, 10}, {-3, 4000.25}}, {{1, 2}});
    const Topology back = topology_from_json(Json::parse(topology_to_json(t).dump()));
    EXPECT_EQ(back, t);

    Plan p(3);
    p.set(1, 2, LinkKind::OF);
    p.set(0, 1, LinkKind::Hybrid);
    const CostModel cm = CostModel::constant(13.5, 10000);
    const Json j = plan_to_json(t, cm, p);
    EXPECT_EQ(plan_from_json(t, Json::parse(j.dump())), p);
    EXPECT_DOUBLE_EQ(j.at("total_cost_usd").get<double>(), 10000.0);
}

TEST(Io, MalformedJsonIsInvalidInput) {
    EXPECT_THROW(topology_from_json(Json::parse(R"({"nodes": [[0]]})")), InvalidInput);
    EXPECT_THROW(topology_from_json(Json::parse(R"({"points": []})")), InvalidInput);
    const Topology t = build_topology({{0, 0}, {1, 0}}, {});
    EXPECT_THROW(plan_from_json(t, Json::parse(R"({"links": [{"i": 0, "j": 5, "kind": "of"}]})")), InvalidInput);
    EXPECT_THROW(plan_from_json(t, Json::parse(R"({"links": [{"i": 0, "j": 1, "kind": "x"}]})")), InvalidInput);
}

TEST(Io, ScenarioString) {
    const ScenarioSpec s = parse_scenario("M=9,seed=4,area_km=2.5,ratio=0.1");
    EXPECT_EQ(s.nodes, 9u);
    EXPECT_EQ(s.seed, 4u);
    EXPECT_DOUBLE_EQ(s.area_km, 2.5);
    EXPECT_DOUBLE_EQ(s.predeploy_ratio, 0.1);
    EXPECT_EQ(parse_scenario("M=10").nodes, 10u);
    EXPECT_THROW(parse_scenario("M=ten"), InvalidInput);
    EXPECT_THROW(parse_scenario("K=3"), InvalidInput);
    EXPECT_THROW(parse_scenario("M=1"), InvalidInput);
}
