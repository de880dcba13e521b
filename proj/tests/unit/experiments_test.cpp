#include <gtest/gtest.h>

#include "backhaul/experiments.hpp"

using namespace backhaul;

namespace {

SweepConfig small_sweep(SweepVariable v, std::vector<double> grid) {
    SweepConfig cfg;
    cfg.variable = v;
    cfg.grid = std::move(grid);
    cfg.trials = 8;
    cfg.base.nodes = 5;
    cfg.record_timing = false;
    return cfg;
}

} // namespace

TEST(Scenario, SameSeedSameTopology) {
    ScenarioSpec s;
    s.seed = 42;
    EXPECT_EQ(generate_scenario(s), generate_scenario(s));
    ScenarioSpec other = s;
    other.seed = 43;
    EXPECT_FALSE(generate_scenario(s) == generate_scenario(other));
}

TEST(Scenario, PredeployCount) {
    ScenarioSpec s;
    s.nodes = 5;
    for (std::uint64_t seed = 1; seed < 20; ++seed) {
        s.seed = seed;
        EXPECT_EQ(generate_scenario(s).predeployed_count(), 2u);
    }
    s.nodes = 7;
    EXPECT_EQ(generate_scenario(s).predeployed_count(), 4u);
    s.predeploy_ratio = 0.0;
    EXPECT_EQ(generate_scenario(s).predeployed_count(), 0u);
}

TEST(Scenario, NodesInsideTheSquare) {
    ScenarioSpec s;
    s.area_km = 2.0;
    s.nodes = 50;
    const Topology t = generate_scenario(s);
    for (const auto &p : t.nodes()) {
        EXPECT_GE(p.x, 0.0);
        EXPECT_LT(p.x, 2000.0);
        EXPECT_GE(p.y, 0.0);
        EXPECT_LT(p.y, 2000.0);
    }
}

TEST(Scenario, RejectsBadSpecs) {
    ScenarioSpec s;
    s.predeploy_ratio = 1.0;
    EXPECT_THROW(generate_scenario(s), InvalidInput);
    s = {};
    s.area_km = 0;
    EXPECT_THROW(generate_scenario(s), InvalidInput);
}

TEST(PercentOf, SimpleCounts) {
    const Topology t = build_topology({{0, 0}, {1000, 0}, {0, 1000}, {1000, 1000}, {500, 2000}}, {{0, 1}});
    Plan p(5);
    p.set(0, 1, LinkKind::OF);
    p.set(1, 2, LinkKind::OF);
    p.set(2, 3, LinkKind::Hybrid);
    p.set(3, 4, LinkKind::Hybrid);
    EXPECT_DOUBLE_EQ(percent_of_links(t, p), 50.0);
    EXPECT_NEAR(percent_of_links(t, p, true), 100.0 / 3.0, 1e-12);

    Plan fiber(5), hybrid(5);
    fiber.set(0, 1, LinkKind::OF);
    fiber.set(3, 4, LinkKind::OF);
    hybrid.set(2, 3, LinkKind::Hybrid);
    EXPECT_DOUBLE_EQ(percent_of_links(t, fiber), 100.0);
    EXPECT_DOUBLE_EQ(percent_of_links(t, hybrid), 0.0);
    EXPECT_THROW(percent_of_links(t, Plan(5)), InvalidInput);
}

TEST(Sweep, CommonRandomNumbersOrderMethodsPerTrial) {
    SweepConfig cfg = small_sweep(SweepVariable::HybridCost, {10000, 20000});
    const SweepOutput out = run_sweep(cfg);
    ASSERT_EQ(out.rows.size(), 6u);
    for (std::size_t r = 0; r < out.records.size(); r += 3) {
        const auto &of = out.records[r], &hy = out.records[r + 1], &ex = out.records[r + 2];
        ASSERT_TRUE(of.ok && hy.ok && ex.ok);
        EXPECT_EQ(of.trial, hy.trial);
        EXPECT_LE(ex.cost, hy.cost + 1e-9);
        EXPECT_LE(hy.cost, of.cost + 1e-9);
    }
}

TEST(Sweep, FiberOnlyIgnoresHybridParameters) {
    for (auto v : {SweepVariable::HybridCost, SweepVariable::Alpha}) {
        SweepConfig cfg = small_sweep(v, v == SweepVariable::Alpha ? std::vector<double>{0.5, 0.9}
                                                                   : std::vector<double>{10000, 40000});
        cfg.methods = {Method::OfOnly};
        const SweepOutput out = run_sweep(cfg);
        EXPECT_EQ(out.rows[0].mean_cost, out.rows[1].mean_cost);
    }
}

TEST(Sweep, DeterministicCsvAcrossThreadCounts) {
    SweepConfig cfg = small_sweep(SweepVariable::ReliabilityPlateau, {1, 3});
    cfg.threads = 1;
    const std::string a = sweep_csv(run_sweep(cfg).rows);
    cfg.threads = 3;
    const std::string b = sweep_csv(run_sweep(cfg).rows);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.substr(0, kSweepCsvHeader.size()), kSweepCsvHeader);
}

TEST(Sweep, NodeGridUsesTheGridValue) {
    SweepConfig cfg = small_sweep(SweepVariable::Nodes, {3, 5});
    cfg.methods = {Method::OfOnly};
    const auto setup = trial_setup(cfg, 5, 2);
    EXPECT_EQ(setup.topology.size(), 5u);
    EXPECT_EQ(run_sweep(cfg).rows.size(), 2u);
}

TEST(Sweep, ConfigurationErrors) {
    SweepConfig cfg = small_sweep(SweepVariable::Nodes, {});
    EXPECT_THROW(run_sweep(cfg), InvalidInput);
    cfg.grid = {8};
    EXPECT_THROW(run_sweep(cfg), InvalidInput);
    cfg.grid = {2.5};
    cfg.methods = {Method::OfOnly};
    EXPECT_THROW(run_sweep(cfg), InvalidInput);
    cfg = small_sweep(SweepVariable::Alpha, {1.5});
    EXPECT_THROW(run_sweep(cfg), InvalidInput);
}

TEST(Sweep, BudgetExhaustionIsCountedNotAveraged) {
    SweepConfig cfg = small_sweep(SweepVariable::HybridCost, {10000});
    cfg.methods = {Method::Exact};
    cfg.exact_budget = 3;
    const SweepOutput out = run_sweep(cfg);
    EXPECT_EQ(out.rows[0].infeasible, cfg.trials);
    EXPECT_EQ(out.rows[0].trials, 0u);
    EXPECT_TRUE(std::isnan(out.rows[0].mean_cost));
}
