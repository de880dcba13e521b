#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "backhaul/approx_planner.hpp"
#include "backhaul/errors.hpp"
#include "backhaul/exact_solver.hpp"
#include "backhaul/link_models.hpp"
#include "backhaul/of_planner.hpp"
#include "backhaul/topology.hpp"

namespace backhaul {

/// Random instance: nodes uniform on a square, a fixed share of all pairs pre-linked.
struct ScenarioSpec {
    std::uint64_t seed = 1;
    std::size_t nodes = 7;
    double area_km = 5.0;
    double predeploy_ratio = 0.2;

    void validate() const {
        if (nodes < 2)
            throw InvalidInput("a scenario needs at least two nodes");
        if (!(area_km > 0.0))
            throw InvalidInput("scenario area must be positive");
        if (!(predeploy_ratio >= 0.0 && predeploy_ratio < 1.0))
            throw InvalidInput("pre-deploy ratio must lie in [0,1)");
    }
};

namespace detail {

inline double unit_uniform(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, n) by rejection.
inline std::uint64_t bounded(std::mt19937_64 &rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = rng();
    while (x >= limit)
        x = rng();
    return x % n;
}

} // namespace detail

inline Topology generate_scenario(const ScenarioSpec &s) {
    s.validate();
    std::mt19937_64 rng(s.seed);
    const double side = s.area_km * 1000.0;
    std::vector<Point> nodes(s.nodes);
    for (auto &p : nodes) {
        p.x = detail::unit_uniform(rng) * side;
        p.y = detail::unit_uniform(rng) * side;
    }
    std::vector<NodePair> pairs;
    for (NodeIndex i = 0; i < s.nodes; ++i)
        for (NodeIndex j = i + 1; j < s.nodes; ++j)
            pairs.emplace_back(i, j);
    const auto count = static_cast<std::size_t>(std::floor(s.predeploy_ratio * static_cast<double>(pairs.size())));
    for (std::size_t k = 0; k < count; ++k)
        std::swap(pairs[k], pairs[k + detail::bounded(rng, pairs.size() - k)]);
    pairs.resize(count);
    return build_topology(std::move(nodes), pairs);
}

/// Share of fiber among the plan's links, in percent.
inline double percent_of_links(const Topology &t, const Plan &p, bool exclude_predeployed = false) {
    std::size_t fiber = 0, total = 0;
    for (const auto &l : p.links()) {
        if (exclude_predeployed && t.predeployed(l.i, l.j))
            continue;
        ++total;
        fiber += (l.kind == LinkKind::OF);
    }
    if (total == 0)
        throw InvalidInput("plan has no links to classify");
    return 100.0 * static_cast<double>(fiber) / static_cast<double>(total);
}

/// Scalar model parameters in the units used by configuration files.
struct ModelParams {
    double of_per_meter = 13.5;
    double hybrid_cost = 10000.0;
    double target_rate = 1000.0;
    double d_D_km = 3.0;
    double d_R_km = 2.0;
    double alpha = 0.9;
    double decay_km = 1.0;
    std::optional<double> plateau_reliability;

    CostModel cost_model() const { return CostModel::constant(of_per_meter, hybrid_cost); }

    RateReliabilityModel rate_model() const {
        RateReliabilityModel m;
        m.target_rate_mbps = target_rate;
        m.rate_plateau_m = d_D_km * 1000.0;
        m.alpha = alpha;
        m.reliability_plateau_m = d_R_km * 1000.0;
        m.decay_m = decay_km * 1000.0;
        m.plateau_reliability = plateau_reliability;
        m.validate();
        return m;
    }
};

enum class Method { OfOnly, Hybrid, Exact };

inline std::string_view to_string(Method m) {
    switch (m) {
    case Method::OfOnly:
        return "of_only";
    case Method::Hybrid:
        return "hybrid";
    case Method::Exact:
        return "exact";
    }
    return "of_only";
}

inline Method method_from_string(std::string_view s) {
    if (s == "of_only" || s == "of-only")
        return Method::OfOnly;
    if (s == "hybrid")
        return Method::Hybrid;
    if (s == "exact")
        return Method::Exact;
    throw InvalidInput("unknown method '" + std::string(s) + "' (expected of_only, hybrid or exact)");
}

enum class SweepVariable { Nodes, HybridCost, RatePlateau, ReliabilityPlateau, Alpha };

inline std::string_view to_string(SweepVariable v) {
    switch (v) {
    case SweepVariable::Nodes:
        return "M";
    case SweepVariable::HybridCost:
        return "hybrid_cost";
    case SweepVariable::RatePlateau:
        return "d_D";
    case SweepVariable::ReliabilityPlateau:
        return "d_R";
    case SweepVariable::Alpha:
        return "alpha";
    }
    return "M";
}

inline SweepVariable sweep_variable_from_string(std::string_view s) {
    for (auto v : {SweepVariable::Nodes, SweepVariable::HybridCost, SweepVariable::RatePlateau,
                   SweepVariable::ReliabilityPlateau, SweepVariable::Alpha})
        if (s == to_string(v))
            return v;
    throw InvalidInput("unknown sweep variable '" + std::string(s) + "' (expected M, hybrid_cost, d_D, d_R or alpha)");
}

struct SweepConfig {
    SweepVariable variable = SweepVariable::HybridCost;
    /// Values of the swept variable; d_D and d_R in km, prices in dollars.
    std::vector<double> grid;
    ScenarioSpec base;
    ModelParams model;
    std::size_t trials = 100;
    std::vector<Method> methods{Method::OfOnly, Method::Hybrid, Method::Exact};
    NeighborPolicy policy = NeighborPolicy::eq4();
    std::size_t max_neighbors = kDefaultMaxNeighbors;
    std::size_t exact_max_nodes = 7;
    std::uint64_t exact_budget = 0;
    bool exact_spanning_bound = false;
    bool exclude_predeployed = false;
    /// Worker threads; 0 picks the hardware concurrency.
    std::size_t threads = 0;
    /// When false, wall_ms is written as 0 so that output is reproducible byte for byte.
    bool record_timing = true;
};

/// One CSV row: aggregate of one method at one grid value.
struct SweepResult {
    double x = 0.0;
    Method method = Method::OfOnly;
    double mean_cost = 0.0;
    double se_cost = 0.0;
    double mean_pct_of = 0.0;
    std::size_t trials = 0;
    std::size_t infeasible = 0;
    double wall_ms = 0.0;
};

struct TrialRecord {
    std::size_t grid_index = 0;
    std::size_t trial = 0;
    Method method = Method::OfOnly;
    bool ok = false;
    double cost = 0.0;
    double pct_of = 0.0;
    double wall_ms = 0.0;
    std::string error;
};

struct SweepOutput {
    std::vector<SweepResult> rows;
    /// Ordered by grid index, then trial, then method in configuration order.
    std::vector<TrialRecord> records;
};

/// Instance and models of trial k at grid value x. Trial k always uses seed base + k,
/// so every method and every grid value sees the same node layouts.
struct TrialSetup {
    Topology topology;
    CostModel cost;
    RateReliabilityModel rate;
};

inline TrialSetup trial_setup(const SweepConfig &cfg, double x, std::size_t trial) {
    ScenarioSpec spec = cfg.base;
    ModelParams model = cfg.model;
    spec.seed = cfg.base.seed + trial;
    switch (cfg.variable) {
    case SweepVariable::Nodes:
        if (!(x >= 2.0) || x != std::floor(x))
            throw InvalidInput("node counts in the grid must be integers >= 2");
        spec.nodes = static_cast<std::size_t>(x);
        break;
    case SweepVariable::HybridCost:
        model.hybrid_cost = x;
        break;
    case SweepVariable::RatePlateau:
        model.d_D_km = x;
        break;
    case SweepVariable::ReliabilityPlateau:
        model.d_R_km = x;
        break;
    case SweepVariable::Alpha:
        model.alpha = x;
        break;
    }
    return {generate_scenario(spec), model.cost_model(), model.rate_model()};
}

namespace detail {

inline TrialRecord run_method(const SweepConfig &cfg, const TrialSetup &setup, Method method) {
    TrialRecord r;
    r.method = method;
    const auto start = std::chrono::steady_clock::now();
    try {
        Plan plan;
        switch (method) {
        case Method::OfOnly:
            plan = plan_of_only(setup.topology, setup.cost);
            r.ok = true;
            break;
        case Method::Hybrid:
            plan = plan_hybrid(setup.topology, setup.cost, setup.rate, {cfg.policy, cfg.max_neighbors}).plan;
            r.ok = true;
            break;
        case Method::Exact: {
            ExactOptions opt;
            opt.budget = cfg.exact_budget;
            opt.spanning_bound = cfg.exact_spanning_bound;
            auto res = plan_exact(setup.topology, setup.cost, setup.rate, opt);
            plan = std::move(res.plan);
            r.ok = res.optimal;
            if (!res.optimal)
                r.error = "search budget exhausted";
            break;
        }
        }
        r.cost = plan_cost(setup.topology, setup.cost, plan);
        r.pct_of = percent_of_links(setup.topology, plan, cfg.exclude_predeployed);
    } catch (const InvalidInput &e) {
        r.ok = false;
        r.error = e.what();
    } catch (const Infeasible &e) {
        r.ok = false;
        r.error = e.what();
    }
    if (cfg.record_timing)
        r.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace detail

/// Runs every method on `trials` seeded scenarios per grid value and aggregates
/// means over the successful trials. Failed trials are counted, not averaged.
inline SweepOutput run_sweep(const SweepConfig &cfg) {
    if (cfg.grid.empty())
        throw InvalidInput("sweep grid is empty");
    if (cfg.trials == 0)
        throw InvalidInput("sweep needs at least one trial");
    if (cfg.methods.empty())
        throw InvalidInput("sweep needs at least one method");
    const bool wants_exact = std::find(cfg.methods.begin(), cfg.methods.end(), Method::Exact) != cfg.methods.end();
    if (wants_exact) {
        std::size_t largest = cfg.base.nodes;
        if (cfg.variable == SweepVariable::Nodes)
            largest = static_cast<std::size_t>(*std::max_element(cfg.grid.begin(), cfg.grid.end()));
        if (largest > cfg.exact_max_nodes && cfg.exact_budget == 0)
            throw InvalidInput("exact method requested for " + std::to_string(largest) +
                               " nodes, above the cap of " + std::to_string(cfg.exact_max_nodes));
    }
    // Surface configuration errors before spawning workers.
    for (const double x : cfg.grid)
        (void)trial_setup(cfg, x, 0);

    const std::size_t tasks = cfg.grid.size() * cfg.trials;
    const std::size_t per_task = cfg.methods.size();
    std::vector<TrialRecord> records(tasks * per_task);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t task = next++; task < tasks; task = next++) {
            try {
                const std::size_t g = task / cfg.trials;
                const std::size_t k = task % cfg.trials;
                const TrialSetup setup = trial_setup(cfg, cfg.grid[g], k);
                for (std::size_t q = 0; q < per_task; ++q) {
                    TrialRecord r = detail::run_method(cfg, setup, cfg.methods[q]);
                    r.grid_index = g;
                    r.trial = k;
                    records[task * per_task + q] = std::move(r);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    std::size_t threads = cfg.threads != 0 ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = std::min(threads, tasks);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < threads; ++w)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    SweepOutput out;
    for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
        for (std::size_t q = 0; q < per_task; ++q) {
            SweepResult row;
            row.x = cfg.grid[g];
            row.method = cfg.methods[q];
            double sum_cost = 0.0, sum_pct = 0.0;
            for (std::size_t k = 0; k < cfg.trials; ++k) {
                const auto &r = records[(g * cfg.trials + k) * per_task + q];
                row.wall_ms += r.wall_ms;
                if (!r.ok) {
                    ++row.infeasible;
                    continue;
                }
                ++row.trials;
                sum_cost += r.cost;
                sum_pct += r.pct_of;
            }
            if (row.trials == 0) {
                row.mean_cost = row.se_cost = row.mean_pct_of = std::numeric_limits<double>::quiet_NaN();
            } else {
                const auto n = static_cast<double>(row.trials);
                row.mean_cost = sum_cost / n;
                row.mean_pct_of = sum_pct / n;
                double ss = 0.0;
                for (std::size_t k = 0; k < cfg.trials; ++k) {
                    const auto &r = records[(g * cfg.trials + k) * per_task + q];
                    if (r.ok)
                        ss += (r.cost - row.mean_cost) * (r.cost - row.mean_cost);
                }
                row.se_cost = row.trials > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
            }
            out.rows.push_back(row);
        }
    }
    out.records = std::move(records);
    return out;
}

inline constexpr std::string_view kSweepCsvHeader = "x,method,mean_cost_usd,se_cost,mean_pct_of,trials,infeasible,wall_ms";

inline std::string sweep_csv(const std::vector<SweepResult> &rows) {
    std::string out(kSweepCsvHeader);
    out += '\n';
    char buf[256];
    for (const auto &r : rows) {
        std::snprintf(buf, sizeof buf, "%.10g,%s,%.6f,%.6f,%.6f,%zu,%zu,%.3f\n", r.x,
                      std::string(to_string(r.method)).c_str(), r.mean_cost, r.se_cost, r.mean_pct_of, r.trials,
                      r.infeasible, r.wall_ms);
        out += buf;
    }
    return out;
}

} // namespace backhaul
