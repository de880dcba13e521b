#pragma once

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "backhaul/approx_planner.hpp"
#include "backhaul/errors.hpp"
#include "backhaul/exact_solver.hpp"
#include "backhaul/experiments.hpp"
#include "backhaul/feasibility.hpp"
#include "backhaul/io.hpp"
#include "backhaul/of_planner.hpp"

namespace backhaul::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kUsage = 2, kInfeasible = 3, kBudgetExhausted = 4 };

/// Largest instance the exact planner accepts without an explicit node budget.
inline constexpr std::size_t kExactNodeCap = 9;

namespace detail {

struct PlanArgs {
    std::string method;
    std::string topology;
    std::string scenario;
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string policy;
    bool exclude_predeployed = false;
    std::optional<std::uint64_t> budget;
};

struct SweepArgs {
    std::string config;
    std::string out;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    bool no_timing = false;
    std::string policy;
    bool exclude_predeployed = false;
    std::optional<std::uint64_t> budget;
};

struct ScenarioArgs {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::string out;
};

struct CheckArgs {
    std::string topology;
    std::string plan;
    std::string config;
};

inline std::string report_path(const std::string &plan_path) {
    std::filesystem::path p(plan_path);
    if (p.extension() == ".json")
        p.replace_extension();
    return p.string() + ".report.json";
}

inline std::string resolve(const std::string &path, const std::string &config_path) {
    if (path.empty() || config_path.empty() || std::filesystem::path(path).is_absolute())
        return path;
    return (std::filesystem::path(config_path).parent_path() / path).string();
}

inline int run_plan(const PlanArgs &a, std::ostream &out) {
    Json config = Json::object();
    if (!a.config.empty())
        config = read_json_file(a.config);

    std::string method = a.method;
    if (method.empty())
        method = config.value("method", std::string("hybrid"));
    const Method m = method_from_string(method);

    std::string topology_path = a.topology;
    if (topology_path.empty() && a.scenario.empty() && config.contains("topology"))
        topology_path = resolve(config.at("topology").get<std::string>(), a.config);
    const bool has_scenario = !a.scenario.empty() || (a.topology.empty() && config.contains("scenario"));
    if (topology_path.empty() == !has_scenario)
        throw InvalidInput("give exactly one of --topology or --scenario");

    Topology topology;
    if (!topology_path.empty()) {
        topology = read_topology_file(topology_path);
    } else {
        ScenarioSpec spec = config.contains("scenario") ? scenario_from_json(config.at("scenario")) : ScenarioSpec{};
        if (!a.scenario.empty())
            spec = parse_scenario(a.scenario, spec);
        if (a.seed)
            spec.seed = *a.seed;
        topology = generate_scenario(spec);
    }

    const ModelParams params = config.contains("model") ? model_from_json(config.at("model")) : ModelParams{};
    const CostModel cm = params.cost_model();
    const RateReliabilityModel rrm = params.rate_model();
    const bool exclude = a.exclude_predeployed || config.value("exclude_predeployed", false);

    Json diagnostics = Json::object();
    Plan plan;
    bool budget_exhausted = false;
    switch (m) {
    case Method::OfOnly: {
        plan = plan_of_only(topology, cm);
        diagnostics["reduced_clusters"] = reduce_clusters(topology, plan, cm).size();
        break;
    }
    case Method::Hybrid: {
        HybridOptions opt;
        const std::string policy = !a.policy.empty() ? a.policy : config.value("neighbor_policy", std::string("eq4"));
        opt.policy = NeighborPolicy::parse(policy);
        opt.max_neighbors = config.value("max_neighbors", kDefaultMaxNeighbors);
        const HybridResult h = plan_hybrid(topology, cm, rrm, opt);
        plan = h.plan;
        diagnostics = diagnostics_to_json(h);
        diagnostics["neighbor_policy"] = opt.policy.to_string();
        break;
    }
    case Method::Exact: {
        ExactOptions opt;
        if (a.budget)
            opt.budget = *a.budget;
        else if (config.contains("budget"))
            opt.budget = config.at("budget").get<std::uint64_t>();
        if (opt.budget == 0 && topology.size() > kExactNodeCap)
            throw InvalidInput("exact planning of " + std::to_string(topology.size()) + " nodes exceeds the cap of " +
                               std::to_string(kExactNodeCap) + " nodes; pass --budget to search anyway");
        const ExactResult r = plan_exact(topology, cm, rrm, opt);
        plan = r.plan;
        diagnostics = stats_to_json(r);
        budget_exhausted = !r.optimal;
        break;
    }
    }

    const FeasibilityReport report = check_feasible(topology, plan, cm, rrm);
    const double cost = plan_cost(topology, cm, plan);
    const double pct = plan.link_count() > 0 ? percent_of_links(topology, plan, exclude) : 0.0;

    Json plan_json = plan_to_json(topology, cm, plan);
    plan_json["method"] = std::string(to_string(m));
    plan_json["pct_of"] = pct;
    const Json report_json = {{"method", std::string(to_string(m))},
                              {"total_cost_usd", cost},
                              {"pct_of", pct},
                              {"feasibility", report_to_json(report)},
                              {"diagnostics", diagnostics}};

    if (!a.out.empty()) {
        ::backhaul::detail::write_text(a.out, plan_json.dump(2) + "\n");
        ::backhaul::detail::write_text(report_path(a.out), report_json.dump(2) + "\n");
    } else {
        out << plan_json.dump(2) << "\n";
    }
    char line[160];
    std::snprintf(line, sizeof line, "method=%s nodes=%zu links=%zu cost_usd=%.2f pct_of=%.2f feasible=%s\n",
                  std::string(to_string(m)).c_str(), topology.size(), plan.link_count(), cost, pct,
                  report.feasible() ? "yes" : "no");
    out << line;
    if (budget_exhausted)
        return kBudgetExhausted;
    return report.feasible() ? kOk : kInfeasible;
}

inline void print_summary(const std::vector<SweepResult> &rows, SweepVariable variable, std::ostream &out) {
    char line[200];
    std::snprintf(line, sizeof line, "%12s  %-8s %14s %12s %8s %7s %10s\n", std::string(to_string(variable)).c_str(),
                  "method", "mean_cost", "se", "%OF", "trials", "infeasible");
    out << line;
    for (const auto &r : rows) {
        std::snprintf(line, sizeof line, "%12.6g  %-8s %14.2f %12.2f %8.2f %7zu %10zu\n", r.x,
                      std::string(to_string(r.method)).c_str(), r.mean_cost, r.se_cost, r.mean_pct_of, r.trials,
                      r.infeasible);
        out << line;
    }
}

inline int run_sweep_command(const SweepArgs &a, std::ostream &out) {
    SweepConfig cfg = sweep_from_json(read_json_file(a.config));
    if (a.trials)
        cfg.trials = *a.trials;
    if (a.seed)
        cfg.base.seed = *a.seed;
    if (a.threads)
        cfg.threads = *a.threads;
    if (a.no_timing)
        cfg.record_timing = false;
    if (!a.policy.empty())
        cfg.policy = NeighborPolicy::parse(a.policy);
    if (a.exclude_predeployed)
        cfg.exclude_predeployed = true;
    if (a.budget)
        cfg.exact_budget = *a.budget;

    const SweepOutput result = run_sweep(cfg);
    const std::string csv = sweep_csv(result.rows);
    if (a.out.empty()) {
        out << csv;
    } else {
        ::backhaul::detail::write_text(a.out, csv);
        print_summary(result.rows, cfg.variable, out);
    }
    return kOk;
}

inline int run_scenario(const ScenarioArgs &a, std::ostream &out) {
    ScenarioSpec spec = parse_scenario(a.scenario);
    if (a.seed)
        spec.seed = *a.seed;
    const Topology t = generate_scenario(spec);
    if (a.out.empty())
        out << topology_to_json(t).dump(2) << "\n";
    else
        write_topology_file(a.out, t);
    return kOk;
}

inline int run_check(const CheckArgs &a, std::ostream &out) {
    const Topology t = read_topology_file(a.topology);
    const Plan p = plan_from_json(t, read_json_file(a.plan));
    validate(t, p);
    ModelParams params;
    if (!a.config.empty()) {
        const Json config = read_json_file(a.config);
        if (config.contains("model"))
            params = model_from_json(config.at("model"));
    }
    const CostModel cm = params.cost_model();
    const FeasibilityReport report = check_feasible(t, p, cm, params.rate_model());
    Json j = report_to_json(report);
    j["total_cost_usd"] = plan_cost(t, cm, p);
    out << j.dump(2) << "\n";
    return report.feasible() ? kOk : kInfeasible;
}

} // namespace detail

/// Entry point of the `backhaul` tool. Returns the process exit code.
inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    CLI::App app{"Backhaul topology planner with fiber and hybrid RF/FSO links", "backhaul"};
    app.require_subcommand(1);

    detail::PlanArgs plan_args;
    auto *plan = app.add_subcommand("plan", "Plan one topology");
    plan->add_option("--method", plan_args.method, "of-only, hybrid or exact (default hybrid)");
    plan->add_option("--topology", plan_args.topology, "Topology JSON file");
    plan->add_option("--scenario", plan_args.scenario, "Random scenario, e.g. M=7,seed=1,area_km=5,ratio=0.2");
    plan->add_option("--config", plan_args.config, "Configuration JSON file");
    plan->add_option("--out", plan_args.out, "Plan JSON output; the report goes next to it");
    plan->add_option("--seed", plan_args.seed, "Scenario seed");
    plan->add_option("--neighbor-policy", plan_args.policy, "eq4, all or knn:<k>");
    plan->add_flag("--exclude-predeployed", plan_args.exclude_predeployed, "Leave pre-deployed links out of %OF");
    plan->add_option("--budget", plan_args.budget, "Search-node budget of the exact planner");

    detail::SweepArgs sweep_args;
    auto *sweep = app.add_subcommand("sweep", "Run a Monte-Carlo parameter sweep");
    sweep->add_option("--config", sweep_args.config, "Sweep configuration JSON file")->required();
    sweep->add_option("--out", sweep_args.out, "CSV output (stdout if omitted)");
    sweep->add_option("--trials", sweep_args.trials, "Trials per grid value");
    sweep->add_option("--seed", sweep_args.seed, "Base seed; trial k uses seed + k");
    sweep->add_option("--threads", sweep_args.threads, "Worker threads (0 = all cores)");
    sweep->add_flag("--no-timing", sweep_args.no_timing, "Write wall_ms as 0 for reproducible output");
    sweep->add_option("--neighbor-policy", sweep_args.policy, "eq4, all or knn:<k>");
    sweep->add_flag("--exclude-predeployed", sweep_args.exclude_predeployed, "Leave pre-deployed links out of %OF");
    sweep->add_option("--budget", sweep_args.budget, "Search-node budget of the exact planner");

    detail::ScenarioArgs scenario_args;
    auto *scenario = app.add_subcommand("scenario", "Write a random topology");
    scenario->add_option("--scenario", scenario_args.scenario, "e.g. M=7,seed=1")->required();
    scenario->add_option("--seed", scenario_args.seed, "Scenario seed");
    scenario->add_option("--out", scenario_args.out, "Topology JSON output (stdout if omitted)");

    detail::CheckArgs check_args;
    auto *check = app.add_subcommand("check", "Check a plan against every constraint");
    check->add_option("--topology", check_args.topology, "Topology JSON file")->required();
    check->add_option("--plan", check_args.plan, "Plan JSON file")->required();
    check->add_option("--config", check_args.config, "Configuration JSON file with a model block");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*plan)
            return detail::run_plan(plan_args, out);
        if (*sweep)
            return detail::run_sweep_command(sweep_args, out);
        if (*scenario)
            return detail::run_scenario(scenario_args, out);
        if (*check)
            return detail::run_check(check_args, out);
    } catch (const InvalidInput &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Infeasible &e) {
        err << "infeasible: " << e.what() << "\n";
        return kInfeasible;
    }
    return kUsage;
}

} // namespace backhaul::cli
