#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "backhaul/approx_planner.hpp"
#include "backhaul/errors.hpp"
#include "backhaul/experiments.hpp"
#include "backhaul/feasibility.hpp"
#include "backhaul/link_models.hpp"
#include "backhaul/topology.hpp"

namespace backhaul {

using Json = nlohmann::json;

namespace detail {

template <typename F>
auto rethrow_as_input(std::string_view what, F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const Json::exception &e) {
        throw InvalidInput(std::string(what) + ": " + e.what());
    }
}

inline std::string read_text(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::string &path, const std::string &text) {
    std::ofstream out(path);
    if (!out)
        throw InvalidInput("cannot write '" + path + "'");
    out << text;
}

} // namespace detail

inline Json read_json_file(const std::string &path) {
    const std::string text = detail::read_text(path);
    return detail::rethrow_as_input("'" + path + "' is not valid JSON", [&] { return Json::parse(text); });
}

// --- topology --------------------------------------------------------------

/// `{"nodes": [[x, y], ...], "predeployed": [[i, j], ...]}`, meters.
inline Json topology_to_json(const Topology &t) {
    Json nodes = Json::array();
    for (const auto &p : t.nodes())
        nodes.push_back({p.x, p.y});
    Json pre = Json::array();
    for (const auto &[i, j] : t.predeployed_pairs())
        pre.push_back({i, j});
    return {{"nodes", nodes}, {"predeployed", pre}};
}

inline Topology topology_from_json(const Json &j) {
    return detail::rethrow_as_input("malformed topology", [&] {
        std::vector<Point> nodes;
        for (const auto &n : j.at("nodes")) {
            if (!n.is_array() || n.size() != 2)
                throw InvalidInput("malformed topology: each node must be [x, y]");
            nodes.push_back({n.at(0).get<double>(), n.at(1).get<double>()});
        }
        std::vector<NodePair> pairs;
        if (j.contains("predeployed"))
            for (const auto &p : j.at("predeployed")) {
                if (!p.is_array() || p.size() != 2)
                    throw InvalidInput("malformed topology: each pre-deployed link must be [i, j]");
                pairs.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
            }
        return build_topology(std::move(nodes), pairs);
    });
}

inline Topology read_topology_file(const std::string &path) { return topology_from_json(read_json_file(path)); }

inline void write_topology_file(const std::string &path, const Topology &t) {
    detail::write_text(path, topology_to_json(t).dump(2) + "\n");
}

// --- plan ------------------------------------------------------------------

/// `{"links": [{"i", "j", "kind"}, ...], "total_cost_usd": ...}`
inline Json plan_to_json(const Topology &t, const CostModel &cm, const Plan &p) {
    Json links = Json::array();
    for (const auto &l : p.links())
        links.push_back({{"i", l.i}, {"j", l.j}, {"kind", std::string(to_string(l.kind))}});
    return {{"links", links}, {"total_cost_usd", plan_cost(t, cm, p)}};
}

inline Plan plan_from_json(const Topology &t, const Json &j) {
    return detail::rethrow_as_input("malformed plan", [&] {
        Plan p(t.size());
        for (const auto &l : j.at("links")) {
            const auto i = l.at("i").get<std::size_t>();
            const auto k = l.at("j").get<std::size_t>();
            if (i >= t.size() || k >= t.size() || i == k)
                throw InvalidInput("malformed plan: link (" + std::to_string(i) + "," + std::to_string(k) +
                                   ") is invalid");
            p.set(i, k, link_kind_from_string(l.at("kind").get<std::string>()));
        }
        return p;
    });
}

// --- models and scenarios --------------------------------------------------

inline ModelParams model_from_json(const Json &j, ModelParams m = {}) {
    return detail::rethrow_as_input("malformed model block", [&] {
        if (j.contains("of_per_meter"))
            m.of_per_meter = j.at("of_per_meter").get<double>();
        if (j.contains("hybrid_cost"))
            m.hybrid_cost = j.at("hybrid_cost").get<double>();
        if (j.contains("target_rate"))
            m.target_rate = j.at("target_rate").get<double>();
        if (j.contains("d_D_km"))
            m.d_D_km = j.at("d_D_km").get<double>();
        if (j.contains("d_R_km"))
            m.d_R_km = j.at("d_R_km").get<double>();
        if (j.contains("alpha"))
            m.alpha = j.at("alpha").get<double>();
        if (j.contains("decay_km"))
            m.decay_km = j.at("decay_km").get<double>();
        if (j.contains("plateau_reliability") && !j.at("plateau_reliability").is_null())
            m.plateau_reliability = j.at("plateau_reliability").get<double>();
        (void)m.cost_model();
        (void)m.rate_model();
        return m;
    });
}

inline ScenarioSpec scenario_from_json(const Json &j, ScenarioSpec s = {}) {
    return detail::rethrow_as_input("malformed scenario block", [&] {
        if (j.contains("seed"))
            s.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("M"))
            s.nodes = j.at("M").get<std::size_t>();
        if (j.contains("area_km"))
            s.area_km = j.at("area_km").get<double>();
        if (j.contains("predeploy_ratio"))
            s.predeploy_ratio = j.at("predeploy_ratio").get<double>();
        s.validate();
        return s;
    });
}

/// Parses "M=7,seed=1,area_km=5,ratio=0.2"; omitted keys keep their defaults.
inline ScenarioSpec parse_scenario(std::string_view text, ScenarioSpec s = {}) {
    auto number = [&](std::string_view key, std::string_view value) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || ptr != value.data() + value.size())
            throw InvalidInput("scenario key '" + std::string(key) + "' needs a number, got '" + std::string(value) +
                               "'");
        return v;
    };
    auto integer = [&](std::string_view key, std::string_view value) {
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || ptr != value.data() + value.size())
            throw InvalidInput("scenario key '" + std::string(key) + "' needs an integer, got '" +
                               std::string(value) + "'");
        return v;
    };
    while (!text.empty()) {
        const auto comma = text.find(',');
        const std::string_view item = text.substr(0, comma);
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        if (item.empty())
            continue;
        const auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw InvalidInput("scenario entry '" + std::string(item) + "' is not key=value");
        const std::string_view key = item.substr(0, eq);
        const std::string_view value = item.substr(eq + 1);
        if (key == "M")
            s.nodes = static_cast<std::size_t>(integer(key, value));
        else if (key == "seed")
            s.seed = integer(key, value);
        else if (key == "area_km")
            s.area_km = number(key, value);
        else if (key == "ratio" || key == "predeploy_ratio")
            s.predeploy_ratio = number(key, value);
        else
            throw InvalidInput("unknown scenario key '" + std::string(key) + "'");
    }
    s.validate();
    return s;
}

/// Reads the sweep block of a configuration together with its scenario and model blocks.
inline SweepConfig sweep_from_json(const Json &root) {
    return detail::rethrow_as_input("malformed sweep configuration", [&] {
        if (!root.contains("sweep"))
            throw InvalidInput("configuration has no sweep block");
        const Json &sw = root.at("sweep");
        SweepConfig cfg;
        if (root.contains("scenario"))
            cfg.base = scenario_from_json(root.at("scenario"));
        if (root.contains("model"))
            cfg.model = model_from_json(root.at("model"));
        if (root.contains("neighbor_policy"))
            cfg.policy = NeighborPolicy::parse(root.at("neighbor_policy").get<std::string>());
        if (root.contains("max_neighbors"))
            cfg.max_neighbors = root.at("max_neighbors").get<std::size_t>();
        if (root.contains("exclude_predeployed"))
            cfg.exclude_predeployed = root.at("exclude_predeployed").get<bool>();
        if (root.contains("budget"))
            cfg.exact_budget = root.at("budget").get<std::uint64_t>();

        cfg.variable = sweep_variable_from_string(sw.at("variable").get<std::string>());
        cfg.grid = sw.at("grid").get<std::vector<double>>();
        if (cfg.grid.empty())
            throw InvalidInput("sweep grid is empty");
        if (sw.contains("trials"))
            cfg.trials = sw.at("trials").get<std::size_t>();
        if (sw.contains("methods")) {
            cfg.methods.clear();
            for (const auto &m : sw.at("methods"))
                cfg.methods.push_back(method_from_string(m.get<std::string>()));
        }
        if (sw.contains("exact_max_nodes"))
            cfg.exact_max_nodes = sw.at("exact_max_nodes").get<std::size_t>();
        if (sw.contains("spanning_bound"))
            cfg.exact_spanning_bound = sw.at("spanning_bound").get<bool>();
        if (sw.contains("threads"))
            cfg.threads = sw.at("threads").get<std::size_t>();
        if (sw.contains("record_timing"))
            cfg.record_timing = sw.at("record_timing").get<bool>();
        return cfg;
    });
}

// --- reports ---------------------------------------------------------------

inline Json report_to_json(const FeasibilityReport &r) {
    Json checks = Json::object();
    for (const auto &c : r.checks)
        checks[c.name] = {{"passed", c.passed}, {"violations", c.violations}};
    return {{"feasible", r.feasible()}, {"fiedler_value", r.fiedler}, {"constraints", checks}};
}

inline Json diagnostics_to_json(const HybridResult &h) {
    const auto &d = h.diagnostics;
    Json violations = Json::array();
    for (const auto &[i, j] : d.assumption_violations)
        violations.push_back({i, j});
    return {{"neighbor_counts", d.neighbor_counts},
            {"cluster_sizes", d.cluster_sizes},
            {"planning_graph_vertices", d.vertex_count},
            {"planning_graph_edges", d.edge_count},
            {"clique_search_nodes", d.clique_search_nodes},
            {"clique_weight", d.clique_weight},
            {"links_within_neighbor_sets", links_within_neighbor_sets(h.plan, h.neighbors)},
            {"cost_assumption_violations", violations}};
}

inline Json stats_to_json(const ExactResult &r) {
    return {{"optimal", r.optimal},
            {"nodes_expanded", r.stats.nodes},
            {"prunes_bound", r.stats.prunes_bound},
            {"prunes_connectivity", r.stats.prunes_connectivity},
            {"prunes_node_constraints", r.stats.prunes_node_constraints}};
}

} // namespace backhaul
