#pragma once

// Reference implementations used only by tests. They work from coordinates and
// model constants directly and avoid the library's planners, union-find and
// eigen-solver code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include "backhaul/approx_planner.hpp"
#include "backhaul/topology.hpp"

namespace oracle {

using backhaul::LinkKind;
using backhaul::NodeIndex;
using backhaul::NodePair;
using backhaul::Point;

inline double dist(const Point &a, const Point &b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Params {
    double of_per_meter = 13.5;
    double hybrid_price = 10000.0;
    double target_rate = 1000.0;
    double rate_plateau = 3000.0;
    double alpha = 0.9;
    double rel_plateau = 2000.0;
    double decay = 1000.0;
};

inline double rate(const Params &p, double d) {
    return d < p.rate_plateau ? p.target_rate : p.target_rate * std::exp((p.rate_plateau - d) / p.decay);
}

inline double reliability(const Params &p, double d) {
    return d < p.rel_plateau ? p.alpha : p.alpha * std::exp((p.rel_plateau - d) / p.decay);
}

/// Minimum spanning forest cost after contracting the forced pairs, by Kruskal
/// with label relabeling.
inline double forced_mst_cost(const std::vector<Point> &nodes, const std::vector<NodePair> &forced,
                              double of_per_meter) {
    const std::size_t m = nodes.size();
    std::vector<std::size_t> label(m);
    std::iota(label.begin(), label.end(), std::size_t{0});
    auto merge = [&](std::size_t a, std::size_t b) {
        const std::size_t from = label[b], to = label[a];
        if (from == to)
            return false;
        for (auto &l : label)
            if (l == from)
                l = to;
        return true;
    };
    for (const auto &[i, j] : forced)
        merge(i, j);
    std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            edges.emplace_back(of_per_meter * dist(nodes[i], nodes[j]), i, j);
    std::sort(edges.begin(), edges.end());
    double total = 0.0;
    for (const auto &[c, i, j] : edges)
        if (merge(i, j))
            total += c;
    return total;
}

inline bool connected(std::size_t m, const std::vector<std::vector<LinkKind>> &x) {
    if (m <= 1)
        return true;
    std::vector<char> seen(m, 0);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
        const auto v = q.front();
        q.pop();
        for (std::size_t w = 0; w < m; ++w)
            if (!seen[w] && x[v][w] != LinkKind::None) {
                seen[w] = 1;
                ++count;
                q.push(w);
            }
    }
    return count == m;
}

/// Product-form constraint check of a full link matrix.
inline bool feasible(const std::vector<Point> &nodes, const std::vector<NodePair> &pre, const Params &p,
                     const std::vector<std::vector<LinkKind>> &x) {
    const std::size_t m = nodes.size();
    for (const auto &[i, j] : pre)
        if (x[i][j] != LinkKind::OF)
            return false;
    for (std::size_t i = 0; i < m; ++i) {
        double r = 0.0, out = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j || x[i][j] == LinkKind::None)
                continue;
            const double d = dist(nodes[i], nodes[j]);
            if (x[i][j] == LinkKind::OF) {
                r += p.target_rate;
                out *= 1.0 - p.alpha;
            } else {
                r += rate(p, d);
                out *= 1.0 - reliability(p, d);
            }
        }
        if (r < p.target_rate * (1.0 - 1e-12) || 1.0 - out < p.alpha - 1e-12)
            return false;
    }
    return connected(m, x);
}

struct Brute {
    double cost = std::numeric_limits<double>::infinity();
    std::vector<std::vector<LinkKind>> plan;
};

/// Cheapest feasible plan over all 3^F assignments of the free pairs.
inline Brute brute_force_exact(const std::vector<Point> &nodes, const std::vector<NodePair> &pre, const Params &p) {
    const std::size_t m = nodes.size();
    std::vector<std::vector<char>> forced(m, std::vector<char>(m, 0));
    for (const auto &[i, j] : pre)
        forced[i][j] = forced[j][i] = 1;
    std::vector<NodePair> free;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (!forced[i][j])
                free.emplace_back(i, j);
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < free.size(); ++k)
        total *= 3;

    Brute best;
    std::vector<std::vector<LinkKind>> x(m, std::vector<LinkKind>(m, LinkKind::None));
    for (const auto &[i, j] : pre)
        x[i][j] = x[j][i] = LinkKind::OF;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        double cost = 0.0;
        for (const auto &[i, j] : free) {
            const auto k = static_cast<LinkKind>(c % 3);
            c /= 3;
            x[i][j] = x[j][i] = k;
            const double d = dist(nodes[i], nodes[j]);
            cost += k == LinkKind::OF ? p.of_per_meter * d : k == LinkKind::Hybrid ? p.hybrid_price : 0.0;
        }
        if (cost < best.cost && feasible(nodes, pre, p, x)) {
            best.cost = cost;
            best.plan = x;
        }
    }
    return best;
}

/// Heaviest one-vertex-per-part clique by full enumeration. Weights are summed in
/// node order. Returns -inf when no clique exists.
inline double exhaustive_clique(const backhaul::PlanningGraph &g) {
    const std::size_t m = g.part_count();
    const auto &ns = g.neighbor_sets();
    auto agree = [&](std::size_t a, std::size_t va, std::size_t b, std::size_t vb) {
        const auto &na = ns.neighbors[a];
        const auto &nb = ns.neighbors[b];
        const auto ia = std::find(na.begin(), na.end(), b);
        const auto ib = std::find(nb.begin(), nb.end(), a);
        if (ia == na.end() || ib == nb.end())
            return true;
        return g.part(a)[va].choices[static_cast<std::size_t>(ia - na.begin())] ==
               g.part(b)[vb].choices[static_cast<std::size_t>(ib - nb.begin())];
    };
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> pick(m, 0);
    while (true) {
        bool ok = true;
        for (std::size_t a = 0; a < m && ok; ++a)
            for (std::size_t b = a + 1; b < m && ok; ++b)
                ok = agree(a, pick[a], b, pick[b]);
        if (ok) {
            double w = 0.0;
            for (std::size_t a = 0; a < m; ++a)
                w += g.part(a)[pick[a]].weight;
            best = std::max(best, w);
        }
        std::size_t a = 0;
        while (a < m && ++pick[a] == g.part(a).size())
            pick[a++] = 0;
        if (a == m)
            break;
    }
    return best;
}

/// Random plan over m nodes, each pair linked with probability `density`.
inline backhaul::Plan random_plan(std::mt19937_64 &rng, std::size_t m, double density) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    backhaul::Plan p(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (u(rng) < density)
                p.set(i, j, u(rng) < 0.5 ? LinkKind::OF : LinkKind::Hybrid);
    return p;
}

/// Random layout on a square of `side` meters with `count` random forced pairs.
inline std::pair<std::vector<Point>, std::vector<NodePair>> random_instance(std::mt19937_64 &rng, std::size_t m,
                                                                           double side, std::size_t count) {
    std::uniform_real_distribution<double> u(0.0, side);
    std::vector<Point> nodes(m);
    for (auto &p : nodes)
        p = {u(rng), u(rng)};
    std::vector<NodePair> all;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            all.emplace_back(i, j);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(count, all.size()));
    std::sort(all.begin(), all.end());
    return {nodes, all};
}

} // namespace oracle
