#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <tuple>
#include <vector>

#include "backhaul/connectivity.hpp"
#include "backhaul/link_models.hpp"
#include "backhaul/topology.hpp"

namespace backhaul {

/// Partition of the node set into disjoint, non-empty groups.
/// Groups are sorted internally and ordered by their smallest member.
struct Clustering {
    std::vector<std::vector<NodeIndex>> groups;

    std::size_t size() const { return groups.size(); }
};

namespace detail {

/// Fiber price of a node pair with lexicographic tie-breaking on (i, j), i < j.
/// Every "minimum-price" decision in the fiber planner goes through this total order.
struct PricedPair {
    double cost = std::numeric_limits<double>::infinity();
    NodeIndex i = std::numeric_limits<NodeIndex>::max();
    NodeIndex j = std::numeric_limits<NodeIndex>::max();

    friend bool operator<(const PricedPair &a, const PricedPair &b) {
        return std::tie(a.cost, a.i, a.j) < std::tie(b.cost, b.i, b.j);
    }
};

inline PricedPair priced_pair(const Topology &t, const CostModel &cm, NodeIndex a, NodeIndex b) {
    const NodeIndex i = std::min(a, b);
    const NodeIndex j = std::max(a, b);
    return {link_cost(cm, LinkKind::OF, distance(t, i, j)), i, j};
}

inline Clustering clustering_from_labels(const std::vector<std::size_t> &label) {
    // Relabel so groups are ordered by smallest member.
    std::vector<std::size_t> remap(label.size(), label.size());
    Clustering c;
    for (NodeIndex v = 0; v < label.size(); ++v) {
        if (remap[label[v]] == label.size()) {
            remap[label[v]] = c.groups.size();
            c.groups.emplace_back();
        }
        c.groups[remap[label[v]]].push_back(v);
    }
    return c;
}

inline Clustering predeployed_components(const Topology &t) {
    DisjointSet ds(t.size());
    for (const auto &[i, j] : t.predeployed_pairs())
        ds.unite(i, j);
    std::vector<std::size_t> label(t.size());
    for (NodeIndex v = 0; v < t.size(); ++v)
        label[v] = ds.find(v);
    return clustering_from_labels(label);
}

} // namespace detail

/// Minimum-cost fiber-only plan. Starts from the clusters formed by pre-deployed
/// links and repeatedly joins the two cheapest-to-connect clusters through their
/// cheapest node pair.
inline Plan plan_of_only(const Topology &t, const CostModel &cm) {
    const std::size_t m = t.size();
    Plan plan(m);
    DisjointSet ds(m);
    for (const auto &[i, j] : t.predeployed_pairs()) {
        plan.set(i, j, LinkKind::OF);
        ds.unite(i, j);
    }
    while (ds.components() > 1) {
        detail::PricedPair best;
        for (NodeIndex i = 0; i < m; ++i)
            for (NodeIndex j = i + 1; j < m; ++j)
                if (!ds.same(i, j))
                    best = std::min(best, detail::priced_pair(t, cm, i, j));
        plan.set(best.i, best.j, LinkKind::OF);
        ds.unite(best.i, best.j);
    }
    return plan;
}

/// Reduction check used to certify fiber plans: two clusters merge when each is
/// the other's cheapest cluster and their cheapest node pair carries an OF link
/// in `p`. Starts from the pre-deployed components and stops when no merge applies.
inline Clustering reduce_clusters(const Topology &t, const Plan &p, const CostModel &cm) {
    validate(t, p);
    std::vector<std::vector<NodeIndex>> groups = detail::predeployed_components(t).groups;

    auto cluster_price = [&](const std::vector<NodeIndex> &a, const std::vector<NodeIndex> &b) {
        detail::PricedPair best;
        for (NodeIndex u : a)
            for (NodeIndex v : b)
                best = std::min(best, detail::priced_pair(t, cm, u, v));
        return best;
    };

    bool merged = true;
    while (merged && groups.size() > 1) {
        merged = false;
        const std::size_t k = groups.size();
        std::vector<std::vector<detail::PricedPair>> price(k, std::vector<detail::PricedPair>(k));
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b)
                price[a][b] = price[b][a] = cluster_price(groups[a], groups[b]);

        std::vector<std::size_t> closest(k, 0);
        for (std::size_t a = 0; a < k; ++a) {
            std::optional<std::size_t> arg;
            for (std::size_t b = 0; b < k; ++b)
                if (b != a && (!arg || price[a][b] < price[a][*arg]))
                    arg = b;
            closest[a] = *arg;
        }

        for (std::size_t a = 0; a < k && !merged; ++a) {
            for (std::size_t b = a + 1; b < k && !merged; ++b) {
                if (closest[a] != b || closest[b] != a)
                    continue;
                const auto &pp = price[a][b];
                if (p.kind(pp.i, pp.j) != LinkKind::OF)
                    continue;
                groups[a].insert(groups[a].end(), groups[b].begin(), groups[b].end());
                std::sort(groups[a].begin(), groups[a].end());
                groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(b));
                merged = true;
            }
        }
    }
    std::sort(groups.begin(), groups.end());
    return {groups};
}

} // namespace backhaul
