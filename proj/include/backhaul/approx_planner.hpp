#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "backhaul/errors.hpp"
#include "backhaul/feasibility.hpp"
#include "backhaul/link_models.hpp"
#include "backhaul/of_planner.hpp"
#include "backhaul/topology.hpp"

namespace backhaul {

// ---------------------------------------------------------------------------
// Neighbor sets
// ---------------------------------------------------------------------------

/// How candidate partners are chosen for each node.
///   eq4   : nodes whose hybrid price is at most the dearest hybrid price among
///           the node's fiber-plan links
///   knn:k : the k geometrically nearest nodes
///   all   : every other node (exhaustive)
/// Every policy also keeps the node's fiber-plan partners and its closest node,
/// and the result is closed under symmetry.
struct NeighborPolicy {
    enum class Kind { Eq4, Knn, All };

    Kind kind = Kind::Eq4;
    std::size_t k = 0;

    static NeighborPolicy eq4() { return {Kind::Eq4, 0}; }
    static NeighborPolicy all() { return {Kind::All, 0}; }
    static NeighborPolicy knn(std::size_t k) { return {Kind::Knn, k}; }

    static NeighborPolicy parse(std::string_view s) {
        if (s == "eq4")
            return eq4();
        if (s == "all")
            return all();
        if (s.starts_with("knn:")) {
            const std::string_view digits = s.substr(4);
            std::size_t k = 0;
            const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
            if (ec == std::errc{} && ptr == digits.data() + digits.size() && k > 0)
                return knn(k);
        }
        throw InvalidInput("unknown neighbor policy '" + std::string(s) + "' (expected eq4, all or knn:<k>)");
    }

    std::string to_string() const {
        switch (kind) {
        case Kind::Eq4:
            return "eq4";
        case Kind::All:
            return "all";
        case Kind::Knn:
            return "knn:" + std::to_string(k);
        }
        return "eq4";
    }
};

struct NeighborSets {
    /// Sorted partner list per node.
    std::vector<std::vector<NodeIndex>> neighbors;
    /// Cheapest fiber partner per node (lowest index on ties).
    std::vector<NodeIndex> closest;
    /// Links of the optimal fiber-only plan, which every local assignment must cover.
    Plan of_plan;

    std::size_t size() const { return neighbors.size(); }

    std::optional<std::size_t> slot(NodeIndex i, NodeIndex j) const {
        const auto &n = neighbors[i];
        const auto it = std::lower_bound(n.begin(), n.end(), j);
        if (it == n.end() || *it != j)
            return std::nullopt;
        return static_cast<std::size_t>(it - n.begin());
    }

    bool contains(NodeIndex i, NodeIndex j) const { return slot(i, j).has_value(); }

    bool required(NodeIndex i, NodeIndex j) const { return of_plan.kind(i, j) != LinkKind::None; }
};

inline NeighborSets neighbor_sets(const Topology &t, const Plan &of_plan, const CostModel &cm,
                                  NeighborPolicy policy = NeighborPolicy::eq4()) {
    validate(t, of_plan);
    const std::size_t m = t.size();
    std::vector<std::vector<char>> member(m, std::vector<char>(m, 0));
    NeighborSets ns;
    ns.closest.assign(m, 0);
    ns.of_plan = of_plan;

    for (NodeIndex i = 0; i < m; ++i) {
        detail::PricedPair nearest;
        for (NodeIndex b = 0; b < m; ++b) {
            if (b == i)
                continue;
            const auto pp = detail::priced_pair(t, cm, i, b);
            if (pp < nearest) {
                nearest = pp;
                ns.closest[i] = b;
            }
        }
        if (m < 2)
            ns.closest[i] = i;

        switch (policy.kind) {
        case NeighborPolicy::Kind::All:
            for (NodeIndex b = 0; b < m; ++b)
                member[i][b] = (b != i);
            break;
        case NeighborPolicy::Kind::Eq4: {
            double cap = -std::numeric_limits<double>::infinity();
            for (NodeIndex j = 0; j < m; ++j)
                if (j != i && of_plan.kind(i, j) != LinkKind::None)
                    cap = std::max(cap, cm.hybrid_cost(distance(t, i, j)));
            for (NodeIndex b = 0; b < m; ++b)
                if (b != i && cm.hybrid_cost(distance(t, i, b)) <= cap)
                    member[i][b] = 1;
            break;
        }
        case NeighborPolicy::Kind::Knn: {
            std::vector<detail::PricedPair> ranked;
            for (NodeIndex b = 0; b < m; ++b)
                if (b != i)
                    ranked.push_back(detail::priced_pair(t, cm, i, b));
            std::sort(ranked.begin(), ranked.end());
            for (std::size_t r = 0; r < std::min(policy.k, ranked.size()); ++r)
                member[i][ranked[r].i == i ? ranked[r].j : ranked[r].i] = 1;
            break;
        }
        }
        for (NodeIndex j = 0; j < m; ++j)
            if (j != i && of_plan.kind(i, j) != LinkKind::None)
                member[i][j] = 1;
        if (m >= 2)
            member[i][ns.closest[i]] = 1;
    }

    ns.neighbors.assign(m, {});
    for (NodeIndex i = 0; i < m; ++i)
        for (NodeIndex j = 0; j < m; ++j)
            if (member[i][j] || member[j][i])
                ns.neighbors[i].push_back(j);
    return ns;
}

/// Pairs outside N_j x N_i whose hybrid price is below the fiber price of
/// connecting both ends to their closest nodes. Non-empty means the cost
/// assumption behind the approximation does not hold on this instance.
inline std::vector<NodePair> cost_assumption_violations(const Topology &t, const CostModel &cm,
                                                        const NeighborSets &ns) {
    std::vector<NodePair> out;
    const std::size_t m = t.size();
    for (NodeIndex i = 0; i < m; ++i) {
        for (NodeIndex j = i + 1; j < m; ++j) {
            if (ns.contains(i, j) && ns.contains(j, i))
                continue;
            const double fiber = link_cost(cm, LinkKind::OF, distance(t, i, ns.closest[i])) +
                                 link_cost(cm, LinkKind::OF, distance(t, j, ns.closest[j]));
            if (fiber > cm.hybrid_cost(distance(t, i, j)))
                out.emplace_back(i, j);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reliability linearization
// ---------------------------------------------------------------------------

/// Threshold of the linearized reliability constraint, -ln(1 - alpha).
inline double reliability_threshold(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidInput("target reliability must lie in (0,1)");
    return -std::log1p(-alpha);
}

struct ReliabilitySets {
    /// reliable[i][j]: a single hybrid link (i,j) meets the target on its own.
    std::vector<std::vector<char>> reliable;
    double threshold = 0.0;

    bool is_reliable(NodeIndex i, NodeIndex j) const { return reliable[i][j] != 0; }
};

inline ReliabilitySets reliability_sets(const Topology &t, const RateReliabilityModel &rrm) {
    rrm.validate();
    const std::size_t m = t.size();
    ReliabilitySets rs;
    rs.threshold = reliability_threshold(rrm.alpha);
    rs.reliable.assign(m, std::vector<char>(m, 0));
    for (NodeIndex i = 0; i < m; ++i)
        for (NodeIndex j = 0; j < m; ++j)
            if (i != j)
                rs.reliable[i][j] = hybrid_reliability(rrm, distance(t, i, j)) >= rrm.alpha;
    return rs;
}

// ---------------------------------------------------------------------------
// Local assignments
// ---------------------------------------------------------------------------

/// One node's link choice toward each of its neighbors, aligned with
/// NeighborSets::neighbors[owner]. `weight` is minus half the new cost.
struct LocalAssignment {
    NodeIndex owner = 0;
    std::vector<LinkKind> choices;
    double weight = 0.0;
};

inline constexpr std::size_t kDefaultMaxNeighbors = 12;

/// All feasible local assignments of node i in lexicographic order of choices
/// (None < OF < Hybrid, first neighbor most significant).
inline std::vector<LocalAssignment> enumerate_clusters(NodeIndex i, const NeighborSets &ns,
                                                       const ReliabilitySets &rs, const Topology &t,
                                                       const CostModel &cm, const RateReliabilityModel &rrm,
                                                       std::size_t max_neighbors = kDefaultMaxNeighbors) {
    const auto &partners = ns.neighbors.at(i);
    const std::size_t n = partners.size();
    if (n > max_neighbors)
        throw InvalidInput("node " + std::to_string(i) + " has " + std::to_string(n) +
                           " neighbors, above the limit of " + std::to_string(max_neighbors) +
                           "; use a tighter neighbor policy such as knn:<k>");

    struct Slot {
        std::vector<LinkKind> domain;
        double cost[3] = {0.0, 0.0, 0.0};
        double rate[3] = {0.0, 0.0, 0.0};
        double rel[3] = {0.0, 0.0, 0.0};
    };
    std::vector<Slot> slots(n);
    for (std::size_t s = 0; s < n; ++s) {
        const NodeIndex j = partners[s];
        const double d = distance(t, i, j);
        Slot &slot = slots[s];
        if (t.predeployed(i, j))
            slot.domain = {LinkKind::OF};
        else if (ns.required(i, j))
            slot.domain = {LinkKind::OF, LinkKind::Hybrid};
        else
            slot.domain = {LinkKind::None, LinkKind::OF, LinkKind::Hybrid};
        const auto of = static_cast<std::size_t>(LinkKind::OF);
        const auto hy = static_cast<std::size_t>(LinkKind::Hybrid);
        slot.cost[of] = pair_cost(t, cm, i, j, LinkKind::OF);
        slot.cost[hy] = pair_cost(t, cm, i, j, LinkKind::Hybrid);
        slot.rate[of] = rrm.target_rate_mbps;
        slot.rate[hy] = hybrid_rate(rrm, d);
        slot.rel[of] = rs.threshold;
        slot.rel[hy] = rs.is_reliable(i, j) ? rs.threshold : hybrid_reliability(rrm, d);
    }

    std::vector<LocalAssignment> out;
    std::vector<LinkKind> current(n, LinkKind::None);
    auto recurse = [&](auto &&self, std::size_t s, double cost, double rate, double rel) -> void {
        if (s == n) {
            if (rate_satisfied(rate, rrm.target_rate_mbps) && rel >= rs.threshold)
                out.push_back({i, current, -0.5 * cost});
            return;
        }
        for (const LinkKind k : slots[s].domain) {
            const auto c = static_cast<std::size_t>(k);
            current[s] = k;
            self(self, s + 1, cost + slots[s].cost[c], rate + slots[s].rate[c], rel + slots[s].rel[c]);
        }
        current[s] = LinkKind::None;
    };
    recurse(recurse, 0, 0.0, 0.0, 0.0);
    return out;
}

// ---------------------------------------------------------------------------
// Planning graph
// ---------------------------------------------------------------------------

/// Fixed-size bit set over the vertices of one part.
class VertexSet {
public:
    VertexSet() = default;
    VertexSet(std::size_t n, bool value) : n_(n), words_((n + 63) / 64, value ? ~std::uint64_t{0} : 0) {
        if (value && n % 64 != 0)
            words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
    }

    bool test(std::size_t v) const { return (words_[v / 64] >> (v % 64)) & 1U; }
    void set(std::size_t v) { words_[v / 64] |= std::uint64_t{1} << (v % 64); }

    VertexSet &operator&=(const VertexSet &o) {
        for (std::size_t w = 0; w < words_.size(); ++w)
            words_[w] &= o.words_[w];
        return *this;
    }

    bool empty() const {
        return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (const auto w : words_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    std::size_t size() const { return n_; }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Identifies a vertex: the owning node (part) and its index within that node's cluster list.
struct VertexRef {
    NodeIndex part = 0;
    std::size_t index = 0;
};

/// M-partite graph whose parts hold each node's feasible local assignments.
/// Two vertices are adjacent iff they belong to different nodes and agree on
/// the link between those nodes whenever each node lists the other as a neighbor.
/// Edges are kept implicitly: per part, per neighbor slot and per link kind, the
/// set of vertices making that choice.
class PlanningGraph {
public:
    PlanningGraph(std::vector<std::vector<LocalAssignment>> parts, const NeighborSets &ns)
        : parts_(std::move(parts)), ns_(ns) {
        const std::size_t m = ns_.size();
        if (parts_.size() != m)
            throw InvalidInput("planning graph needs one cluster list per node");
        for (NodeIndex i = 0; i < m; ++i) {
            if (parts_[i].empty())
                throw Infeasible("node " + std::to_string(i) +
                                 " has no feasible local assignment; the approximate problem is infeasible");
            for (const auto &a : parts_[i])
                if (a.owner != i || a.choices.size() != ns_.neighbors[i].size())
                    throw InvalidInput("local assignment does not match node " + std::to_string(i));
        }
        partner_slot_.assign(m, {});
        masks_.assign(m, {});
        for (NodeIndex i = 0; i < m; ++i) {
            const auto &nb = ns_.neighbors[i];
            partner_slot_[i].resize(nb.size());
            masks_[i].resize(nb.size());
            for (std::size_t s = 0; s < nb.size(); ++s) {
                partner_slot_[i][s] = ns_.slot(nb[s], i);
                for (auto &mask : masks_[i][s])
                    mask = VertexSet(parts_[i].size(), false);
                for (std::size_t v = 0; v < parts_[i].size(); ++v)
                    masks_[i][s][static_cast<std::size_t>(parts_[i][v].choices[s])].set(v);
            }
        }
    }

    std::size_t part_count() const { return parts_.size(); }
    const std::vector<LocalAssignment> &part(NodeIndex i) const { return parts_.at(i); }
    const LocalAssignment &vertex(VertexRef v) const { return parts_.at(v.part).at(v.index); }
    const NeighborSets &neighbor_sets() const { return ns_; }

    std::size_t vertex_count() const {
        std::size_t n = 0;
        for (const auto &p : parts_)
            n += p.size();
        return n;
    }

    bool adjacent(VertexRef a, VertexRef b) const {
        if (a.part == b.part)
            return false;
        const auto sa = ns_.slot(a.part, b.part);
        const auto sb = ns_.slot(b.part, a.part);
        if (!sa || !sb)
            return true;
        return vertex(a).choices[*sa] == vertex(b).choices[*sb];
    }

    std::uint64_t edge_count() const {
        std::uint64_t edges = 0;
        const std::size_t m = parts_.size();
        for (NodeIndex i = 0; i < m; ++i) {
            for (NodeIndex k = i + 1; k < m; ++k) {
                const auto si = ns_.slot(i, k);
                const auto sk = ns_.slot(k, i);
                if (!si || !sk) {
                    edges += std::uint64_t{parts_[i].size()} * parts_[k].size();
                    continue;
                }
                for (std::size_t c = 0; c < 3; ++c)
                    edges += std::uint64_t{masks_[i][*si][c].count()} * masks_[k][*sk][c].count();
            }
        }
        return edges;
    }

    /// Vertices of part i choosing `kind` toward its neighbor in slot s.
    const VertexSet &choosing(NodeIndex i, std::size_t s, LinkKind kind) const {
        return masks_[i][s][static_cast<std::size_t>(kind)];
    }

    /// Slot of node i inside the neighbor list of its s-th neighbor, if listed there.
    std::optional<std::size_t> partner_slot(NodeIndex i, std::size_t s) const { return partner_slot_[i][s]; }

private:
    std::vector<std::vector<LocalAssignment>> parts_;
    NeighborSets ns_;
    std::vector<std::vector<std::optional<std::size_t>>> partner_slot_;
    std::vector<std::vector<std::array<VertexSet, 3>>> masks_;
};

inline PlanningGraph build_planning_graph(std::vector<std::vector<LocalAssignment>> clusters,
                                          const NeighborSets &ns) {
    return PlanningGraph(std::move(clusters), ns);
}

// ---------------------------------------------------------------------------
// Maximum-weight clique of size M
// ---------------------------------------------------------------------------

struct CliqueResult {
    /// selection[i] indexes the chosen vertex in part i.
    std::vector<std::size_t> selection;
    /// Sum of vertex weights, accumulated in node order.
    double weight = 0.0;
    std::uint64_t search_nodes = 0;
};

/// Exact branch-and-bound for the heaviest clique holding one vertex per part.
/// Parts are visited by ascending size; within a part, vertices go by descending
/// weight. A branch is cut when its weight plus the best remaining candidate of
/// every unvisited part cannot beat the incumbent, so among equal-weight cliques
/// the first one reached in this order is kept.
inline CliqueResult max_weight_clique(const PlanningGraph &g) {
    const std::size_t m = g.part_count();
    CliqueResult result;
    if (m == 0)
        return result;

    std::vector<NodeIndex> order(m);
    std::iota(order.begin(), order.end(), NodeIndex{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeIndex a, NodeIndex b) { return g.part(a).size() < g.part(b).size(); });

    std::vector<std::size_t> position(m);
    for (std::size_t d = 0; d < m; ++d)
        position[order[d]] = d;

    std::vector<std::vector<std::size_t>> by_weight(m);
    for (NodeIndex p = 0; p < m; ++p) {
        auto &idx = by_weight[p];
        idx.resize(g.part(p).size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return g.part(p)[a].weight > g.part(p)[b].weight;
        });
    }

    // candidates[d][p]: vertices of part p still compatible after fixing the first d parts.
    std::vector<std::vector<VertexSet>> candidates(m + 1, std::vector<VertexSet>(m));
    for (NodeIndex p = 0; p < m; ++p)
        candidates[0][p] = VertexSet(g.part(p).size(), true);

    const auto &ns = g.neighbor_sets();
    std::vector<std::size_t> chosen(m, 0);
    bool found = false;
    double best = 0.0;

    auto best_candidate = [&](NodeIndex p, const VertexSet &set) -> std::optional<double> {
        for (const std::size_t v : by_weight[p])
            if (set.test(v))
                return g.part(p)[v].weight;
        return std::nullopt;
    };

    auto search = [&](auto &&self, std::size_t depth, double weight) -> void {
        ++result.search_nodes;
        if (depth == m) {
            double total = 0.0;
            for (NodeIndex p = 0; p < m; ++p)
                total += g.part(p)[chosen[p]].weight;
            if (!found || total > best) {
                found = true;
                best = total;
                result.selection = chosen;
            }
            return;
        }
        const NodeIndex part = order[depth];
        const auto &level = candidates[depth];
        double rest = 0.0;
        for (std::size_t d = depth + 1; d < m; ++d) {
            const auto b = best_candidate(order[d], level[order[d]]);
            if (!b)
                return;
            rest += *b;
        }
        for (const std::size_t v : by_weight[part]) {
            if (!level[part].test(v))
                continue;
            const LocalAssignment &a = g.part(part)[v];
            if (found && weight + a.weight + rest <= best)
                break;
            auto &next = candidates[depth + 1];
            bool dead = false;
            for (std::size_t d = depth + 1; d < m && !dead; ++d)
                next[order[d]] = level[order[d]];
            for (std::size_t s = 0; s < ns.neighbors[part].size() && !dead; ++s) {
                const NodeIndex other = ns.neighbors[part][s];
                const auto back = g.partner_slot(part, s);
                if (!back)
                    continue;
                // Only unvisited parts need filtering; visited ones already agree.
                if (position[other] <= depth)
                    continue;
                next[other] &= g.choosing(other, *back, a.choices[s]);
                dead = next[other].empty();
            }
            if (dead)
                continue;
            chosen[part] = v;
            self(self, depth + 1, weight + a.weight);
        }
    };
    search(search, 0, 0.0);

    if (!found)
        throw Infeasible("the planning graph has no clique covering every node; "
                         "the approximate problem is infeasible under this neighbor policy");
    result.weight = best;
    return result;
}

// ---------------------------------------------------------------------------
// Hybrid planner pipeline
// ---------------------------------------------------------------------------

struct HybridOptions {
    NeighborPolicy policy = NeighborPolicy::eq4();
    std::size_t max_neighbors = kDefaultMaxNeighbors;
};

struct HybridDiagnostics {
    std::vector<std::size_t> neighbor_counts;
    std::vector<std::size_t> cluster_sizes;
    std::size_t vertex_count = 0;
    std::uint64_t edge_count = 0;
    std::uint64_t clique_search_nodes = 0;
    double clique_weight = 0.0;
    std::vector<NodePair> assumption_violations;
};

struct HybridResult {
    Plan plan;
    double cost = 0.0;
    NeighborSets neighbors;
    HybridDiagnostics diagnostics;
};

/// True when every link of `p` joins mutual neighbors.
inline bool links_within_neighbor_sets(const Plan &p, const NeighborSets &ns) {
    for (const auto &l : p.links())
        if (!ns.contains(l.i, l.j) || !ns.contains(l.j, l.i))
            return false;
    return true;
}

/// Fiber-only plan, neighbor sets, feasible local assignments per node, planning
/// graph, heaviest M-clique, then the assembled plan. The result is re-checked
/// against the exact (product-form) constraints before it is returned.
inline HybridResult plan_hybrid(const Topology &t, const CostModel &cm, const RateReliabilityModel &rrm,
                                const HybridOptions &options = {}) {
    rrm.validate();
    const std::size_t m = t.size();
    const Plan of_plan = plan_of_only(t, cm);

    HybridResult out;
    out.neighbors = neighbor_sets(t, of_plan, cm, options.policy);
    const ReliabilitySets rs = reliability_sets(t, rrm);
    auto &diag = out.diagnostics;
    diag.assumption_violations = cost_assumption_violations(t, cm, out.neighbors);

    std::vector<std::vector<LocalAssignment>> clusters(m);
    for (NodeIndex i = 0; i < m; ++i) {
        clusters[i] = enumerate_clusters(i, out.neighbors, rs, t, cm, rrm, options.max_neighbors);
        diag.neighbor_counts.push_back(out.neighbors.neighbors[i].size());
        diag.cluster_sizes.push_back(clusters[i].size());
    }

    const PlanningGraph graph = build_planning_graph(std::move(clusters), out.neighbors);
    diag.vertex_count = graph.vertex_count();
    diag.edge_count = graph.edge_count();

    const CliqueResult clique = max_weight_clique(graph);
    diag.clique_search_nodes = clique.search_nodes;
    diag.clique_weight = clique.weight;

    out.plan = Plan(m);
    for (NodeIndex i = 0; i < m; ++i) {
        const auto &a = graph.part(i)[clique.selection[i]];
        const auto &nb = out.neighbors.neighbors[i];
        for (std::size_t s = 0; s < nb.size(); ++s)
            if (nb[s] > i)
                out.plan.set(i, nb[s], a.choices[s]);
    }
    out.cost = plan_cost(t, cm, out.plan);

    const auto report = check_feasible(t, out.plan, cm, rrm);
    if (!report.feasible())
        throw std::logic_error("hybrid plan violates the exact constraints");
    return out;
}

} // namespace backhaul
