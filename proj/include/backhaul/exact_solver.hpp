#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "backhaul/connectivity.hpp"
#include "backhaul/errors.hpp"
#include "backhaul/feasibility.hpp"
#include "backhaul/link_models.hpp"
#include "backhaul/of_planner.hpp"
#include "backhaul/topology.hpp"

namespace backhaul {

/// Ternary encoding of a plan over the pairs without pre-deployed fiber:
/// 0 = no link, 1 = OF, 2 = hybrid.
struct TernaryAssignment {
    std::vector<NodePair> free_pairs;
    std::vector<std::uint8_t> values;

    static std::vector<NodePair> free_pairs_of(const Topology &t) {
        std::vector<NodePair> out;
        for (NodeIndex i = 0; i < t.size(); ++i)
            for (NodeIndex j = i + 1; j < t.size(); ++j)
                if (!t.predeployed(i, j))
                    out.emplace_back(i, j);
        return out;
    }

    static TernaryAssignment from_plan(const Topology &t, const Plan &p) {
        TernaryAssignment z{free_pairs_of(t), {}};
        for (const auto &[i, j] : z.free_pairs)
            z.values.push_back(static_cast<std::uint8_t>(p.kind(i, j)));
        return z;
    }

    Plan to_plan(const Topology &t) const {
        Plan p(t.size());
        for (const auto &[i, j] : t.predeployed_pairs())
            p.set(i, j, LinkKind::OF);
        for (std::size_t k = 0; k < free_pairs.size(); ++k)
            p.set(free_pairs[k].first, free_pairs[k].second, static_cast<LinkKind>(values.at(k)));
        return p;
    }
};

struct ExactOptions {
    /// Maximum number of search nodes; 0 means unlimited.
    std::uint64_t budget = 0;
    /// Adds a spanning-completion lower bound to the committed-cost bound.
    bool spanning_bound = false;
    /// Instances with more free pairs are refused unless a budget is set.
    std::size_t max_free_pairs = 36;
};

struct ExactStats {
    std::uint64_t nodes = 0;
    std::uint64_t prunes_bound = 0;
    std::uint64_t prunes_connectivity = 0;
    std::uint64_t prunes_node_constraints = 0;
};

struct ExactResult {
    Plan plan;
    double cost = 0.0;
    /// False when the budget ran out before the search finished.
    bool optimal = true;
    ExactStats stats;
};

namespace detail {

class ExactSearch {
public:
    ExactSearch(const Topology &t, const CostModel &cm, const RateReliabilityModel &rrm, const ExactOptions &opt)
        : t_(t), rrm_(rrm), opt_(opt), m_(t.size()), dsu_(t.size()) {
        pairs_ = TernaryAssignment::free_pairs_of(t);
        for (const auto &[i, j] : pairs_) {
            const double d = distance(t, i, j);
            candidates_.push_back({i, j, link_cost(cm, LinkKind::OF, d), link_cost(cm, LinkKind::Hybrid, d),
                                   hybrid_rate(rrm, d), hybrid_reliability(rrm, d)});
        }
        std::stable_sort(candidates_.begin(), candidates_.end(),
                         [](const Candidate &a, const Candidate &b) { return a.of_cost < b.of_cost; });
        for (auto &c : candidates_) {
            c.order[0] = c.hybrid_cost < c.of_cost ? LinkKind::Hybrid : LinkKind::OF;
            c.order[1] = LinkKind::None;
            c.order[2] = c.hybrid_cost < c.of_cost ? LinkKind::OF : LinkKind::Hybrid;
        }

        rate_.assign(m_, 0.0);
        outage_.assign(m_, 1.0);
        undecided_.assign(m_, 0);
        for (const auto &[i, j] : t.predeployed_pairs()) {
            for (const NodeIndex v : {i, j}) {
                rate_[v] += rrm.target_rate_mbps;
                outage_[v] *= 1.0 - rrm.alpha;
            }
            dsu_.unite(i, j);
        }
        for (const auto &c : candidates_) {
            ++undecided_[c.i];
            ++undecided_[c.j];
        }
        values_.assign(candidates_.size(), LinkKind::None);

        by_min_cost_.resize(candidates_.size());
        std::iota(by_min_cost_.begin(), by_min_cost_.end(), std::size_t{0});
        std::stable_sort(by_min_cost_.begin(), by_min_cost_.end(), [&](std::size_t a, std::size_t b) {
            return std::min(candidates_[a].of_cost, candidates_[a].hybrid_cost) <
                   std::min(candidates_[b].of_cost, candidates_[b].hybrid_cost);
        });
    }

    ExactResult run(const Plan &incumbent, double incumbent_cost) {
        best_plan_ = incumbent;
        best_cost_ = incumbent_cost;
        search(0, 0.0);
        return {best_plan_, best_cost_, !aborted_, stats_};
    }

private:
    struct Candidate {
        NodeIndex i;
        NodeIndex j;
        double of_cost;
        double hybrid_cost;
        double hybrid_rate;
        double hybrid_reliability;
        LinkKind order[3] = {};
    };

    bool node_ok(NodeIndex v) const {
        return rate_satisfied(rate_[v], rrm_.target_rate_mbps) && reliability_satisfied(outage_[v], rrm_.alpha);
    }

    /// Connected if every undecided pair became a link.
    bool can_still_connect(std::size_t next) const {
        DisjointSet ds(m_);
        for (const auto &[i, j] : t_.predeployed_pairs())
            ds.unite(i, j);
        for (std::size_t k = 0; k < candidates_.size(); ++k)
            if (k >= next || values_[k] != LinkKind::None)
                ds.unite(candidates_[k].i, candidates_[k].j);
        return ds.components() == 1;
    }

    /// Cheapest way to join the current components using undecided pairs.
    double spanning_completion(std::size_t next) const {
        DisjointSet ds(m_);
        for (const auto &[i, j] : t_.predeployed_pairs())
            ds.unite(i, j);
        for (std::size_t k = 0; k < next; ++k)
            if (values_[k] != LinkKind::None)
                ds.unite(candidates_[k].i, candidates_[k].j);
        double extra = 0.0;
        for (const std::size_t k : by_min_cost_) {
            if (k < next)
                continue;
            const auto &c = candidates_[k];
            if (ds.unite(c.i, c.j))
                extra += std::min(c.of_cost, c.hybrid_cost);
            if (ds.components() == 1)
                break;
        }
        return extra;
    }

    void search(std::size_t k, double cost) {
        if (aborted_)
            return;
        if (opt_.budget != 0 && stats_.nodes >= opt_.budget) {
            aborted_ = true;
            return;
        }
        ++stats_.nodes;
        if (k == candidates_.size()) {
            if (dsu_.components() == 1 && cost < best_cost_) {
                best_cost_ = cost;
                best_plan_ = Plan(m_);
                for (const auto &[i, j] : t_.predeployed_pairs())
                    best_plan_.set(i, j, LinkKind::OF);
                for (std::size_t q = 0; q < candidates_.size(); ++q)
                    best_plan_.set(candidates_[q].i, candidates_[q].j, values_[q]);
            }
            return;
        }

        const Candidate &c = candidates_[k];
        for (const LinkKind value : c.order) {
            const double add = value == LinkKind::OF ? c.of_cost : value == LinkKind::Hybrid ? c.hybrid_cost : 0.0;
            if (value != LinkKind::None && cost + add >= best_cost_) {
                ++stats_.prunes_bound;
                continue;
            }

            const double rate_i = rate_[c.i], rate_j = rate_[c.j];
            const double out_i = outage_[c.i], out_j = outage_[c.j];
            const std::size_t snap = dsu_.snapshot();
            if (value != LinkKind::None) {
                const double r = value == LinkKind::OF ? rrm_.target_rate_mbps : c.hybrid_rate;
                const double q = value == LinkKind::OF ? 1.0 - rrm_.alpha : 1.0 - c.hybrid_reliability;
                rate_[c.i] += r;
                rate_[c.j] += r;
                outage_[c.i] *= q;
                outage_[c.j] *= q;
                dsu_.unite(c.i, c.j);
            }
            --undecided_[c.i];
            --undecided_[c.j];
            values_[k] = value;

            bool viable = true;
            if ((undecided_[c.i] == 0 && !node_ok(c.i)) || (undecided_[c.j] == 0 && !node_ok(c.j))) {
                ++stats_.prunes_node_constraints;
                viable = false;
            }
            if (viable && value == LinkKind::None && !can_still_connect(k + 1)) {
                ++stats_.prunes_connectivity;
                viable = false;
            }
            if (viable && opt_.spanning_bound && cost + add + spanning_completion(k + 1) >= best_cost_) {
                ++stats_.prunes_bound;
                viable = false;
            }
            if (viable)
                search(k + 1, cost + add);

            values_[k] = LinkKind::None;
            ++undecided_[c.i];
            ++undecided_[c.j];
            dsu_.rollback(snap);
            rate_[c.i] = rate_i;
            rate_[c.j] = rate_j;
            outage_[c.i] = out_i;
            outage_[c.j] = out_j;
        }
    }

    const Topology &t_;
    const RateReliabilityModel &rrm_;
    const ExactOptions &opt_;
    std::size_t m_;
    std::vector<NodePair> pairs_;
    std::vector<Candidate> candidates_;
    std::vector<std::size_t> by_min_cost_;
    std::vector<double> rate_;
    std::vector<double> outage_;
    std::vector<std::size_t> undecided_;
    std::vector<LinkKind> values_;
    RollbackDisjointSet dsu_;
    ExactStats stats_;
    Plan best_plan_;
    double best_cost_ = std::numeric_limits<double>::infinity();
    bool aborted_ = false;
};

} // namespace detail

/// Globally optimal plan by depth-first branch-and-bound over the ternary
/// encoding. Pairs are branched in ascending fiber price, trying the cheaper link
/// kind, then no link, then the dearer kind; among equal-cost optima the first one
/// reached in this order is returned. The search starts from
/// the optimal fiber-only plan as incumbent and cuts a branch when its committed
/// cost reaches the incumbent, when a fully decided node misses its rate or
/// reliability target, or when the undecided pairs can no longer connect the graph.
inline ExactResult plan_exact(const Topology &t, const CostModel &cm, const RateReliabilityModel &rrm,
                              const ExactOptions &options = {}) {
    rrm.validate();
    if (t.size() < 2)
        throw Infeasible("a single node cannot meet its rate and reliability targets");
    const std::size_t free = TernaryAssignment::free_pairs_of(t).size();
    if (options.budget == 0 && free > options.max_free_pairs)
        throw InvalidInput("exact planning over " + std::to_string(free) + " free pairs exceeds the cap of " +
                           std::to_string(options.max_free_pairs) + "; set a node budget");

    const Plan fiber = plan_of_only(t, cm);
    detail::ExactSearch search(t, cm, rrm, options);
    return search.run(fiber, plan_cost(t, cm, fiber));
}

} // namespace backhaul
