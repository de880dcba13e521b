#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "backhaul/connectivity.hpp"
#include "backhaul/link_models.hpp"
#include "backhaul/topology.hpp"

namespace backhaul {

/// Absolute slack applied to the reliability target and relative slack on the
/// rate target, so that a plateau link meeting the target exactly is accepted.
inline constexpr double kFeasibilityTolerance = 1e-12;

/// Fiedler values above this count as connected.
inline constexpr double kConnectivityThreshold = 1e-6;

inline bool rate_satisfied(double provided, double target) {
    return provided >= target * (1.0 - kFeasibilityTolerance);
}

/// `outage` is the product of per-link outage probabilities.
inline bool reliability_satisfied(double outage, double alpha) {
    return 1.0 - outage >= alpha - kFeasibilityTolerance;
}

/// Rate delivered to node i by its links.
inline double node_rate(const Topology &t, const RateReliabilityModel &rrm, const Plan &p, NodeIndex i) {
    double sum = 0.0;
    for (NodeIndex j = 0; j < p.size(); ++j) {
        if (j == i)
            continue;
        switch (p.kind(i, j)) {
        case LinkKind::OF:
            sum += rrm.target_rate_mbps;
            break;
        case LinkKind::Hybrid:
            sum += hybrid_rate(rrm, distance(t, i, j));
            break;
        case LinkKind::None:
            break;
        }
    }
    return sum;
}

/// Probability that every link of node i is down; reliability is one minus this.
inline double node_outage(const Topology &t, const RateReliabilityModel &rrm, const Plan &p, NodeIndex i) {
    double outage = 1.0;
    for (NodeIndex j = 0; j < p.size(); ++j) {
        if (j == i)
            continue;
        switch (p.kind(i, j)) {
        case LinkKind::OF:
            outage *= 1.0 - rrm.alpha;
            break;
        case LinkKind::Hybrid:
            outage *= 1.0 - hybrid_reliability(rrm, distance(t, i, j));
            break;
        case LinkKind::None:
            break;
        }
    }
    return outage;
}

struct ConstraintCheck {
    std::string name;
    bool passed = true;
    std::vector<std::string> violations;
};

/// Pass/fail per constraint of the full planning problem.
struct FeasibilityReport {
    std::vector<ConstraintCheck> checks;
    double fiedler = 0.0;

    bool feasible() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.passed; });
    }

    const ConstraintCheck &at(std::string_view name) const {
        for (const auto &c : checks)
            if (c.name == name)
                return c;
        throw InvalidInput("no constraint named '" + std::string(name) + "'");
    }
};

/// Evaluates symmetry, exclusivity, pre-deployed coverage, per-node rate,
/// per-node product-form reliability and algebraic connectivity of `p`.
inline FeasibilityReport check_feasible(const Topology &t, const Plan &p, const CostModel &,
                                        const RateReliabilityModel &rrm) {
    if (p.size() != t.size())
        throw InvalidInput("plan and topology sizes differ");
    const std::size_t m = t.size();
    FeasibilityReport report;

    ConstraintCheck symmetry{"symmetry", true, {}};
    ConstraintCheck exclusivity{"exclusivity", true, {}};
    for (NodeIndex i = 0; i < m; ++i) {
        if (p.kind(i, i) != LinkKind::None)
            symmetry.violations.push_back("node " + std::to_string(i) + " linked to itself");
        for (NodeIndex j = i + 1; j < m; ++j)
            if (p.kind(i, j) != p.kind(j, i))
                symmetry.violations.push_back("pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    symmetry.passed = symmetry.violations.empty();
    // A single kind per pair: exclusivity cannot be violated by a Plan.
    report.checks.push_back(std::move(symmetry));
    report.checks.push_back(std::move(exclusivity));

    ConstraintCheck predeployed{"predeployed", true, {}};
    for (const auto &[i, j] : t.predeployed_pairs())
        if (p.kind(i, j) != LinkKind::OF)
            predeployed.violations.push_back("pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
    predeployed.passed = predeployed.violations.empty();
    report.checks.push_back(std::move(predeployed));

    ConstraintCheck rate{"rate", true, {}};
    ConstraintCheck reliability{"reliability", true, {}};
    for (NodeIndex i = 0; i < m; ++i) {
        if (!rate_satisfied(node_rate(t, rrm, p, i), rrm.target_rate_mbps))
            rate.violations.push_back("node " + std::to_string(i));
        if (!reliability_satisfied(node_outage(t, rrm, p, i), rrm.alpha))
            reliability.violations.push_back("node " + std::to_string(i));
    }
    rate.passed = rate.violations.empty();
    reliability.passed = reliability.violations.empty();
    report.checks.push_back(std::move(rate));
    report.checks.push_back(std::move(reliability));

    ConstraintCheck connectivity{"connectivity", true, {}};
    if (m >= 2) {
        report.fiedler = fiedler_value(p);
        if (!(report.fiedler > kConnectivityThreshold)) {
            DisjointSet ds(m);
            for (const auto &l : p.links())
                ds.unite(l.i, l.j);
            for (NodeIndex i = 0; i < m; ++i)
                if (!ds.same(i, 0))
                    connectivity.violations.push_back("node " + std::to_string(i) + " unreachable from node 0");
            connectivity.passed = false;
        }
    }
    report.checks.push_back(std::move(connectivity));
    return report;
}

} // namespace backhaul
