#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "backhaul/errors.hpp"
#include "backhaul/topology.hpp"

namespace backhaul {

/// Deployment prices. Fiber is linear in length; hybrid RF/FSO is a function of
/// length (a constant by default).
struct CostModel {
    double of_per_meter = 13.5;
    std::function<double(double)> hybrid;

    static CostModel constant(double of_per_meter, double hybrid_cost) {
        if (!(of_per_meter > 0.0) || !(hybrid_cost > 0.0))
            throw InvalidInput("link prices must be strictly positive");
        return {of_per_meter, [hybrid_cost](double) { return hybrid_cost; }};
    }

    static CostModel distance_dependent(double of_per_meter, std::function<double(double)> hybrid_of_meters) {
        if (!(of_per_meter > 0.0))
            throw InvalidInput("fiber price must be strictly positive");
        if (!hybrid_of_meters)
            throw InvalidInput("hybrid price function is empty");
        return {of_per_meter, std::move(hybrid_of_meters)};
    }

    double of_cost(double meters) const { return of_per_meter * meters; }

    double hybrid_cost(double meters) const {
        const double c = hybrid ? hybrid(meters) : 0.0;
        if (!(c > 0.0))
            throw InvalidInput("hybrid price must be strictly positive");
        return c;
    }
};

inline double link_cost(const CostModel &m, LinkKind kind, double meters) {
    if (!(meters > 0.0) || !std::isfinite(meters))
        throw InvalidInput("link length must be positive and finite");
    switch (kind) {
    case LinkKind::OF:
        return m.of_cost(meters);
    case LinkKind::Hybrid:
        return m.hybrid_cost(meters);
    case LinkKind::None:
        break;
    }
    throw InvalidInput("a missing link has no cost");
}

/// Rate and reliability targets plus the distance model of hybrid links:
/// flat up to a plateau distance, exponential decay beyond it.
struct RateReliabilityModel {
    double target_rate_mbps = 1000.0;
    double rate_plateau_m = 3000.0;
    double alpha = 0.9;
    double reliability_plateau_m = 2000.0;
    double decay_m = 1000.0;
    /// Reliability inside the plateau; defaults to alpha.
    std::optional<double> plateau_reliability;

    double plateau_value() const { return plateau_reliability.value_or(alpha); }

    void validate() const {
        if (!(target_rate_mbps > 0.0))
            throw InvalidInput("target rate must be positive");
        if (!(rate_plateau_m > 0.0) || !(reliability_plateau_m > 0.0))
            throw InvalidInput("plateau distances must be positive");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw InvalidInput("target reliability must lie in (0,1)");
        if (!(decay_m > 0.0))
            throw InvalidInput("decay length must be positive");
        const double r = plateau_value();
        if (!(r > 0.0 && r < 1.0))
            throw InvalidInput("plateau reliability must lie in (0,1)");
    }
};

namespace detail {
inline void require_positive_distance(double meters) {
    if (!(meters > 0.0) || !std::isfinite(meters))
        throw InvalidInput("link length must be positive and finite");
}
} // namespace detail

inline double hybrid_rate(const RateReliabilityModel &m, double meters) {
    detail::require_positive_distance(meters);
    if (meters < m.rate_plateau_m)
        return m.target_rate_mbps;
    return m.target_rate_mbps * std::exp(-(meters - m.rate_plateau_m) / m.decay_m);
}

inline double hybrid_reliability(const RateReliabilityModel &m, double meters) {
    detail::require_positive_distance(meters);
    const double plateau = m.plateau_value();
    if (meters < m.reliability_plateau_m)
        return plateau;
    return plateau * std::exp(-(meters - m.reliability_plateau_m) / m.decay_m);
}

/// Marginal price of carrying (i,j) with `kind`. Pre-deployed fiber is already paid for.
inline double pair_cost(const Topology &t, const CostModel &cm, NodeIndex i, NodeIndex j, LinkKind kind) {
    if (kind == LinkKind::None)
        return 0.0;
    if (kind == LinkKind::OF && t.predeployed(i, j))
        return 0.0;
    return link_cost(cm, kind, distance(t, i, j));
}

/// Newly deployed cost of a plan; pre-deployed fiber contributes nothing.
inline double plan_cost(const Topology &t, const CostModel &cm, const Plan &p) {
    double total = 0.0;
    for (const auto &l : p.links())
        total += pair_cost(t, cm, l.i, l.j, l.kind);
    return total;
}

} // namespace backhaul
