#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "backhaul/errors.hpp"

namespace backhaul {

using NodeIndex = std::size_t;
using NodePair = std::pair<NodeIndex, NodeIndex>;

/// Planar position in meters.
struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point &) const = default;
};

enum class LinkKind : std::uint8_t { None = 0, OF = 1, Hybrid = 2 };

inline std::string_view to_string(LinkKind kind) {
    switch (kind) {
    case LinkKind::None:
        return "none";
    case LinkKind::OF:
        return "of";
    case LinkKind::Hybrid:
        return "hybrid";
    }
    return "none";
}

inline LinkKind link_kind_from_string(std::string_view s) {
    if (s == "none")
        return LinkKind::None;
    if (s == "of")
        return LinkKind::OF;
    if (s == "hybrid")
        return LinkKind::Hybrid;
    throw InvalidInput("unknown link kind '" + std::string(s) + "'");
}

/// Base-station positions together with the symmetric pre-deployed fiber adjacency.
class Topology {
public:
    Topology() = default;

    /// Validates and symmetrizes. Rejects empty node sets, non-finite or
    /// coincident coordinates, self-loops and out-of-range indices.
    static Topology build(std::vector<Point> nodes, const std::vector<NodePair> &predeployed) {
        if (nodes.empty())
            throw InvalidInput("topology needs at least one node");
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (!std::isfinite(nodes[i].x) || !std::isfinite(nodes[i].y))
                throw InvalidInput("node " + std::to_string(i) + " has a non-finite coordinate");
            for (std::size_t j = 0; j < i; ++j) {
                if (nodes[i] == nodes[j])
                    throw InvalidInput("nodes " + std::to_string(j) + " and " + std::to_string(i) +
                                       " share the same position");
            }
        }
        Topology t;
        t.nodes_ = std::move(nodes);
        const std::size_t m = t.nodes_.size();
        t.predeployed_.assign(m * m, 0);
        for (const auto &[i, j] : predeployed) {
            if (i >= m || j >= m)
                throw InvalidInput("pre-deployed pair (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") is out of range");
            if (i == j)
                throw InvalidInput("pre-deployed pair (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") is a self-loop");
            t.predeployed_[i * m + j] = 1;
            t.predeployed_[j * m + i] = 1;
        }
        return t;
    }

    std::size_t size() const { return nodes_.size(); }
    const Point &node(NodeIndex i) const { return nodes_.at(i); }
    const std::vector<Point> &nodes() const { return nodes_; }

    bool predeployed(NodeIndex i, NodeIndex j) const { return predeployed_[i * size() + j] != 0; }

    /// Pre-deployed pairs with i < j, in lexicographic order.
    std::vector<NodePair> predeployed_pairs() const {
        std::vector<NodePair> out;
        for (NodeIndex i = 0; i < size(); ++i)
            for (NodeIndex j = i + 1; j < size(); ++j)
                if (predeployed(i, j))
                    out.emplace_back(i, j);
        return out;
    }

    std::size_t predeployed_count() const { return predeployed_pairs().size(); }

    bool operator==(const Topology &) const = default;

private:
    std::vector<Point> nodes_;
    std::vector<std::uint8_t> predeployed_;
};

inline Topology build_topology(std::vector<Point> coords, const std::vector<NodePair> &predeployed_pairs) {
    return Topology::build(std::move(coords), predeployed_pairs);
}

/// Euclidean distance in meters between two distinct nodes.
inline double distance(const Topology &t, NodeIndex i, NodeIndex j) {
    if (i >= t.size() || j >= t.size())
        throw InvalidInput("node index out of range");
    if (i == j)
        throw InvalidInput("distance of a node to itself is undefined");
    const Point &a = t.node(i);
    const Point &b = t.node(j);
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Symmetric per-pair link assignment. The diagonal is always None.
class Plan {
public:
    struct Link {
        NodeIndex i;
        NodeIndex j;
        LinkKind kind;
    };

    Plan() = default;
    explicit Plan(std::size_t m) : m_(m), links_(m * m, LinkKind::None) {}

    /// Builds a plan from a full matrix, rejecting asymmetric entries or a non-None diagonal.
    static Plan from_matrix(const std::vector<std::vector<LinkKind>> &matrix) {
        const std::size_t m = matrix.size();
        Plan p(m);
        for (std::size_t i = 0; i < m; ++i) {
            if (matrix[i].size() != m)
                throw InvalidInput("plan matrix is not square");
            if (matrix[i][i] != LinkKind::None)
                throw InvalidInput("plan links node " + std::to_string(i) + " to itself");
        }
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                if (matrix[i][j] != matrix[j][i])
                    throw InvalidInput("plan is asymmetric at (" + std::to_string(i) + "," + std::to_string(j) +
                                       ")");
                p.set(i, j, matrix[i][j]);
            }
        }
        return p;
    }

    std::size_t size() const { return m_; }

    LinkKind kind(NodeIndex i, NodeIndex j) const { return links_[i * m_ + j]; }

    void set(NodeIndex i, NodeIndex j, LinkKind kind) {
        if (i >= m_ || j >= m_)
            throw InvalidInput("plan index out of range");
        if (i == j) {
            if (kind != LinkKind::None)
                throw InvalidInput("plan cannot link a node to itself");
            return;
        }
        links_[i * m_ + j] = kind;
        links_[j * m_ + i] = kind;
    }

    /// Links with i < j in lexicographic order.
    std::vector<Link> links() const {
        std::vector<Link> out;
        for (NodeIndex i = 0; i < m_; ++i)
            for (NodeIndex j = i + 1; j < m_; ++j)
                if (kind(i, j) != LinkKind::None)
                    out.push_back({i, j, kind(i, j)});
        return out;
    }

    std::size_t link_count() const { return links().size(); }

    std::size_t link_count(LinkKind k) const {
        std::size_t n = 0;
        for (const auto &l : links())
            n += (l.kind == k);
        return n;
    }

    std::vector<std::vector<LinkKind>> matrix() const {
        std::vector<std::vector<LinkKind>> out(m_, std::vector<LinkKind>(m_, LinkKind::None));
        for (NodeIndex i = 0; i < m_; ++i)
            for (NodeIndex j = 0; j < m_; ++j)
                out[i][j] = kind(i, j);
        return out;
    }

    bool operator==(const Plan &) const = default;

private:
    std::size_t m_ = 0;
    std::vector<LinkKind> links_;
};

/// Checks the plan against its topology: matching size and every pre-deployed pair carried as OF.
/// Symmetry and the None diagonal hold by construction of Plan.
inline void validate(const Topology &t, const Plan &p) {
    if (p.size() != t.size())
        throw InvalidInput("plan has " + std::to_string(p.size()) + " nodes, topology has " +
                           std::to_string(t.size()));
    for (const auto &[i, j] : t.predeployed_pairs())
        if (p.kind(i, j) != LinkKind::OF)
            throw InvalidInput("pre-deployed pair (" + std::to_string(i) + "," + std::to_string(j) +
                               ") is not carried as OF");
}

} // namespace backhaul
