#pragma once

#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "backhaul/errors.hpp"
#include "backhaul/topology.hpp"

namespace backhaul {

/// Union-find with path compression and union by size.
class DisjointSet {
public:
    explicit DisjointSet(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        std::size_t root = x;
        while (parent_[root] != root)
            root = parent_[root];
        while (parent_[x] != root) {
            const std::size_t next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    /// Returns false when x and y were already joined.
    bool unite(std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x == y)
            return false;
        if (size_[x] < size_[y])
            std::swap(x, y);
        parent_[y] = x;
        size_[x] += size_[y];
        --components_;
        return true;
    }

    bool same(std::size_t x, std::size_t y) { return find(x) == find(y); }
    std::size_t components() const { return components_; }
    std::size_t size() const { return parent_.size(); }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
    std::size_t components_;
};

/// Union-find without path compression so that unions can be undone in LIFO order.
class RollbackDisjointSet {
public:
    explicit RollbackDisjointSet(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) const {
        while (parent_[x] != x)
            x = parent_[x];
        return x;
    }

    bool unite(std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x == y) {
            history_.push_back(kNoop);
            return false;
        }
        if (size_[x] < size_[y])
            std::swap(x, y);
        parent_[y] = x;
        size_[x] += size_[y];
        --components_;
        history_.push_back(y);
        return true;
    }

    std::size_t snapshot() const { return history_.size(); }

    void rollback(std::size_t snap) {
        while (history_.size() > snap) {
            const std::size_t y = history_.back();
            history_.pop_back();
            if (y == kNoop)
                continue;
            const std::size_t x = parent_[y];
            size_[x] -= size_[y];
            parent_[y] = y;
            ++components_;
        }
    }

    std::size_t components() const { return components_; }

private:
    static constexpr std::size_t kNoop = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
    std::vector<std::size_t> history_;
    std::size_t components_;
};

/// Degree vector, 0/1 adjacency and Laplacian L = D - C of a plan's link graph.
struct LaplacianView {
    Eigen::VectorXd degree;
    Eigen::MatrixXd adjacency;
    Eigen::MatrixXd laplacian;
};

inline LaplacianView laplacian_view(const Plan &p) {
    const auto m = static_cast<Eigen::Index>(p.size());
    LaplacianView v{Eigen::VectorXd::Zero(m), Eigen::MatrixXd::Zero(m, m), Eigen::MatrixXd::Zero(m, m)};
    for (const auto &l : p.links()) {
        const auto i = static_cast<Eigen::Index>(l.i);
        const auto j = static_cast<Eigen::Index>(l.j);
        v.adjacency(i, j) = v.adjacency(j, i) = 1.0;
    }
    v.degree = v.adjacency.rowwise().sum();
    v.laplacian = Eigen::MatrixXd(v.degree.asDiagonal()) - v.adjacency;
    return v;
}

/// Second-smallest Laplacian eigenvalue (algebraic connectivity).
inline double fiedler_value(const Plan &p) {
    if (p.size() < 2)
        throw InvalidInput("algebraic connectivity needs at least two nodes");
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian_view(p).laplacian,
                                                                Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("Laplacian eigen-decomposition failed");
    return solver.eigenvalues()(1); // ascending order
}

inline std::size_t component_count(const Plan &p) {
    DisjointSet ds(p.size());
    for (const auto &l : p.links())
        ds.unite(l.i, l.j);
    return ds.components();
}

inline bool is_connected(const Plan &p) { return component_count(p) <= 1; }

} // namespace backhaul
