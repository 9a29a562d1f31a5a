#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "mimix/core.hpp"

namespace mimix {

enum class Side { x, y };

enum class IndexBackend {
    automatic,    ///< kd-tree under the max norm, brute force otherwise
    brute_force,  ///< O(n) scan per query
    kd_tree,      ///< requires WithinNorm::max_coordinate
};

namespace detail {

/// Static kd-tree answering max-metric queries with results identical to a
/// linear scan (same per-coordinate arithmetic, monotone box bounds).
class ChebyshevTree {
public:
    explicit ChebyshevTree(const Table& points, std::size_t leaf_size = 12);

    /// k-th smallest distance from point `query` to the other points, with multiplicity.
    double kth_smallest(std::size_t query, std::size_t k) const;
    /// Number of other points within distance r (inclusive).
    std::size_t count_within(std::size_t query, double r) const;

private:
    struct Node {
        std::size_t begin, end;  // range in order_
        std::size_t left = 0, right = 0;
        bool leaf = true;
    };

    std::size_t build(std::size_t begin, std::size_t end, std::size_t leaf_size);
    double box_min_distance(std::size_t node, const double* q) const;
    double box_max_distance(std::size_t node, const double* q) const;
    double point_distance(std::size_t slot, const double* q) const;

    std::size_t dim_;
    std::vector<double> coords_;    // permuted copy, row-major
    std::vector<std::size_t> order_;  // slot -> original index
    std::vector<std::size_t> slot_of_;
    std::vector<double> lo_, hi_;     // per node bounding boxes
    std::vector<Node> nodes_;
};

/// Sorted column answering 1-D inclusive range counts.
class SortedColumn {
public:
    explicit SortedColumn(std::vector<double> values);
    std::size_t count_within(std::size_t query, double r) const;

private:
    std::vector<double> values_;
    std::vector<double> sorted_;
};

}  // namespace detail

/// Answers the distance, radius and count queries of the nearest-neighbor
/// estimators on one dataset. Holds a reference: the dataset must outlive it.
/// Read-only after construction; queries are safe to run concurrently.
class DistanceOracle {
public:
    DistanceOracle(const Dataset& dataset, WithinNorm norm, double atom_tolerance,
                   IndexBackend backend = IndexBackend::automatic);
    ~DistanceOracle();
    DistanceOracle(DistanceOracle&&) noexcept;
    DistanceOracle& operator=(DistanceOracle&&) noexcept;

    std::size_t size() const noexcept { return data_->n(); }
    WithinNorm norm() const noexcept { return norm_; }
    double atom_tolerance() const noexcept { return atom_tolerance_; }
    IndexBackend backend() const noexcept { return backend_; }

    /// max(|X_j - X_i|, |Y_j - Y_i|) under the within-space norm.
    double joint_distance(std::size_t i, std::size_t j) const;
    double marginal_distance(Side side, std::size_t i, std::size_t j) const;

    /// k-th order statistic of {d(i,j) : j != i}. Requires 1 <= k < n.
    double kth_radius(std::size_t i, std::size_t k) const;
    /// |{j != i : d(i,j) <= r}|
    std::size_t count_joint_within(std::size_t i, double r) const;
    /// |{j != i : d(i,j) <= atom_tolerance}|
    std::size_t count_joint_at_zero(std::size_t i) const;
    /// |{j != i : |side_j - side_i| <= r}|
    std::size_t count_marginal_within(Side side, std::size_t i, double r) const;

    /// Radius and counts for sample i. With `detect_atoms`, a radius at or
    /// below the atom tolerance switches k_tilde to the coincidence count.
    NeighborProfile profile(std::size_t i, std::size_t k, bool detect_atoms = true) const;

private:
    void check_index(std::size_t i) const;

    const Dataset* data_;
    WithinNorm norm_;
    double atom_tolerance_;
    IndexBackend backend_;
    std::unique_ptr<detail::ChebyshevTree> joint_tree_;
    std::unique_ptr<detail::ChebyshevTree> x_tree_, y_tree_;
    std::unique_ptr<detail::SortedColumn> x_sorted_, y_sorted_;
};

/// Validates the config against the dataset (k < n) and builds the oracle.
DistanceOracle build_index(const Dataset& dataset, const EstimatorConfig& config,
                           IndexBackend backend = IndexBackend::automatic);

}  // namespace mimix
