#include "mimix/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

namespace mimix {

namespace detail {

ChebyshevTree::ChebyshevTree(const Table& points, std::size_t leaf_size) : dim_(points.cols()) {
    const std::size_t n = points.rows();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    // The recursive build permutes order_; coordinates are gathered afterwards.
    coords_ = points.data();
    nodes_.reserve(2 * n / std::max<std::size_t>(leaf_size, 1) + 2);
    build(0, n, std::max<std::size_t>(leaf_size, 1));

    std::vector<double> permuted(n * dim_);
    slot_of_.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        std::copy_n(points.row(order_[s]).begin(), dim_, permuted.begin() + s * dim_);
        slot_of_[order_[s]] = s;
    }
    coords_ = std::move(permuted);
}

std::size_t ChebyshevTree::build(std::size_t begin, std::size_t end, std::size_t leaf_size) {
    const std::size_t id = nodes_.size();
    nodes_.push_back(Node{begin, end});
    lo_.resize((id + 1) * dim_);
    hi_.resize((id + 1) * dim_);

    // coords_ still holds the original row-major table here.
    std::size_t widest = 0;
    double widest_span = -1.0;
    for (std::size_t d = 0; d < dim_; ++d) {
        double lo = coords_[order_[begin] * dim_ + d];
        double hi = lo;
        for (std::size_t s = begin + 1; s < end; ++s) {
            const double v = coords_[order_[s] * dim_ + d];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        lo_[id * dim_ + d] = lo;
        hi_[id * dim_ + d] = hi;
        if (hi - lo > widest_span) {
            widest_span = hi - lo;
            widest = d;
        }
    }
    if (end - begin <= leaf_size || widest_span <= 0.0) return id;

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                         return coords_[a * dim_ + widest] < coords_[b * dim_ + widest];
                     });
    const std::size_t left = build(begin, mid, leaf_size);
    const std::size_t right = build(mid, end, leaf_size);
    nodes_[id].leaf = false;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

double ChebyshevTree::point_distance(std::size_t slot, const double* q) const {
    const double* p = coords_.data() + slot * dim_;
    double d = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) d = std::max(d, std::fabs(p[c] - q[c]));
    return d;
}

double ChebyshevTree::box_min_distance(std::size_t node, const double* q) const {
    const double* lo = lo_.data() + node * dim_;
    const double* hi = hi_.data() + node * dim_;
    double d = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) {
        if (q[c] < lo[c])
            d = std::max(d, lo[c] - q[c]);
        else if (q[c] > hi[c])
            d = std::max(d, q[c] - hi[c]);
    }
    return d;
}

double ChebyshevTree::box_max_distance(std::size_t node, const double* q) const {
    const double* lo = lo_.data() + node * dim_;
    const double* hi = hi_.data() + node * dim_;
    double d = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) d = std::max({d, q[c] - lo[c], hi[c] - q[c]});
    return d;
}

double ChebyshevTree::kth_smallest(std::size_t query, std::size_t k) const {
    const std::size_t self = slot_of_[query];
    const double* q = coords_.data() + self * dim_;
    std::priority_queue<double> best;  // max-heap of the k smallest so far

    auto visit = [&](auto&& self_ref, std::size_t id) -> void {
        const Node& node = nodes_[id];
        if (best.size() == k && box_min_distance(id, q) >= best.top()) return;
        if (node.leaf) {
            for (std::size_t s = node.begin; s < node.end; ++s) {
                if (s == self) continue;
                const double d = point_distance(s, q);
                if (best.size() < k) {
                    best.push(d);
                } else if (d < best.top()) {
                    best.pop();
                    best.push(d);
                }
            }
            return;
        }
        const double dl = box_min_distance(node.left, q);
        const double dr = box_min_distance(node.right, q);
        if (dl <= dr) {
            self_ref(self_ref, node.left);
            self_ref(self_ref, node.right);
        } else {
            self_ref(self_ref, node.right);
            self_ref(self_ref, node.left);
        }
    };
    visit(visit, 0);
    return best.top();
}

std::size_t ChebyshevTree::count_within(std::size_t query, double r) const {
    const std::size_t self = slot_of_[query];
    const double* q = coords_.data() + self * dim_;
    std::size_t count = 0;

    auto visit = [&](auto&& self_ref, std::size_t id) -> void {
        const Node& node = nodes_[id];
        if (box_min_distance(id, q) > r) return;
        if (box_max_distance(id, q) <= r) {
            count += node.end - node.begin;
            if (self >= node.begin && self < node.end) --count;
            return;
        }
        if (node.leaf) {
            for (std::size_t s = node.begin; s < node.end; ++s) {
                if (s != self && point_distance(s, q) <= r) ++count;
            }
            return;
        }
        self_ref(self_ref, node.left);
        self_ref(self_ref, node.right);
    };
    visit(visit, 0);
    return count;
}

SortedColumn::SortedColumn(std::vector<double> values) : values_(std::move(values)), sorted_(values_) {
    std::sort(sorted_.begin(), sorted_.end());
}

std::size_t SortedColumn::count_within(std::size_t query, double r) const {
    // Rounded differences are monotone in the sorted value, so partition
    // points computed with the exact predicate match a linear scan.
    const double v = values_[query];
    const auto pivot = std::lower_bound(sorted_.begin(), sorted_.end(), v);
    const auto first = std::partition_point(sorted_.begin(), pivot, [&](double s) { return v - s > r; });
    const auto last = std::partition_point(pivot, sorted_.end(), [&](double s) { return s - v <= r; });
    return static_cast<std::size_t>(last - first) - 1;
}

}  // namespace detail

namespace {

double side_distance(const Table& t, std::size_t i, std::size_t j, WithinNorm norm) {
    const auto a = t.row(i);
    const auto b = t.row(j);
    if (norm == WithinNorm::max_coordinate) {
        double d = 0.0;
        for (std::size_t c = 0; c < a.size(); ++c) d = std::max(d, std::fabs(b[c] - a[c]));
        return d;
    }
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        const double diff = b[c] - a[c];
        s += diff * diff;
    }
    return std::sqrt(s);
}

Table joint_coordinates(const Dataset& d) {
    Table joint(d.n(), d.x_dim() + d.y_dim());
    for (std::size_t i = 0; i < d.n(); ++i) {
        auto out = joint.row(i);
        std::copy_n(d.x().row(i).begin(), d.x_dim(), out.begin());
        std::copy_n(d.y().row(i).begin(), d.y_dim(), out.begin() + static_cast<std::ptrdiff_t>(d.x_dim()));
    }
    return joint;
}

}  // namespace

DistanceOracle::DistanceOracle(const Dataset& dataset, WithinNorm norm, double atom_tolerance,
                               IndexBackend backend)
    : data_(&dataset), norm_(norm), atom_tolerance_(atom_tolerance), backend_(backend) {
    if (!(atom_tolerance >= 0.0)) throw ParameterError("atom_tolerance must be >= 0");
    if (backend_ == IndexBackend::automatic) {
        backend_ = norm == WithinNorm::max_coordinate && dataset.n() > 64 ? IndexBackend::kd_tree
                                                                          : IndexBackend::brute_force;
    }
    if (backend_ == IndexBackend::kd_tree) {
        if (norm != WithinNorm::max_coordinate)
            throw ParameterError("kd-tree backend requires the max-coordinate norm");
        joint_tree_ = std::make_unique<detail::ChebyshevTree>(joint_coordinates(dataset));
        if (dataset.x_dim() == 1)
            x_sorted_ = std::make_unique<detail::SortedColumn>(dataset.x().column_copy(0));
        else
            x_tree_ = std::make_unique<detail::ChebyshevTree>(dataset.x());
        if (dataset.y_dim() == 1)
            y_sorted_ = std::make_unique<detail::SortedColumn>(dataset.y().column_copy(0));
        else
            y_tree_ = std::make_unique<detail::ChebyshevTree>(dataset.y());
    }
}

DistanceOracle::~DistanceOracle() = default;
DistanceOracle::DistanceOracle(DistanceOracle&&) noexcept = default;
DistanceOracle& DistanceOracle::operator=(DistanceOracle&&) noexcept = default;

void DistanceOracle::check_index(std::size_t i) const {
    if (i >= size()) {
        throw ParameterError("sample index " + std::to_string(i) + " out of range (n=" + std::to_string(size()) +
                             ")");
    }
}

double DistanceOracle::marginal_distance(Side side, std::size_t i, std::size_t j) const {
    check_index(i);
    check_index(j);
    return side_distance(side == Side::x ? data_->x() : data_->y(), i, j, norm_);
}

double DistanceOracle::joint_distance(std::size_t i, std::size_t j) const {
    check_index(i);
    check_index(j);
    return std::max(side_distance(data_->x(), i, j, norm_), side_distance(data_->y(), i, j, norm_));
}

double DistanceOracle::kth_radius(std::size_t i, std::size_t k) const {
    check_index(i);
    const std::size_t n = size();
    if (k < 1 || k >= n) {
        throw ParameterError("k must satisfy 1 <= k < n (k=" + std::to_string(k) + ", n=" + std::to_string(n) +
                             ")");
    }
    if (joint_tree_) return joint_tree_->kth_smallest(i, k);

    thread_local std::vector<double> scratch;
    scratch.clear();
    for (std::size_t j = 0; j < n; ++j) {
        if (j != i) scratch.push_back(joint_distance(i, j));
    }
    auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(k - 1);
    std::nth_element(scratch.begin(), nth, scratch.end());
    return *nth;
}

std::size_t DistanceOracle::count_joint_within(std::size_t i, double r) const {
    check_index(i);
    if (joint_tree_) return joint_tree_->count_within(i, r);
    std::size_t count = 0;
    for (std::size_t j = 0; j < size(); ++j) {
        if (j != i && joint_distance(i, j) <= r) ++count;
    }
    return count;
}

std::size_t DistanceOracle::count_joint_at_zero(std::size_t i) const { return count_joint_within(i, atom_tolerance_); }

std::size_t DistanceOracle::count_marginal_within(Side side, std::size_t i, double r) const {
    check_index(i);
    const auto& sorted = side == Side::x ? x_sorted_ : y_sorted_;
    if (sorted) return sorted->count_within(i, r);
    const auto& tree = side == Side::x ? x_tree_ : y_tree_;
    if (tree) return tree->count_within(i, r);
    const Table& t = side == Side::x ? data_->x() : data_->y();
    std::size_t count = 0;
    for (std::size_t j = 0; j < size(); ++j) {
        if (j != i && side_distance(t, i, j, norm_) <= r) ++count;
    }
    return count;
}

NeighborProfile DistanceOracle::profile(std::size_t i, std::size_t k, bool detect_atoms) const {
    NeighborProfile p;
    p.rho = kth_radius(i, k);
    double radius = p.rho;
    if (detect_atoms && p.rho <= atom_tolerance_) {
        p.k_tilde = count_joint_at_zero(i);
        // Marginal balls must cover every coincident joint neighbor.
        radius = atom_tolerance_;
    } else {
        p.k_tilde = k;
    }
    p.n_x = count_marginal_within(Side::x, i, radius);
    p.n_y = count_marginal_within(Side::y, i, radius);
    return p;
}

DistanceOracle build_index(const Dataset& dataset, const EstimatorConfig& config, IndexBackend backend) {
    config.validate_for(dataset.n());
    return DistanceOracle(dataset, config.within_norm, config.atom_tolerance, backend);
}

}  // namespace mimix
