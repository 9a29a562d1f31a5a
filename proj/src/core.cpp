#include "mimix/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace mimix {

Table::Table(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw InputError("table data size " + std::to_string(data_.size()) + " does not match " +
                         std::to_string(rows_) + "x" + std::to_string(cols_));
    }
}

Table Table::column(std::span<const double> values) {
    return Table(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

std::vector<double> Table::column_copy(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

Table Table::select_columns(std::span<const std::size_t> cols) const {
    Table out(rows_, cols.size());
    for (std::size_t c : cols) {
        if (c >= cols_) throw InputError("column index " + std::to_string(c) + " out of range");
    }
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t j = 0; j < cols.size(); ++j) out(r, j) = (*this)(r, cols[j]);
    return out;
}

Table Table::select_rows(std::span<const std::size_t> rows) const {
    Table out(rows.size(), cols_);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= rows_) throw InputError("row index " + std::to_string(rows[i]) + " out of range");
        std::copy_n(row(rows[i]).begin(), cols_, out.row(i).begin());
    }
    return out;
}

namespace {

void check_finite(const Table& t, const char* side) {
    for (std::size_t r = 0; r < t.rows(); ++r) {
        for (std::size_t c = 0; c < t.cols(); ++c) {
            if (!std::isfinite(t(r, c))) {
                throw InputError(std::string("non-finite value in ") + side + " at row " + std::to_string(r) +
                                 ", column " + std::to_string(c));
            }
        }
    }
}

}  // namespace

Dataset validate_dataset(Table raw_x, Table raw_y) {
    if (raw_x.rows() == 0 || raw_y.rows() == 0) throw InputError("dataset has zero rows");
    if (raw_x.cols() == 0 || raw_y.cols() == 0) throw InputError("dataset side has zero columns");
    if (raw_x.rows() != raw_y.rows()) {
        throw InputError("shape mismatch: X has " + std::to_string(raw_x.rows()) + " rows, Y has " +
                         std::to_string(raw_y.rows()));
    }
    check_finite(raw_x, "X");
    check_finite(raw_y, "Y");
    Dataset d;
    d.x_ = std::move(raw_x);
    d.y_ = std::move(raw_y);
    return d;
}

std::string to_string(WithinNorm norm) {
    return norm == WithinNorm::euclidean ? "euclidean" : "max";
}

WithinNorm parse_within_norm(const std::string& name) {
    if (name == "max" || name == "max-coordinate" || name == "linf") return WithinNorm::max_coordinate;
    if (name == "euclidean" || name == "l2") return WithinNorm::euclidean;
    throw ParameterError("unknown norm '" + name + "' (expected max or euclidean)");
}

void EstimatorConfig::validate() const {
    if (k < 1) throw ParameterError("k must be >= 1, got " + std::to_string(k));
    if (!(atom_tolerance >= 0.0) || !std::isfinite(atom_tolerance))
        throw ParameterError("atom_tolerance must be a finite value >= 0");
}

void EstimatorConfig::validate_for(std::size_t n) const {
    validate();
    if (static_cast<std::size_t>(k) >= n) {
        throw ParameterError("k must be < n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
    }
}

double compensated_sum(std::span<const double> values) noexcept {
    // Shewchuk partials: the result is the exact sum correctly rounded, so it
    // does not depend on the order of the inputs.
    std::vector<double> partials;
    for (double x : values) {
        std::size_t used = 0;
        for (double y : partials) {
            if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
            const double hi = x + y;
            const double lo = y - (hi - x);
            if (lo != 0.0) partials[used++] = lo;
            x = hi;
        }
        partials.resize(used);
        partials.push_back(x);
    }
    if (partials.empty()) return 0.0;
    std::size_t n = partials.size();
    double hi = partials[--n];
    double lo = 0.0;
    while (n > 0) {
        const double x = hi;
        const double y = partials[--n];
        hi = x + y;
        lo = y - (hi - x);
        if (lo != 0.0) break;
    }
    if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
        const double y = lo * 2.0;
        const double x = hi + y;
        if (y == x - hi) hi = x;
    }
    return hi;
}

double compensated_mean(std::span<const double> values) noexcept {
    if (values.empty()) return 0.0;
    return compensated_sum(values) / static_cast<double>(values.size());
}

unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MIMIX_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap > 0) return std::min<unsigned>(hw, static_cast<unsigned>(cap));
    }
    return hw;
}

namespace {
thread_local bool in_parallel_region = false;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
    if (workers <= 1 || in_parallel_region) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        in_parallel_region = true;
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
        in_parallel_region = false;
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace mimix
