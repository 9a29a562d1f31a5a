#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mimix {

/// Malformed input data (exit code 2 at the CLI).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter outside its documented range (exit code 3 at the CLI).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A violated internal postcondition (exit code 4 at the CLI).
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Dense row-major table of reals.
class Table {
public:
    Table() = default;
    Table(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Table(std::size_t rows, std::size_t cols, std::vector<double> data);

    /// Builds an n x 1 table from a column of values.
    static Table column(std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }

    std::vector<double> column_copy(std::size_t c) const;
    /// Returns the listed columns, in the listed order.
    Table select_columns(std::span<const std::size_t> cols) const;
    Table select_rows(std::span<const std::size_t> rows) const;

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    friend bool operator==(const Table&, const Table&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// N joint observations of (X, Y). Immutable once validated.
class Dataset {
public:
    std::size_t n() const noexcept { return x_.rows(); }
    std::size_t x_dim() const noexcept { return x_.cols(); }
    std::size_t y_dim() const noexcept { return y_.cols(); }
    const Table& x() const noexcept { return x_; }
    const Table& y() const noexcept { return y_; }

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    friend Dataset validate_dataset(Table raw_x, Table raw_y);
    Table x_;
    Table y_;
};

/// Checks shapes and finiteness. Throws InputError naming the offending row/column.
Dataset validate_dataset(Table raw_x, Table raw_y);

enum class WithinNorm { max_coordinate, euclidean };

std::string to_string(WithinNorm norm);
WithinNorm parse_within_norm(const std::string& name);

struct EstimatorConfig {
    int k = 5;
    WithinNorm within_norm = WithinNorm::max_coordinate;
    /// Distances at or below this are treated as coincident.
    double atom_tolerance = 0.0;

    void validate() const;
    /// Also enforces k < n.
    void validate_for(std::size_t n) const;
};

/// Output of an estimator. `per_sample` holds the per-point terms for the
/// nearest-neighbor estimators and is empty for the partition estimators.
struct MiEstimate {
    double value = 0.0;
    std::vector<double> per_sample;
    std::string estimator_name;
    /// Flat key/value echo of every parameter that shaped the result.
    std::vector<std::pair<std::string, std::string>> config_echo;
};

struct NeighborProfile {
    double rho = 0.0;
    std::size_t k_tilde = 0;
    std::size_t n_x = 0;
    std::size_t n_y = 0;
};

/// Compensated sum accumulated in index order; exactly rounded, so the
/// result is independent of input order.
double compensated_sum(std::span<const double> values) noexcept;
double compensated_mean(std::span<const double> values) noexcept;

/// Worker count: MIMIX_THREADS when set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Calls made from inside another parallel_for
/// run serially. Exceptions from the body are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mimix
