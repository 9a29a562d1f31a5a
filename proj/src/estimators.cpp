#include "mimix/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "mimix/rng.hpp"
#include "mimix/specfun.hpp"

namespace mimix {

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::vector<std::pair<std::string, std::string>> knn_echo(const EstimatorConfig& c) {
    return {{"k", std::to_string(c.k)},
            {"within_norm", to_string(c.within_norm)},
            {"atom_tolerance", fmt_double(c.atom_tolerance)}};
}

std::vector<std::pair<std::string, std::string>> partition_echo(const PartitionConfig& p, bool adaptive) {
    if (adaptive) return {{"significance", fmt_double(p.significance)}, {"min_cell", std::to_string(p.min_cell)}};
    return {{"bins_per_dim", std::to_string(p.bins_per_dim)}};
}

MiEstimate knn_estimate(const Dataset& dataset, const EstimatorConfig& config, IndexBackend backend,
                        bool detect_atoms, std::string name) {
    const DistanceOracle oracle = build_index(dataset, config, backend);
    MiEstimate est = estimate_from_profiles(
        neighbor_profiles(oracle, static_cast<std::size_t>(config.k), detect_atoms), std::move(name));
    est.config_echo = knn_echo(config);
    return est;
}

// Dense labels for the distinct rows of a table, numbered in lexicographic order.
std::vector<std::size_t> dense_row_labels(const Table& t) {
    std::vector<std::size_t> order(t.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto less = [&](std::size_t a, std::size_t b) {
        const auto ra = t.row(a);
        const auto rb = t.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    };
    std::stable_sort(order.begin(), order.end(), less);
    std::vector<std::size_t> labels(t.rows());
    std::size_t next = 0;
    for (std::size_t s = 0; s < order.size(); ++s) {
        if (s > 0 && less(order[s - 1], order[s])) ++next;
        labels[order[s]] = next;
    }
    return labels;
}

// Plug-in MI of paired labels, summed over joint cells in label order.
double plugin_mi_from_labels(const std::vector<std::size_t>& xl, const std::vector<std::size_t>& yl) {
    const std::size_t n = xl.size();
    Table pairs(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        pairs(i, 0) = static_cast<double>(xl[i]);
        pairs(i, 1) = static_cast<double>(yl[i]);
    }
    const auto jl = dense_row_labels(pairs);
    const std::size_t cells = n == 0 ? 0 : *std::max_element(jl.begin(), jl.end()) + 1;
    std::vector<std::size_t> cx(n, 0), cy(n, 0), cxy(cells, 0), rep(cells, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ++cx[xl[i]];
        ++cy[yl[i]];
        ++cxy[jl[i]];
        rep[jl[i]] = i;
    }
    const double nn = static_cast<double>(n);
    std::vector<double> terms(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        const double joint = static_cast<double>(cxy[c]);
        const double mx = static_cast<double>(cx[xl[rep[c]]]);
        const double my = static_cast<double>(cy[yl[rep[c]]]);
        terms[c] = joint / nn * std::log(joint * nn / (mx * my));
    }
    return compensated_sum(terms);
}

Table bin_table(const Table& t, int bins) {
    Table out(t.rows(), t.cols());
    for (std::size_t c = 0; c < t.cols(); ++c) {
        double lo = t(0, c), hi = t(0, c);
        for (std::size_t r = 1; r < t.rows(); ++r) {
            lo = std::min(lo, t(r, c));
            hi = std::max(hi, t(r, c));
        }
        const double width = hi - lo;
        for (std::size_t r = 0; r < t.rows(); ++r) {
            int b = 0;
            if (width > 0.0) {
                b = static_cast<int>(std::floor((t(r, c) - lo) / width * bins));
                b = std::clamp(b, 0, bins - 1);
            }
            out(r, c) = b;
        }
    }
    return out;
}

// Upper tail of the chi-square distribution with 3 degrees of freedom.
double chi_square3_sf(double x) {
    if (x <= 0.0) return 1.0;
    return std::erfc(std::sqrt(x / 2.0)) + std::sqrt(2.0 * x / std::numbers::pi) * std::exp(-x / 2.0);
}

}  // namespace

void PartitionConfig::validate() const {
    if (bins_per_dim < 2) throw ParameterError("bins_per_dim must be >= 2");
    if (!(significance > 0.0 && significance < 1.0)) throw ParameterError("significance must lie in (0, 1)");
    if (min_cell < 1) throw ParameterError("min_cell must be >= 1");
}

void NoiseConfig::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("noise sigma must be > 0");
}

std::vector<NeighborProfile> neighbor_profiles(const DistanceOracle& oracle, std::size_t k, bool detect_atoms) {
    std::vector<NeighborProfile> profiles(oracle.size());
    parallel_for(oracle.size(), [&](std::size_t i) { profiles[i] = oracle.profile(i, k, detect_atoms); });
    return profiles;
}

double mixed_term(const NeighborProfile& p, std::size_t n) {
    return digamma(p.k_tilde) + std::log(static_cast<double>(n)) - std::log(static_cast<double>(p.n_x + 1)) -
           std::log(static_cast<double>(p.n_y + 1));
}

MiEstimate estimate_from_profiles(const std::vector<NeighborProfile>& profiles, std::string name) {
    MiEstimate est;
    est.estimator_name = std::move(name);
    est.per_sample.resize(profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) est.per_sample[i] = mixed_term(profiles[i], profiles.size());
    est.value = compensated_mean(est.per_sample);
    return est;
}

MiEstimate estimate_mixed(const Dataset& dataset, const EstimatorConfig& config, IndexBackend backend) {
    return knn_estimate(dataset, config, backend, true, "mixed");
}

MiEstimate estimate_ksg(const Dataset& dataset, const EstimatorConfig& config, IndexBackend backend) {
    return knn_estimate(dataset, config, backend, false, "ksg");
}

Dataset add_gaussian_noise(const Dataset& dataset, const NoiseConfig& noise) {
    noise.validate();
    Rng rng = make_rng(noise.seed);
    std::normal_distribution<double> gauss(0.0, noise.sigma);
    Table x = dataset.x();
    Table y = dataset.y();
    for (std::size_t i = 0; i < dataset.n(); ++i) {
        for (double& v : x.row(i)) v += gauss(rng);
        for (double& v : y.row(i)) v += gauss(rng);
    }
    return validate_dataset(std::move(x), std::move(y));
}

MiEstimate estimate_noisy_ksg(const Dataset& dataset, const EstimatorConfig& config, const NoiseConfig& noise) {
    noise.validate();
    config.validate_for(dataset.n());
    const Dataset noisy = add_gaussian_noise(dataset, noise);
    MiEstimate est = knn_estimate(noisy, config, IndexBackend::automatic, false, "noisy_ksg");
    est.config_echo.emplace_back("sigma", fmt_double(noise.sigma));
    est.config_echo.emplace_back("seed", std::to_string(noise.seed));
    return est;
}

MiEstimate estimate_fixed_partition(const Dataset& dataset, const PartitionConfig& part) {
    part.validate();
    MiEstimate est;
    est.estimator_name = "fixed_partition";
    est.value = plugin_mi_from_labels(dense_row_labels(bin_table(dataset.x(), part.bins_per_dim)),
                                      dense_row_labels(bin_table(dataset.y(), part.bins_per_dim)));
    est.config_echo = partition_echo(part, false);
    return est;
}

MiEstimate estimate_adaptive_partition(const Dataset& dataset, const PartitionConfig& part) {
    part.validate();
    if (dataset.x_dim() != 1 || dataset.y_dim() != 1) {
        throw ParameterError("adaptive partitioning works only for one-dimensional X and Y (got x_dim=" +
                             std::to_string(dataset.x_dim()) + ", y_dim=" + std::to_string(dataset.y_dim()) + ")");
    }
    const std::size_t n = dataset.n();
    const std::vector<double> xs = dataset.x().column_copy(0);
    const std::vector<double> ys = dataset.y().column_copy(0);
    std::vector<double> x_sorted = xs, y_sorted = ys;
    std::sort(x_sorted.begin(), x_sorted.end());
    std::sort(y_sorted.begin(), y_sorted.end());
    // Global count of values in [lo, hi).
    auto marginal = [](const std::vector<double>& sorted, double lo, double hi) {
        return static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), hi) -
                                   std::lower_bound(sorted.begin(), sorted.end(), lo));
    };

    struct Cell {
        std::vector<std::size_t> members;
        double xlo, xhi, ylo, yhi;
    };
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<Cell> stack;
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    stack.push_back(Cell{std::move(all), -inf, inf, -inf, inf});

    const std::size_t floor_size = 4 * static_cast<std::size_t>(part.min_cell);
    const double nn = static_cast<double>(n);
    std::vector<double> terms;
    auto order_stat = [](const std::vector<std::size_t>& members, const std::vector<double>& values) {
        std::vector<double> v(members.size());
        for (std::size_t s = 0; s < members.size(); ++s) v[s] = values[members[s]];
        auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
        std::nth_element(v.begin(), mid, v.end());
        return *mid;
    };

    while (!stack.empty()) {
        Cell cell = std::move(stack.back());
        stack.pop_back();
        const std::size_t size = cell.members.size();
        if (size == 0) continue;

        bool split = false;
        std::array<Cell, 4> quads;
        if (size >= floor_size) {
            const double mx = order_stat(cell.members, xs);
            const double my = order_stat(cell.members, ys);
            quads = {Cell{{}, cell.xlo, mx, cell.ylo, my}, Cell{{}, mx, cell.xhi, cell.ylo, my},
                     Cell{{}, cell.xlo, mx, my, cell.yhi}, Cell{{}, mx, cell.xhi, my, cell.yhi}};
            for (std::size_t m : cell.members) {
                const int q = (xs[m] < mx ? 0 : 1) + (ys[m] < my ? 0 : 2);
                quads[q].members.push_back(m);
            }
            const double expected = static_cast<double>(size) / 4.0;
            double chi2 = 0.0;
            bool progress = true;
            for (const Cell& q : quads) {
                const double diff = static_cast<double>(q.members.size()) - expected;
                chi2 += diff * diff / expected;
                if (q.members.size() == size) progress = false;
            }
            split = progress && chi_square3_sf(chi2) < part.significance;
        }
        if (split) {
            // Pushed in reverse so cells are visited in quadrant order.
            for (auto it = quads.rbegin(); it != quads.rend(); ++it) stack.push_back(std::move(*it));
            continue;
        }
        const double joint = static_cast<double>(size);
        const double px = marginal(x_sorted, cell.xlo, cell.xhi);
        const double py = marginal(y_sorted, cell.ylo, cell.yhi);
        terms.push_back(joint / nn * std::log(joint * nn / (px * py)));
    }

    MiEstimate est;
    est.estimator_name = "adaptive_partition";
    est.value = compensated_sum(terms);
    est.config_echo = partition_echo(part, true);
    return est;
}

double plugin_mi_exact(const Dataset& dataset) {
    return plugin_mi_from_labels(dense_row_labels(dataset.x()), dense_row_labels(dataset.y()));
}

int k_schedule(std::size_t n) {
    if (n == 0) throw ParameterError("k_schedule requires n >= 1");
    int k = static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n))));
    // Guard against cbrt rounding just above an exact cube.
    while (k > 1 && static_cast<std::size_t>(k - 1) * (k - 1) * (k - 1) >= n) --k;
    return k;
}

std::string to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::mixed: return "mixed";
        case EstimatorKind::ksg: return "ksg";
        case EstimatorKind::noisy_ksg: return "noisy_ksg";
        case EstimatorKind::fixed_partition: return "partition";
        case EstimatorKind::adaptive_partition: return "adaptive";
    }
    return "unknown";
}

EstimatorKind parse_estimator_kind(const std::string& name) {
    static const std::map<std::string, EstimatorKind> names = {
        {"mixed", EstimatorKind::mixed},
        {"ksg", EstimatorKind::ksg},
        {"noisy_ksg", EstimatorKind::noisy_ksg},
        {"noisy-ksg", EstimatorKind::noisy_ksg},
        {"ksg-noisy", EstimatorKind::noisy_ksg},
        {"partition", EstimatorKind::fixed_partition},
        {"fixed_partition", EstimatorKind::fixed_partition},
        {"adaptive", EstimatorKind::adaptive_partition},
        {"adaptive_partition", EstimatorKind::adaptive_partition},
    };
    const auto it = names.find(name);
    if (it == names.end()) throw ParameterError("unknown estimator '" + name + "'");
    return it->second;
}

std::string EstimatorSpec::label() const {
    if (kind == EstimatorKind::noisy_ksg) return "noisy_ksg(sigma=" + fmt_double(noise_sigma) + ")";
    return to_string(kind);
}

MiEstimate run_estimator(const EstimatorSpec& spec, const Dataset& dataset, std::uint64_t seed) {
    switch (spec.kind) {
        case EstimatorKind::mixed: return estimate_mixed(dataset, spec.knn);
        case EstimatorKind::ksg: return estimate_ksg(dataset, spec.knn);
        case EstimatorKind::noisy_ksg: return estimate_noisy_ksg(dataset, spec.knn, NoiseConfig{spec.noise_sigma, seed});
        case EstimatorKind::fixed_partition: return estimate_fixed_partition(dataset, spec.partition);
        case EstimatorKind::adaptive_partition: return estimate_adaptive_partition(dataset, spec.partition);
    }
    throw ParameterError("unknown estimator kind");
}

}  // namespace mimix
