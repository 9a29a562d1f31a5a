#include "mimix/synthgen.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "mimix/rng.hpp"
#include "mimix/specfun.hpp"

namespace mimix {

namespace {

constexpr double exp1_rho = 0.9;
constexpr double exp1_mix = 0.5;

struct Atom {
    double x, y, prob;
};
constexpr std::array<Atom, 4> exp1_atoms{{{1, 1, 0.45}, {-1, -1, 0.45}, {1, -1, 0.05}, {-1, 1, 0.05}}};

double atom_marginal_x(double x) {
    double s = 0.0;
    for (const Atom& a : exp1_atoms)
        if (a.x == x) s += a.prob;
    return s;
}

double atom_marginal_y(double y) {
    double s = 0.0;
    for (const Atom& a : exp1_atoms)
        if (a.y == y) s += a.prob;
    return s;
}

// log of d(mixture joint) / d(product of mixture marginals) at an atom.
double atom_log_ratio(const Atom& a) {
    const double joint = exp1_mix * a.prob;
    return std::log(joint / ((exp1_mix * atom_marginal_x(a.x)) * (exp1_mix * atom_marginal_y(a.y))));
}

double atoms_contribution() {
    double s = 0.0;
    for (const Atom& a : exp1_atoms) s += exp1_mix * a.prob * atom_log_ratio(a);
    return s;
}


double bivariate_pdf(double x, double y) {
    const double det = 1.0 - exp1_rho * exp1_rho;
    const double q = (x * x - 2.0 * exp1_rho * x * y + y * y) / det;
    return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(det));
}

// log of the density ratio on the continuous part: 0.5 g / (0.5 phi * 0.5 phi),
// expanded so it stays finite where the densities underflow.
double continuous_log_ratio(double x, double y) {
    const double det = 1.0 - exp1_rho * exp1_rho;
    const double q = (x * x - 2.0 * exp1_rho * x * y + y * y) / det;
    return std::log(1.0 / exp1_mix) - 0.5 * std::log(det) - 0.5 * q + 0.5 * (x * x + y * y);
}

double simpson_weight(std::size_t i, std::size_t intervals) {
    if (i == 0 || i == intervals) return 1.0;
    return i % 2 == 1 ? 4.0 : 2.0;
}

double gaussian_part_simpson(double half_width, std::size_t intervals) {
    if (intervals % 2 == 1) ++intervals;
    const double h = 2.0 * half_width / static_cast<double>(intervals);
    std::vector<double> row_sums(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double x = -half_width + h * static_cast<double>(i);
        std::vector<double> terms(intervals + 1);
        for (std::size_t j = 0; j <= intervals; ++j) {
            const double y = -half_width + h * static_cast<double>(j);
            const double g = bivariate_pdf(x, y);
            terms[j] = g > 0.0 ? simpson_weight(j, intervals) * g * continuous_log_ratio(x, y) : 0.0;
        }
        row_sums[i] = simpson_weight(i, intervals) * compensated_sum(terms);
    }
    return compensated_sum(row_sums) * h * h / 9.0;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ParameterError(message);
}

}  // namespace

std::string to_string(GeneratorName name) {
    switch (name) {
        case GeneratorName::exp1: return "exp1";
        case GeneratorName::exp2: return "exp2";
        case GeneratorName::exp3: return "exp3";
        case GeneratorName::exp4: return "exp4";
        case GeneratorName::featsel: return "featsel";
    }
    return "unknown";
}

GeneratorName parse_generator_name(const std::string& name) {
    if (name == "exp1") return GeneratorName::exp1;
    if (name == "exp2") return GeneratorName::exp2;
    if (name == "exp3") return GeneratorName::exp3;
    if (name == "exp4") return GeneratorName::exp4;
    if (name == "featsel") return GeneratorName::featsel;
    throw ParameterError("unknown generator '" + name + "' (expected exp1, exp2, exp3, exp4 or featsel)");
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::closed_form: return "closed-form";
        case Provenance::quadrature: return "quadrature";
        case Provenance::monte_carlo: return "monte-carlo";
    }
    return "unknown";
}

void GeneratorSpec::validate() const {
    switch (name) {
        case GeneratorName::exp1: break;
        case GeneratorName::exp2: require(m >= 2, "m must be >= 2"); break;
        case GeneratorName::exp3:
            require(m >= 2, "m must be >= 2");
            require(dims == 2 || dims == 3, "dims must be 2 or 3");
            break;
        case GeneratorName::exp4: require(p >= 0.0 && p < 1.0, "p must lie in [0, 1)"); break;
        case GeneratorName::featsel:
            require(p_total >= 1, "p_total must be >= 1");
            require(q_relevant >= 1 && q_relevant <= p_total, "q_relevant must lie in [1, p_total]");
            require(dropout >= 0.0 && dropout < 1.0, "dropout must lie in [0, 1)");
            break;
    }
}

Dataset gen_exp1(std::size_t n, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::bernoulli_distribution continuous(exp1_mix);
    std::normal_distribution<double> gauss;
    std::discrete_distribution<int> atom({exp1_atoms[0].prob, exp1_atoms[1].prob, exp1_atoms[2].prob,
                                          exp1_atoms[3].prob});
    Table x(n, 1), y(n, 1);
    const double resid = std::sqrt(1.0 - exp1_rho * exp1_rho);
    for (std::size_t i = 0; i < n; ++i) {
        if (continuous(rng)) {
            const double z1 = gauss(rng);
            const double z2 = gauss(rng);
            x(i, 0) = z1;
            y(i, 0) = exp1_rho * z1 + resid * z2;
        } else {
            const Atom& a = exp1_atoms[static_cast<std::size_t>(atom(rng))];
            x(i, 0) = a.x;
            y(i, 0) = a.y;
        }
    }
    return validate_dataset(std::move(x), std::move(y));
}

namespace {

// One exp2 pair: (discrete, continuous).
std::pair<double, double> exp2_pair(Rng& rng, int m) {
    std::uniform_int_distribution<int> level(0, m - 1);
    std::uniform_real_distribution<double> offset(0.0, 2.0);
    const double d = level(rng);
    return {d, d + offset(rng)};
}

}  // namespace

Dataset gen_exp2(std::size_t n, int m, std::uint64_t seed) {
    require(m >= 2, "m must be >= 2");
    Rng rng = make_rng(seed);
    Table x(n, 1), y(n, 1);
    for (std::size_t i = 0; i < n; ++i) std::tie(x(i, 0), y(i, 0)) = exp2_pair(rng, m);
    return validate_dataset(std::move(x), std::move(y));
}

Dataset gen_exp3(std::size_t n, int m, int dims, std::uint64_t seed) {
    require(m >= 2, "m must be >= 2");
    require(dims == 2 || dims == 3, "dims must be 2 or 3");
    Rng rng = make_rng(seed);
    const auto d = static_cast<std::size_t>(dims);
    Table x(n, d), y(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < d; ++c) {
            const auto [discrete, continuous] = exp2_pair(rng, m);
            if (c == 1) {
                y(i, c) = discrete;
                x(i, c) = continuous;
            } else {
                x(i, c) = discrete;
                y(i, c) = continuous;
            }
        }
    }
    return validate_dataset(std::move(x), std::move(y));
}

Dataset gen_exp4(std::size_t n, double p, std::uint64_t seed) {
    require(p >= 0.0 && p < 1.0, "p must lie in [0, 1)");
    Rng rng = make_rng(seed);
    std::exponential_distribution<double> expo(1.0);
    std::bernoulli_distribution inflate(p);
    Table x(n, 1), y(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = expo(rng);
        if (inflate(rng)) {
            y(i, 0) = 0.0;
        } else {
            std::poisson_distribution<long> pois(x(i, 0));
            y(i, 0) = static_cast<double>(pois(rng));
        }
    }
    return validate_dataset(std::move(x), std::move(y));
}

FeatselData gen_featsel(std::size_t n, int p_total, int q_relevant, double dropout, std::uint64_t seed,
                        TargetNoise target_noise) {
    GeneratorSpec spec;
    spec.name = GeneratorName::featsel;
    spec.p_total = p_total;
    spec.q_relevant = q_relevant;
    spec.dropout = dropout;
    spec.validate();

    Rng rng = make_rng(seed);
    std::exponential_distribution<double> expo(1.0);
    std::bernoulli_distribution drop(dropout);
    const auto p = static_cast<std::size_t>(p_total);
    const auto q = static_cast<std::size_t>(q_relevant);
    FeatselData out{Table(n, p), Table(n, q), std::vector<bool>(p, false)};
    for (std::size_t c = 0; c < q; ++c) out.relevant[c] = true;

    std::vector<double> latent(p);
    for (std::size_t i = 0; i < n; ++i) {
        for (double& v : latent) v = expo(rng);
        for (std::size_t c = 0; c < p; ++c) {
            if (drop(rng)) {
                out.features(i, c) = 0.0;
            } else {
                std::poisson_distribution<long> pois(latent[c]);
                out.features(i, c) = static_cast<double>(pois(rng));
            }
        }
        for (std::size_t c = 0; c < q; ++c) {
            if (drop(rng)) {
                out.target(i, c) = 0.0;
            } else if (target_noise == TargetNoise::exponential) {
                out.target(i, c) = latent[c] * expo(rng);
            } else {
                std::poisson_distribution<long> pois(latent[c]);
                out.target(i, c) = static_cast<double>(pois(rng));
            }
        }
    }
    return out;
}

Table apply_dropout(const Table& table, double level, std::uint64_t seed) {
    require(level >= 0.0 && level < 1.0, "dropout level must lie in [0, 1)");
    Table out = table;
    if (level == 0.0) return out;
    Rng rng = make_rng(seed);
    std::bernoulli_distribution drop(level);
    for (double& v : out.data())
        if (drop(rng)) v = 0.0;
    return out;
}

Dataset generate(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed) {
    spec.validate();
    switch (spec.name) {
        case GeneratorName::exp1: return gen_exp1(n, seed);
        case GeneratorName::exp2: return gen_exp2(n, spec.m, seed);
        case GeneratorName::exp3: return gen_exp3(n, spec.m, spec.dims, seed);
        case GeneratorName::exp4: return gen_exp4(n, spec.p, seed);
        case GeneratorName::featsel: break;
    }
    throw ParameterError("generator '" + to_string(spec.name) + "' does not produce a single (X, Y) dataset");
}

double exp2_ground_truth(int m) {
    require(m >= 2, "m must be >= 2");
    const double md = m;
    return std::log(md) - (md - 1.0) * std::log(2.0) / md;
}

double exp4_ground_truth(double p, std::size_t terms) {
    require(p >= 0.0 && p < 1.0, "p must lie in [0, 1)");
    std::vector<double> series;
    for (std::size_t k = 1; terms == 0 || k <= terms; ++k) {
        const double term = std::log(static_cast<double>(k)) * std::ldexp(1.0, -static_cast<int>(k));
        if (terms == 0 && k > 1 && term < 1e-20) break;
        series.push_back(term);
    }
    return (1.0 - p) * (2.0 * std::log(2.0) - euler_gamma - compensated_sum(series));
}

double exp4_truncation_bound(std::size_t terms) {
    const double k = static_cast<double>(terms);
    return std::ldexp(1.0, -static_cast<int>(terms)) * (std::log(k + 1.0) + 1.0 / (k + 1.0));
}

double exp1_ground_truth_quadrature(double half_width, std::size_t intervals) {
    return atoms_contribution() + exp1_mix * gaussian_part_simpson(half_width, intervals);
}

MonteCarloValue exp1_ground_truth_monte_carlo(std::size_t samples, std::uint64_t seed) {
    require(samples >= 2, "Monte Carlo needs at least 2 samples");
    Rng rng = make_rng(seed);
    std::bernoulli_distribution continuous(exp1_mix);
    std::normal_distribution<double> gauss;
    std::discrete_distribution<int> atom({exp1_atoms[0].prob, exp1_atoms[1].prob, exp1_atoms[2].prob,
                                          exp1_atoms[3].prob});
    const double resid = std::sqrt(1.0 - exp1_rho * exp1_rho);
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        double v;
        if (continuous(rng)) {
            const double x = gauss(rng);
            v = continuous_log_ratio(x, exp1_rho * x + resid * gauss(rng));
        } else {
            v = atom_log_ratio(exp1_atoms[static_cast<std::size_t>(atom(rng))]);
        }
        const double delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
    }
    const double var = m2 / static_cast<double>(samples - 1);
    return {mean, std::sqrt(var / static_cast<double>(samples))};
}

GroundTruth ground_truth(const GeneratorSpec& spec) {
    spec.validate();
    switch (spec.name) {
        case GeneratorName::exp1: {
            const double fine = exp1_ground_truth_quadrature(12.0, 2400);
            const double coarse = exp1_ground_truth_quadrature(12.0, 1200);
            return {fine, Provenance::quadrature, std::max(std::fabs(fine - coarse), 1e-12)};
        }
        case GeneratorName::exp2: return {exp2_ground_truth(spec.m), Provenance::closed_form, 0.0};
        case GeneratorName::exp3:
            return {spec.dims * exp2_ground_truth(spec.m), Provenance::closed_form, 0.0};
        case GeneratorName::exp4: return {exp4_ground_truth(spec.p), Provenance::closed_form, 1e-15};
        case GeneratorName::featsel: break;
    }
    throw ParameterError("no ground truth for generator '" + to_string(spec.name) + "'");
}

}  // namespace mimix
