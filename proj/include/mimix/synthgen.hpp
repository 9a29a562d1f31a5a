#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mimix/core.hpp"

namespace mimix {

enum class GeneratorName { exp1, exp2, exp3, exp4, featsel };

std::string to_string(GeneratorName name);
GeneratorName parse_generator_name(const std::string& name);

/// Observation model for the feature-selection target.
enum class TargetNoise {
    exponential,  ///< Exp with mean Y_j
    poisson,      ///< Poisson(Y_j)
};

struct GeneratorSpec {
    GeneratorName name = GeneratorName::exp2;
    int m = 5;              // exp2, exp3
    int dims = 2;           // exp3
    double p = 0.0;         // exp4 zero-inflation
    double dropout = 0.15;  // featsel
    int p_total = 20;       // featsel
    int q_relevant = 5;     // featsel
    TargetNoise target_noise = TargetNoise::exponential;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class Provenance { closed_form, quadrature, monte_carlo };

std::string to_string(Provenance p);

struct GroundTruth {
    double value = 0.0;
    Provenance provenance = Provenance::closed_form;
    /// Bound on the numeric error of `value` (0 for closed forms evaluated to rounding).
    double error_bound = 0.0;
};

/// Half Gaussian (unit variances, correlation 0.9), half atoms on (+-1, +-1)
/// with P(1,1) = P(-1,-1) = 0.45 and P(1,-1) = P(-1,1) = 0.05.
Dataset gen_exp1(std::size_t n, std::uint64_t seed);

/// X uniform on {0..m-1}, Y uniform on [X, X+2].
Dataset gen_exp2(std::size_t n, int m, std::uint64_t seed);

/// `dims` independent exp2 pairs. The second pair has its roles swapped:
/// its discrete coordinate lands in Y and its continuous one in X.
Dataset gen_exp3(std::size_t n, int m, int dims, std::uint64_t seed);

/// X ~ Exp(1); Y = 0 with probability p, otherwise Y ~ Poisson(X).
Dataset gen_exp4(std::size_t n, double p, std::uint64_t seed);

struct FeatselData {
    Table features;  ///< n x p_total observed features
    Table target;    ///< n x q_relevant observed target
    std::vector<bool> relevant;
};

/// Latent X_1..X_p i.i.d. Exp(1), latent target (X_1..X_q). Each observed
/// feature is 0 with probability `dropout`, else Poisson(X_i); each target
/// coordinate is 0 with probability `dropout`, else drawn per `target_noise`.
FeatselData gen_featsel(std::size_t n, int p_total, int q_relevant, double dropout, std::uint64_t seed,
                        TargetNoise target_noise = TargetNoise::exponential);

/// Replaces each entry by 0 independently with probability `level`.
Table apply_dropout(const Table& table, double level, std::uint64_t seed);

/// Generates an (X, Y) dataset for exp1..exp4. featsel has no single dataset.
Dataset generate(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed);

GroundTruth ground_truth(const GeneratorSpec& spec);

/// log m - (m-1) log 2 / m
double exp2_ground_truth(int m);

/// (1-p)(2 log 2 - gamma - sum_k log k 2^-k), series truncated after `terms`
/// terms, or once terms drop below 1e-20 when `terms` is 0.
double exp4_ground_truth(double p, std::size_t terms = 0);

/// Tail bound for the exp4 series after `terms` terms.
double exp4_truncation_bound(std::size_t terms);

/// exp1 ground truth with the Gaussian part integrated by composite Simpson.
double exp1_ground_truth_quadrature(double half_width = 12.0, std::size_t intervals = 2400);

struct MonteCarloValue {
    double value;
    double std_error;
};

/// exp1 ground truth as the sample mean of the log density ratio over draws
/// from the mixture.
MonteCarloValue exp1_ground_truth_monte_carlo(std::size_t samples, std::uint64_t seed);

}  // namespace mimix
