#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mimix/estimators.hpp"
#include "mimix/synthgen.hpp"

namespace mimix {

struct SweepResult {
    std::string estimator_name;
    GeneratorSpec generator;
    double ground_truth = 0.0;
    std::vector<std::size_t> sample_sizes;
    std::size_t trials = 0;
    std::vector<double> mse_per_size;
    std::vector<double> mean_bias_per_size;
    /// Raw estimates, [size][trial].
    std::vector<std::vector<double>> estimates;
    std::uint64_t master_seed = 0;

    /// Data seed for (size index, trial); shared by every estimator in a benchmark.
    static std::uint64_t trial_seed(std::uint64_t master, std::size_t size_index, std::size_t trial);
    /// Seed for the estimator's own randomness (noisy KSG) on that trial.
    static std::uint64_t estimator_seed(std::uint64_t master, std::size_t size_index, std::size_t trial);
};

/// Runs `trials` independent generate-then-estimate rounds per sample size.
/// Trials may run concurrently; results land in position-indexed slots.
SweepResult mse_sweep(const EstimatorSpec& estimator, const GeneratorSpec& generator,
                      const std::vector<std::size_t>& sizes, std::size_t trials, std::uint64_t master_seed);

/// Number of i with values[i+1] > values[i].
std::size_t count_increases(const std::vector<double>& values);

struct FeatureScore {
    std::size_t index;
    double score;
};

/// Scores each column of `features` against `target`, ordered by descending
/// score with ties broken by ascending index.
std::vector<FeatureScore> rank_features(const Table& features, const Table& target, const EstimatorSpec& estimator,
                                        std::uint64_t seed = 0);

struct RocPoint {
    double fpr;
    double tpr;
    friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

using RocCurve = std::vector<RocPoint>;

/// Sweeps the selection threshold down the score order; equal scores enter together.
RocCurve roc_curve(const std::vector<double>& scores, const std::vector<bool>& labels);

/// Trapezoidal area under the curve.
double auroc(const RocCurve& curve);

}  // namespace mimix
