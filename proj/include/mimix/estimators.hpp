#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mimix/core.hpp"
#include "mimix/neighbors.hpp"

namespace mimix {

struct PartitionConfig {
    int bins_per_dim = 8;
    double significance = 0.05;
    int min_cell = 4;

    void validate() const;
};

struct NoiseConfig {
    double sigma = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Per-sample neighbor profiles for every point of the dataset, in index order.
std::vector<NeighborProfile> neighbor_profiles(const DistanceOracle& oracle, std::size_t k, bool detect_atoms);

/// psi(k_tilde) + log N - log(n_x + 1) - log(n_y + 1)
double mixed_term(const NeighborProfile& profile, std::size_t n);

/// Mean of the per-sample terms built from precomputed profiles.
MiEstimate estimate_from_profiles(const std::vector<NeighborProfile>& profiles, std::string name);

/// Nearest-neighbor estimator for arbitrary discrete-continuous mixtures:
/// samples whose k-th neighbor radius is zero use the coincidence count in
/// place of k.
MiEstimate estimate_mixed(const Dataset& dataset, const EstimatorConfig& config,
                          IndexBackend backend = IndexBackend::automatic);

/// KSG estimator in log form: psi(k) + log N - log(n_x+1) - log(n_y+1).
MiEstimate estimate_ksg(const Dataset& dataset, const EstimatorConfig& config,
                        IndexBackend backend = IndexBackend::automatic);

/// Copy of the dataset with N(0, sigma^2) noise added to every coordinate,
/// drawn row by row, X coordinates then Y coordinates.
Dataset add_gaussian_noise(const Dataset& dataset, const NoiseConfig& noise);

/// KSG after adding N(0, sigma^2) noise to every coordinate of X and Y.
/// The input dataset is not modified.
MiEstimate estimate_noisy_ksg(const Dataset& dataset, const EstimatorConfig& config, const NoiseConfig& noise);

/// Plug-in MI over equal-width bins spanning each dimension's [min, max].
MiEstimate estimate_fixed_partition(const Dataset& dataset, const PartitionConfig& part);

/// Recursive median-split partitioning with a chi-square stopping rule.
/// One-dimensional X and Y only.
MiEstimate estimate_adaptive_partition(const Dataset& dataset, const PartitionConfig& part);

/// Plug-in MI of the exact joint value table (each distinct row is a cell).
double plugin_mi_exact(const Dataset& dataset);

/// ceil(N^(1/3)): a neighbor order that grows with N while k log N / N -> 0.
int k_schedule(std::size_t n);

/// Which estimator to run, with its parameters.
enum class EstimatorKind { mixed, ksg, noisy_ksg, fixed_partition, adaptive_partition };

std::string to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(const std::string& name);

struct EstimatorSpec {
    EstimatorKind kind = EstimatorKind::mixed;
    EstimatorConfig knn;
    PartitionConfig partition;
    double noise_sigma = 0.1;

    /// Short label such as "mixed" or "noisy_ksg(sigma=0.5)".
    std::string label() const;
};

/// Runs the configured estimator. `seed` feeds the noisy variant only.
MiEstimate run_estimator(const EstimatorSpec& spec, const Dataset& dataset, std::uint64_t seed = 0);

}  // namespace mimix
