#include "mimix/eval.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "mimix/rng.hpp"

namespace mimix {

std::uint64_t SweepResult::trial_seed(std::uint64_t master, std::size_t size_index, std::size_t trial) {
    return derive_seed(master, {0, size_index, trial});
}

std::uint64_t SweepResult::estimator_seed(std::uint64_t master, std::size_t size_index, std::size_t trial) {
    return derive_seed(master, {1, size_index, trial});
}

SweepResult mse_sweep(const EstimatorSpec& estimator, const GeneratorSpec& generator,
                      const std::vector<std::size_t>& sizes, std::size_t trials, std::uint64_t master_seed) {
    if (trials < 1) throw ParameterError("trials must be >= 1");
    if (sizes.empty()) throw ParameterError("at least one sample size is required");
    generator.validate();
    if (generator.name == GeneratorName::featsel) throw ParameterError("featsel is not a sweepable generator");
    const bool knn = estimator.kind == EstimatorKind::mixed || estimator.kind == EstimatorKind::ksg ||
                     estimator.kind == EstimatorKind::noisy_ksg;
    for (std::size_t n : sizes) {
        if (knn && n <= static_cast<std::size_t>(estimator.knn.k))
            throw ParameterError("sample size " + std::to_string(n) + " must exceed k");
    }
    if (estimator.kind == EstimatorKind::adaptive_partition && generator.name == GeneratorName::exp3)
        throw ParameterError("adaptive partitioning works only for one-dimensional X and Y");

    SweepResult result;
    result.estimator_name = estimator.label();
    result.generator = generator;
    result.ground_truth = ground_truth(generator).value;
    result.sample_sizes = sizes;
    result.trials = trials;
    result.master_seed = master_seed;
    result.estimates.assign(sizes.size(), std::vector<double>(trials, 0.0));

    parallel_for(sizes.size() * trials, [&](std::size_t job) {
        const std::size_t s = job / trials;
        const std::size_t t = job % trials;
        const Dataset data = generate(generator, sizes[s], SweepResult::trial_seed(master_seed, s, t));
        result.estimates[s][t] =
            run_estimator(estimator, data, SweepResult::estimator_seed(master_seed, s, t)).value;
    });

    for (const auto& row : result.estimates) {
        std::vector<double> sq(row.size()), err(row.size());
        for (std::size_t t = 0; t < row.size(); ++t) {
            err[t] = row[t] - result.ground_truth;
            sq[t] = err[t] * err[t];
        }
        result.mse_per_size.push_back(compensated_mean(sq));
        result.mean_bias_per_size.push_back(compensated_mean(err));
    }
    return result;
}

std::size_t count_increases(const std::vector<double>& values) {
    std::size_t n = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[i - 1]) ++n;
    return n;
}

std::vector<FeatureScore> rank_features(const Table& features, const Table& target, const EstimatorSpec& estimator,
                                        std::uint64_t seed) {
    if (features.cols() < 1) throw ParameterError("at least one feature is required");
    std::vector<FeatureScore> scores(features.cols());
    for (std::size_t f = 0; f < features.cols(); ++f) {
        const std::size_t col[] = {f};
        try {
            const Dataset d = validate_dataset(features.select_columns(col), target);
            scores[f] = {f, run_estimator(estimator, d, derive_seed(seed, {f})).value};
        } catch (const ParameterError& e) {
            throw ParameterError("feature " + std::to_string(f) + ": " + e.what());
        } catch (const InputError& e) {
            throw InputError("feature " + std::to_string(f) + ": " + e.what());
        }
    }
    std::stable_sort(scores.begin(), scores.end(), [](const FeatureScore& a, const FeatureScore& b) {
        return a.score > b.score;
    });
    return scores;
}

RocCurve roc_curve(const std::vector<double>& scores, const std::vector<bool>& labels) {
    if (scores.size() != labels.size()) throw ParameterError("scores and labels differ in length");
    const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
    const std::size_t negatives = labels.size() - positives;
    if (positives == 0 || negatives == 0)
        throw ParameterError("ROC needs at least one positive and one negative label");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve{{0.0, 0.0}};
    std::size_t tp = 0, fp = 0;
    for (std::size_t s = 0; s < order.size();) {
        std::size_t e = s;
        while (e < order.size() && scores[order[e]] == scores[order[s]]) {
            labels[order[e]] ? ++tp : ++fp;
            ++e;
        }
        curve.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                         static_cast<double>(tp) / static_cast<double>(positives)});
        s = e;
    }
    return curve;
}

double auroc(const RocCurve& curve) {
    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i)
        area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) / 2.0;
    return std::clamp(area, 0.0, 1.0);
}

}  // namespace mimix
