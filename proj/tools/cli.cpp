#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <ctime>
#include <map>
#include <optional>

#include "mimix/estimators.hpp"
#include "mimix/eval.hpp"
#include "mimix/io.hpp"
#include "mimix/rng.hpp"
#include "mimix/synthgen.hpp"

#ifndef MIMIX_VERSION
#define MIMIX_VERSION "0.0.0"
#endif

namespace mimix::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct EstimatorOptions {
    std::string est = "mixed";
    int k = 5;
    std::string norm = "max";
    double atom_tolerance = 0.0;
    double sigma = 0.1;
    int bins = 8;
    double significance = 0.05;
    int min_cell = 4;
};

void add_estimator_options(CLI::App* app, EstimatorOptions& o, bool single = true) {
    if (single) app->add_option("--est", o.est, "mixed | ksg | noisy_ksg | partition | adaptive");
    app->add_option("--k", o.k, "neighbor order");
    app->add_option("--norm", o.norm, "within-space norm: max | euclidean");
    app->add_option("--atom-tol", o.atom_tolerance, "distance treated as coincidence");
    app->add_option("--sigma", o.sigma, "noise std for noisy_ksg");
    app->add_option("--bins", o.bins, "bins per dimension for partition");
    app->add_option("--significance", o.significance, "split test level for adaptive");
    app->add_option("--min-cell", o.min_cell, "recursion floor for adaptive");
}

EstimatorSpec make_spec(const EstimatorOptions& o, const std::string& name) {
    EstimatorSpec spec;
    spec.kind = parse_estimator_kind(name);
    spec.knn.k = o.k;
    spec.knn.within_norm = parse_within_norm(o.norm);
    spec.knn.atom_tolerance = o.atom_tolerance;
    spec.knn.validate();
    spec.partition = {o.bins, o.significance, o.min_cell};
    spec.partition.validate();
    spec.noise_sigma = o.sigma;
    NoiseConfig{o.sigma, 0}.validate();
    return spec;
}

json estimator_json(const EstimatorOptions& o) {
    return json{{"k", o.k},           {"norm", o.norm},     {"atom_tolerance", o.atom_tolerance},
                {"sigma", o.sigma},   {"bins", o.bins},     {"significance", o.significance},
                {"min_cell", o.min_cell}};
}

struct GeneratorOptions {
    int m = 5;
    int dims = 2;
    double p = 0.0;
    double dropout = 0.15;
    int p_total = 20;
    int q_relevant = 5;
    std::string target_noise = "exp";
};

void add_generator_options(CLI::App* app, GeneratorOptions& g) {
    app->add_option("--m", g.m, "levels of the discrete component (exp2, exp3)");
    app->add_option("--dims", g.dims, "pairs in exp3 (2 or 3)");
    app->add_option("--p", g.p, "zero-inflation probability (exp4)");
    app->add_option("--dropout", g.dropout, "dropout probability (featsel)");
    app->add_option("--p-total", g.p_total, "feature count (featsel)");
    app->add_option("--q-relevant", g.q_relevant, "relevant feature count (featsel)");
    app->add_option("--target-noise", g.target_noise, "featsel target observation: exp | poisson");
}

TargetNoise parse_target_noise(const std::string& s) {
    if (s == "exp" || s == "exponential") return TargetNoise::exponential;
    if (s == "poisson") return TargetNoise::poisson;
    throw ParameterError("unknown target noise '" + s + "' (expected exp or poisson)");
}

GeneratorSpec make_generator(const std::string& name, const GeneratorOptions& g, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.name = parse_generator_name(name);
    spec.m = g.m;
    spec.dims = g.dims;
    spec.p = g.p;
    spec.dropout = g.dropout;
    spec.p_total = g.p_total;
    spec.q_relevant = g.q_relevant;
    spec.target_noise = parse_target_noise(g.target_noise);
    spec.seed = seed;
    spec.validate();
    return spec;
}

json generator_json(const GeneratorSpec& s) {
    json j{{"name", to_string(s.name)}, {"seed", s.seed}};
    switch (s.name) {
        case GeneratorName::exp1: break;
        case GeneratorName::exp2: j["m"] = s.m; break;
        case GeneratorName::exp3:
            j["m"] = s.m;
            j["dims"] = s.dims;
            break;
        case GeneratorName::exp4: j["p"] = s.p; break;
        case GeneratorName::featsel:
            j["dropout"] = s.dropout;
            j["p_total"] = s.p_total;
            j["q_relevant"] = s.q_relevant;
            j["target_noise"] = s.target_noise == TargetNoise::exponential ? "exp" : "poisson";
            break;
    }
    return j;
}

json ground_truth_json(const GroundTruth& gt) {
    return json{{"value", gt.value}, {"provenance", to_string(gt.provenance)}, {"error_bound", gt.error_bound}};
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

/// Everything needed to rerun a command: its argv plus the resolved parameters.
json make_manifest(const std::string& command, const std::vector<std::string>& args, json parameters,
                   std::optional<std::uint64_t> seed, const std::vector<std::string>& inputs) {
    json digests = json::object();
    for (const auto& in : inputs) digests[in] = io::file_digest(in);
    json m{{"command", command},
           {"argv", args},
           {"parameters", std::move(parameters)},
           {"artifact_version", MIMIX_VERSION},
           {"input_digests", std::move(digests)},
           {"timestamp", utc_timestamp()}};
    m["master_seed"] = seed ? json(*seed) : json(nullptr);
    return m;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

fs::path with_suffix(const fs::path& base, const std::string& suffix) {
    fs::path p = base;
    if (p.has_extension()) p.replace_extension();
    p += suffix;
    return p;
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t count) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < count; ++i) names.push_back(prefix + std::to_string(i));
    return names;
}

Table hstack(const Table& a, const Table& b) {
    Table out(a.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
        for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
    }
    return out;
}

std::vector<std::size_t> iota_cols(std::size_t begin, std::size_t count) {
    std::vector<std::size_t> cols(count);
    for (std::size_t i = 0; i < count; ++i) cols[i] = begin + i;
    return cols;
}

json roc_json(const RocCurve& curve) {
    json pts = json::array();
    for (const auto& p : curve) pts.push_back({p.fpr, p.tpr});
    return pts;
}

std::string roc_csv(const RocCurve& curve) {
    std::string s = "fpr,tpr\n";
    for (const auto& p : curve) s += io::format_double(p.fpr) + "," + io::format_double(p.tpr) + "\n";
    return s;
}

void check_estimate(const MiEstimate& est) {
    if (!std::isfinite(est.value)) throw InvariantError("estimate is not finite");
    if (!est.per_sample.empty() && std::fabs(est.value - compensated_mean(est.per_sample)) > 1e-12)
        throw InvariantError("estimate differs from the mean of its per-sample terms");
}

// ---------------------------------------------------------------------------

struct EstimateCmd {
    EstimatorOptions est;
    std::string input;
    std::string x_cols, y_cols;
    std::uint64_t seed = 0;
    bool clip_zero = false;
};

int do_estimate(const EstimateCmd& c, const std::vector<std::string>& args, std::ostream& out) {
    const EstimatorSpec spec = make_spec(c.est, c.est.est);
    const auto xs = io::parse_column_spec(c.x_cols);
    const auto ys = io::parse_column_spec(c.y_cols);
    const io::CsvTable table = io::read_csv(c.input);
    for (auto col : xs)
        if (col >= table.values.cols()) throw ParameterError("--x-cols index " + std::to_string(col) + " out of range");
    for (auto col : ys)
        if (col >= table.values.cols()) throw ParameterError("--y-cols index " + std::to_string(col) + " out of range");
    const Dataset data = validate_dataset(table.values.select_columns(xs), table.values.select_columns(ys));
    const MiEstimate est = run_estimator(spec, data, c.seed);
    check_estimate(est);

    json config = json::object();
    for (const auto& [key, value] : est.config_echo) config[key] = value;
    json result{{"value", c.clip_zero ? std::max(0.0, est.value) : est.value},
                {"estimator", est.estimator_name},
                {"config", config},
                {"n", data.n()}};
    if (c.clip_zero) result["raw_value"] = est.value;
    json params = estimator_json(c.est);
    params["est"] = c.est.est;
    params["x_cols"] = c.x_cols;
    params["y_cols"] = c.y_cols;
    result["manifest"] = make_manifest("estimate", args, params, c.seed, {c.input});
    out << dump(result);
    return exit_ok;
}

struct GenCmd {
    std::string name;
    GeneratorOptions gen;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string output;
};

int do_gen(const GenCmd& c, const std::vector<std::string>& args, std::ostream& out) {
    const GeneratorSpec spec = make_generator(c.name, c.gen, c.seed);
    if (c.n < 1) throw ParameterError("--n must be >= 1");
    json report{{"generator", generator_json(spec)}, {"n", c.n}, {"output", c.output}};
    if (spec.name == GeneratorName::featsel) {
        const FeatselData d = gen_featsel(c.n, spec.p_total, spec.q_relevant, spec.dropout, c.seed, spec.target_noise);
        auto header = numbered("f", d.features.cols());
        const auto t = numbered("t", d.target.cols());
        header.insert(header.end(), t.begin(), t.end());
        io::write_file_atomic(c.output, io::to_csv(header, hstack(d.features, d.target)));
        report["feature_cols"] = io::format_column_spec(iota_cols(0, d.features.cols()));
        report["target_cols"] = io::format_column_spec(iota_cols(d.features.cols(), d.target.cols()));
        report["relevant_cols"] = io::format_column_spec(iota_cols(0, static_cast<std::size_t>(spec.q_relevant)));
    } else {
        const Dataset d = generate(spec, c.n, c.seed);
        auto header = numbered("x", d.x_dim());
        const auto y = numbered("y", d.y_dim());
        header.insert(header.end(), y.begin(), y.end());
        io::write_file_atomic(c.output, io::to_csv(header, hstack(d.x(), d.y())));
        report["x_cols"] = io::format_column_spec(iota_cols(0, d.x_dim()));
        report["y_cols"] = io::format_column_spec(iota_cols(d.x_dim(), d.y_dim()));
        report["ground_truth"] = ground_truth_json(ground_truth(spec));
    }
    json params = generator_json(spec);
    params["n"] = c.n;
    io::write_file_atomic(with_suffix(c.output, ".manifest.json"),
                          dump(make_manifest("gen", args, params, c.seed, {})));
    out << dump(report);
    return exit_ok;
}

struct BenchmarkCmd {
    std::string name;
    GeneratorOptions gen;
    EstimatorOptions est;
    std::vector<std::string> estimators{"mixed"};
    std::vector<std::size_t> sizes{500, 1000, 2000, 4000};
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::string output;
};

int do_benchmark(const BenchmarkCmd& c, const std::vector<std::string>& args, std::ostream& out) {
    const GeneratorSpec gspec = make_generator(c.name, c.gen, c.seed);
    std::vector<EstimatorSpec> specs;
    for (const auto& e : c.estimators) specs.push_back(make_spec(c.est, e));

    std::string csv = "estimator,n,trials,mse,bias,ground_truth\n";
    json sweeps = json::array();
    for (const auto& spec : specs) {
        const SweepResult r = mse_sweep(spec, gspec, c.sizes, c.trials, c.seed);
        for (std::size_t s = 0; s < r.sample_sizes.size(); ++s) {
            csv += r.estimator_name + "," + std::to_string(r.sample_sizes[s]) + "," + std::to_string(r.trials) + "," +
                   io::format_double(r.mse_per_size[s]) + "," + io::format_double(r.mean_bias_per_size[s]) + "," +
                   io::format_double(r.ground_truth) + "\n";
        }
        sweeps.push_back({{"estimator", r.estimator_name},
                          {"generator", generator_json(r.generator)},
                          {"ground_truth", r.ground_truth},
                          {"sample_sizes", r.sample_sizes},
                          {"trials", r.trials},
                          {"mse_per_size", r.mse_per_size},
                          {"mean_bias_per_size", r.mean_bias_per_size},
                          {"estimates", r.estimates},
                          {"master_seed", r.master_seed}});
    }
    io::write_file_atomic(c.output, csv);
    io::write_file_atomic(with_suffix(c.output, ".json"), dump(sweeps));
    json params = estimator_json(c.est);
    params["estimators"] = c.estimators;
    params["generator"] = generator_json(gspec);
    params["sizes"] = c.sizes;
    params["trials"] = c.trials;
    io::write_file_atomic(with_suffix(c.output, ".manifest.json"),
                          dump(make_manifest("benchmark", args, params, c.seed, {})));
    out << csv;
    return exit_ok;
}

struct SelectCmd {
    EstimatorOptions est;
    GeneratorOptions gen;
    bool featsel = false;
    std::size_t n = 5000;
    std::string input;
    std::string feature_cols, target_cols, relevant_cols;
    std::uint64_t seed = 0;
    std::string output;
};

int do_select(const SelectCmd& c, const std::vector<std::string>& args, std::ostream& out) {
    const EstimatorSpec spec = make_spec(c.est, c.est.est);
    Table features, target;
    std::optional<std::vector<bool>> relevant;
    std::vector<std::string> inputs;
    json params = estimator_json(c.est);
    params["est"] = c.est.est;
    if (c.featsel == !c.input.empty()) throw ParameterError("give exactly one of --featsel or --input");
    if (c.featsel) {
        const GeneratorSpec g = make_generator("featsel", c.gen, c.seed);
        FeatselData d = gen_featsel(c.n, g.p_total, g.q_relevant, g.dropout, derive_seed(c.seed, {0}), g.target_noise);
        features = std::move(d.features);
        target = std::move(d.target);
        relevant = std::move(d.relevant);
        params["generator"] = generator_json(g);
        params["n"] = c.n;
    } else {
        if (c.feature_cols.empty() || c.target_cols.empty())
            throw ParameterError("--input requires --feature-cols and --target-cols");
        const io::CsvTable t = io::read_csv(c.input);
        const auto fc = io::parse_column_spec(c.feature_cols);
        const auto tc = io::parse_column_spec(c.target_cols);
        for (auto col : fc)
            if (col >= t.values.cols()) throw ParameterError("--feature-cols index out of range");
        for (auto col : tc)
            if (col >= t.values.cols()) throw ParameterError("--target-cols index out of range");
        features = t.values.select_columns(fc);
        target = t.values.select_columns(tc);
        validate_dataset(features, target);
        if (!c.relevant_cols.empty()) {
            relevant = std::vector<bool>(fc.size(), false);
            for (auto col : io::parse_column_spec(c.relevant_cols)) {
                const auto it = std::find(fc.begin(), fc.end(), col);
                if (it == fc.end()) throw ParameterError("--relevant-cols must be a subset of --feature-cols");
                (*relevant)[static_cast<std::size_t>(it - fc.begin())] = true;
            }
        }
        inputs.push_back(c.input);
        params["feature_cols"] = c.feature_cols;
        params["target_cols"] = c.target_cols;
        params["relevant_cols"] = c.relevant_cols;
    }

    const auto ranking = rank_features(features, target, spec, derive_seed(c.seed, {1}));
    std::string ranking_csv = "rank,feature,score" + std::string(relevant ? ",relevant" : "") + "\n";
    json ranked = json::array();
    for (std::size_t r = 0; r < ranking.size(); ++r) {
        const auto& fs_ = ranking[r];
        ranking_csv += std::to_string(r) + "," + std::to_string(fs_.index) + "," + io::format_double(fs_.score);
        json row{{"feature", fs_.index}, {"score", fs_.score}};
        if (relevant) {
            ranking_csv += (*relevant)[fs_.index] ? ",1" : ",0";
            row["relevant"] = static_cast<bool>((*relevant)[fs_.index]);
        }
        ranking_csv += "\n";
        ranked.push_back(row);
    }
    json report{{"estimator", spec.label()}, {"ranking", ranked}};
    const fs::path base = c.output;
    io::write_file_atomic(with_suffix(base, ".ranking.csv"), ranking_csv);
    if (relevant) {
        std::vector<double> scores(features.cols());
        for (const auto& fs_ : ranking) scores[fs_.index] = fs_.score;
        const RocCurve curve = roc_curve(scores, *relevant);
        report["roc"] = roc_json(curve);
        report["auroc"] = auroc(curve);
        io::write_file_atomic(with_suffix(base, ".roc.csv"), roc_csv(curve));
    }
    io::write_file_atomic(with_suffix(base, ".json"), dump(report));
    io::write_file_atomic(with_suffix(base, ".manifest.json"),
                          dump(make_manifest("select", args, params, c.seed, inputs)));
    out << dump(report);
    return exit_ok;
}

struct NetinferCmd {
    EstimatorOptions est;
    std::string expr, gold;
    double dropout = 0.0;
    std::uint64_t seed = 0;
    std::string output;
};

int do_netinfer(const NetinferCmd& c, const std::vector<std::string>& args, std::ostream& out) {
    const EstimatorSpec spec = make_spec(c.est, c.est.est);
    if (!(c.dropout >= 0.0 && c.dropout < 1.0)) throw ParameterError("--dropout must lie in [0, 1)");
    const io::CsvTable expr = io::read_csv(c.expr);
    const std::size_t genes = expr.values.cols();
    if (genes < 3) throw InputError("expression matrix needs at least 3 genes, got " + std::to_string(genes));
    if (expr.values.rows() < 2) throw InputError("expression matrix needs at least 2 samples");
    validate_dataset(expr.values, expr.values);

    const io::CsvTable gold = io::read_csv(c.gold);
    if (gold.values.cols() != 3) throw InputError("gold standard must have columns gene_a,gene_b,label");
    std::map<std::pair<std::size_t, std::size_t>, bool> truth;
    for (std::size_t r = 0; r < gold.values.rows(); ++r) {
        auto as_index = [&](double v, const char* what) {
            if (!(v >= 0.0) || v != std::floor(v) || v >= static_cast<double>(genes))
                throw InputError("gold standard row " + std::to_string(r) + ": " + what + " references unknown gene " +
                                 io::format_double(v));
            return static_cast<std::size_t>(v);
        };
        const std::size_t a = as_index(gold.values(r, 0), "gene_a");
        const std::size_t b = as_index(gold.values(r, 1), "gene_b");
        const double label = gold.values(r, 2);
        if (label != 0.0 && label != 1.0) throw InputError("gold standard row " + std::to_string(r) + ": label must be 0 or 1");
        if (a == b) throw InputError("gold standard row " + std::to_string(r) + ": self edge");
        truth[{std::min(a, b), std::max(a, b)}] = label == 1.0;
    }

    const Table observed = apply_dropout(expr.values, c.dropout, derive_seed(c.seed, {0}));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < genes; ++a)
        for (std::size_t b = a + 1; b < genes; ++b) pairs.emplace_back(a, b);
    std::vector<double> scores(pairs.size());
    std::vector<bool> labels(pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto it = truth.find(pairs[p]);
        labels[p] = it != truth.end() && it->second;
    }
    parallel_for(pairs.size(), [&](std::size_t p) {
        const std::size_t ca[] = {pairs[p].first};
        const std::size_t cb[] = {pairs[p].second};
        const Dataset d = validate_dataset(observed.select_columns(ca), observed.select_columns(cb));
        scores[p] = run_estimator(spec, d, derive_seed(c.seed, {1, p})).value;
    });

    std::string pairs_csv = "gene_a,gene_b,score,label\n";
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        pairs_csv += std::to_string(pairs[p].first) + "," + std::to_string(pairs[p].second) + "," +
                     io::format_double(scores[p]) + "," + (labels[p] ? "1" : "0") + "\n";
    }
    const RocCurve curve = roc_curve(scores, labels);
    const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
    json report{{"auroc", auroc(curve)},   {"genes", genes},       {"samples", expr.values.rows()},
                {"pairs", pairs.size()},   {"positives", positives}, {"dropout", c.dropout},
                {"estimator", spec.label()}};
    const fs::path base = c.output;
    io::write_file_atomic(with_suffix(base, ".pairs.csv"), pairs_csv);
    io::write_file_atomic(with_suffix(base, ".roc.csv"), roc_csv(curve));
    io::write_file_atomic(with_suffix(base, ".json"), dump(report));
    json params = estimator_json(c.est);
    params["est"] = c.est.est;
    params["dropout"] = c.dropout;
    io::write_file_atomic(with_suffix(base, ".manifest.json"),
                          dump(make_manifest("netinfer", args, params, c.seed, {c.expr, c.gold})));
    out << dump(report);
    return exit_ok;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth);

int do_replay(const std::string& manifest_path, std::ostream& out, std::ostream& err, int depth) {
    if (depth > 0) throw ParameterError("a manifest cannot replay another manifest");
    json m;
    try {
        m = json::parse(io::read_file(manifest_path));
    } catch (const json::exception& e) {
        throw InputError("cannot parse manifest '" + manifest_path + "': " + e.what());
    }
    if (!m.contains("argv") || !m["argv"].is_array()) throw InputError("manifest has no argv array");
    if (m.value("artifact_version", "") != MIMIX_VERSION) {
        err << "warning: manifest was written by version " << m.value("artifact_version", "?") << ", running "
            << MIMIX_VERSION << "\n";
    }
    return dispatch(m["argv"].get<std::vector<std::string>>(), out, err, depth + 1);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
    CLI::App app{"Mutual information estimation for discrete, continuous and mixed data", "mimix"};
    app.require_subcommand(1);
    app.set_version_flag("--version", MIMIX_VERSION);

    EstimateCmd est_cmd;
    auto* estimate = app.add_subcommand("estimate", "estimate MI between column groups of a CSV file");
    add_estimator_options(estimate, est_cmd.est);
    estimate->add_option("--x-cols", est_cmd.x_cols, "X columns, e.g. 0-4")->required();
    estimate->add_option("--y-cols", est_cmd.y_cols, "Y columns")->required();
    estimate->add_option("--seed", est_cmd.seed, "seed for noisy_ksg");
    estimate->add_flag("--clip-zero", est_cmd.clip_zero, "report max(0, value)");
    estimate->add_option("input", est_cmd.input, "input CSV")->required();

    GenCmd gen_cmd;
    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset as CSV");
    gen->add_option("spec", gen_cmd.name, "exp1 | exp2 | exp3 | exp4 | featsel")->required();
    add_generator_options(gen, gen_cmd.gen);
    gen->add_option("--n", gen_cmd.n, "sample count")->required();
    gen->add_option("--seed", gen_cmd.seed, "seed")->required();
    gen->add_option("output", gen_cmd.output, "output CSV")->required();

    BenchmarkCmd bench_cmd;
    auto* bench = app.add_subcommand("benchmark", "MSE versus sample size over repeated trials");
    bench->add_option("spec", bench_cmd.name, "exp1 | exp2 | exp3 | exp4")->required();
    add_generator_options(bench, bench_cmd.gen);
    add_estimator_options(bench, bench_cmd.est, false);
    bench->add_option("--est", bench_cmd.estimators, "comma-separated estimators")->delimiter(',');
    bench->add_option("--sizes", bench_cmd.sizes, "comma-separated sample sizes")->delimiter(',');
    bench->add_option("--trials", bench_cmd.trials, "trials per size");
    bench->add_option("--seed", bench_cmd.seed, "master seed")->required();
    bench->add_option("output", bench_cmd.output, "output CSV")->required();

    SelectCmd sel_cmd;
    auto* select = app.add_subcommand("select", "rank features by MI with a target; ROC and AUROC");
    add_estimator_options(select, sel_cmd.est);
    add_generator_options(select, sel_cmd.gen);
    select->add_flag("--featsel", sel_cmd.featsel, "generate the feature-selection benchmark");
    select->add_option("--n", sel_cmd.n, "samples when generating");
    select->add_option("--input", sel_cmd.input, "input CSV");
    select->add_option("--feature-cols", sel_cmd.feature_cols, "feature columns of --input");
    select->add_option("--target-cols", sel_cmd.target_cols, "target columns of --input");
    select->add_option("--relevant-cols", sel_cmd.relevant_cols, "truly relevant feature columns (enables ROC)");
    select->add_option("--seed", sel_cmd.seed, "seed")->required();
    select->add_option("output", sel_cmd.output, "output path prefix")->required();

    NetinferCmd net_cmd;
    auto* net = app.add_subcommand("netinfer", "score gene pairs by MI under simulated dropout");
    add_estimator_options(net, net_cmd.est);
    net->add_option("--expr", net_cmd.expr, "expression CSV, samples x genes")->required();
    net->add_option("--gold", net_cmd.gold, "gold-standard edges CSV: gene_a,gene_b,label")->required();
    net->add_option("--dropout", net_cmd.dropout, "dropout level in [0, 1)");
    net->add_option("--seed", net_cmd.seed, "seed")->required();
    net->add_option("output", net_cmd.output, "output path prefix")->required();

    std::string manifest_path;
    auto* replay = app.add_subcommand("replay", "rerun the command recorded in a manifest");
    replay->add_option("manifest", manifest_path, "manifest JSON")->required();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForVersion&) {
        out << MIMIX_VERSION << "\n";
        return exit_ok;
    } catch (const CLI::Success&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_parameter_error;
    }

    if (*estimate) return do_estimate(est_cmd, args, out);
    if (*gen) return do_gen(gen_cmd, args, out);
    if (*bench) return do_benchmark(bench_cmd, args, out);
    if (*select) return do_select(sel_cmd, args, out);
    if (*net) return do_netinfer(net_cmd, args, out);
    if (*replay) return do_replay(manifest_path, out, err, depth);
    return exit_parameter_error;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err, 0);
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const ParameterError& e) {
        err << "parameter error: " << e.what() << "\n";
        return exit_parameter_error;
    } catch (const InvariantError& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_invariant_error;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_invariant_error;
    }
}

}  // namespace mimix::cli
