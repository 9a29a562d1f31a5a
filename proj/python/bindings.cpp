#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "mimix/eval.hpp"
#include "mimix/estimators.hpp"
#include "mimix/specfun.hpp"
#include "mimix/synthgen.hpp"

namespace py = pybind11;
using namespace mimix;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Table to_table(const Array& a, const char* what) {
    if (a.ndim() == 1) return Table(static_cast<std::size_t>(a.shape(0)), 1, {a.data(), a.data() + a.size()});
    if (a.ndim() == 2)
        return Table(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)),
                     {a.data(), a.data() + a.size()});
    throw InputError(std::string(what) + " must be a 1-D or 2-D array");
}

py::array_t<double> to_array(const Table& t) {
    py::array_t<double> out({t.rows(), t.cols()});
    std::copy(t.data().begin(), t.data().end(), out.mutable_data());
    return out;
}

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(v.size());
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

EstimatorSpec make_spec(const std::string& estimator, std::size_t k, const std::string& norm, double atom_tolerance,
                        double sigma, int bins, double significance, int min_cell) {
    EstimatorSpec spec;
    spec.kind = parse_estimator_kind(estimator);
    spec.knn.k = k;
    spec.knn.within_norm = parse_within_norm(norm);
    spec.knn.atom_tolerance = atom_tolerance;
    spec.noise_sigma = sigma;
    spec.partition.bins_per_dim = bins;
    spec.partition.significance = significance;
    spec.partition.min_cell = min_cell;
    return spec;
}

GeneratorSpec make_generator(const std::string& name, int m, int dims, double p) {
    GeneratorSpec g;
    g.name = parse_generator_name(name);
    g.m = m;
    g.dims = dims;
    g.p = p;
    g.validate();
    return g;
}

#define MIMIX_ESTIMATOR_ARGS                                                                                     \
    py::arg("estimator") = "mixed", py::arg("k") = 5, py::arg("norm") = "max", py::arg("atom_tolerance") = 0.0, \
        py::arg("sigma") = 0.1, py::arg("bins") = 8, py::arg("significance") = 0.05, py::arg("min_cell") = 4

}  // namespace

PYBIND11_MODULE(_mimix, m) {
    m.doc() = "Mutual information estimators for discrete, continuous and mixed data.";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

    py::class_<MiEstimate>(m, "Estimate")
        .def_readonly("value", &MiEstimate::value)
        .def_readonly("estimator", &MiEstimate::estimator_name)
        .def_property_readonly("per_sample", [](const MiEstimate& e) { return to_array(e.per_sample); })
        .def_property_readonly("config",
                               [](const MiEstimate& e) {
                                   py::dict d;
                                   for (const auto& [key, value] : e.config_echo) d[py::str(key)] = value;
                                   return d;
                               })
        .def("__float__", [](const MiEstimate& e) { return e.value; })
        .def("__repr__", [](const MiEstimate& e) {
            return "Estimate(" + e.estimator_name + ", value=" + std::to_string(e.value) + ")";
        });

    m.def(
        "estimate",
        [](const Array& x, const Array& y, const std::string& estimator, std::size_t k, const std::string& norm,
           double atom_tolerance, double sigma, int bins, double significance, int min_cell, std::uint64_t seed) {
            const EstimatorSpec spec = make_spec(estimator, k, norm, atom_tolerance, sigma, bins, significance, min_cell);
            const Dataset d = validate_dataset(to_table(x, "x"), to_table(y, "y"));
            py::gil_scoped_release release;
            return run_estimator(spec, d, seed);
        },
        py::arg("x"), py::arg("y"), MIMIX_ESTIMATOR_ARGS, py::arg("seed") = 0,
        "Estimate I(X;Y) in nats. Rows are samples; 1-D arrays are single columns.");

    m.def(
        "neighbor_profiles",
        [](const Array& x, const Array& y, std::size_t k, const std::string& norm, double atom_tolerance) {
            EstimatorConfig config;
            config.k = k;
            config.within_norm = parse_within_norm(norm);
            config.atom_tolerance = atom_tolerance;
            const Dataset d = validate_dataset(to_table(x, "x"), to_table(y, "y"));
            config.validate_for(d.n());
            const auto profiles = neighbor_profiles(build_index(d, config), k, true);
            py::dict out;
            std::vector<double> rho, k_tilde, n_x, n_y;
            for (const auto& p : profiles) {
                rho.push_back(p.rho);
                k_tilde.push_back(static_cast<double>(p.k_tilde));
                n_x.push_back(static_cast<double>(p.n_x));
                n_y.push_back(static_cast<double>(p.n_y));
            }
            out["rho"] = to_array(rho);
            out["k_tilde"] = py::array_t<std::int64_t>(to_array(k_tilde));
            out["n_x"] = py::array_t<std::int64_t>(to_array(n_x));
            out["n_y"] = py::array_t<std::int64_t>(to_array(n_y));
            return out;
        },
        py::arg("x"), py::arg("y"), py::arg("k") = 5, py::arg("norm") = "max", py::arg("atom_tolerance") = 0.0);

    m.def("digamma", py::overload_cast<double>(&digamma), py::arg("x"));

    m.def(
        "generate",
        [](const std::string& name, std::size_t n, std::uint64_t seed, int m_levels, int dims, double p) {
            const Dataset d = generate(make_generator(name, m_levels, dims, p), n, seed);
            return py::make_tuple(to_array(d.x()), to_array(d.y()));
        },
        py::arg("name"), py::arg("n"), py::arg("seed"), py::arg("m") = 5, py::arg("dims") = 2, py::arg("p") = 0.0,
        "Sample (X, Y) from exp1..exp4.");

    m.def(
        "featsel",
        [](std::size_t n, std::uint64_t seed, int p_total, int q_relevant, double dropout,
           const std::string& target_noise) {
            TargetNoise noise;
            if (target_noise == "exp")
                noise = TargetNoise::exponential;
            else if (target_noise == "poisson")
                noise = TargetNoise::poisson;
            else
                throw ParameterError("target_noise must be 'exp' or 'poisson'");
            const FeatselData d = gen_featsel(n, p_total, q_relevant, dropout, seed, noise);
            return py::make_tuple(to_array(d.features), to_array(d.target), d.relevant);
        },
        py::arg("n"), py::arg("seed"), py::arg("p_total") = 20, py::arg("q_relevant") = 5, py::arg("dropout") = 0.15,
        py::arg("target_noise") = "exp");

    m.def(
        "ground_truth",
        [](const std::string& name, int m_levels, int dims, double p) {
            const GroundTruth gt = ground_truth(make_generator(name, m_levels, dims, p));
            py::dict out;
            out["value"] = gt.value;
            out["provenance"] = to_string(gt.provenance);
            out["error_bound"] = gt.error_bound;
            return out;
        },
        py::arg("name"), py::arg("m") = 5, py::arg("dims") = 2, py::arg("p") = 0.0);

    m.def(
        "roc_curve",
        [](const std::vector<double>& scores, const std::vector<bool>& labels) {
            const RocCurve curve = roc_curve(scores, labels);
            std::vector<double> fpr, tpr;
            for (const auto& pt : curve) {
                fpr.push_back(pt.fpr);
                tpr.push_back(pt.tpr);
            }
            return py::make_tuple(to_array(fpr), to_array(tpr));
        },
        py::arg("scores"), py::arg("labels"));

    m.def(
        "auroc",
        [](const std::vector<double>& scores, const std::vector<bool>& labels) {
            return auroc(roc_curve(scores, labels));
        },
        py::arg("scores"), py::arg("labels"));

    m.def(
        "rank_features",
        [](const Array& features, const Array& target, const std::string& estimator, std::size_t k,
           const std::string& norm, double atom_tolerance, double sigma, int bins, double significance, int min_cell,
           std::uint64_t seed) {
            const EstimatorSpec spec = make_spec(estimator, k, norm, atom_tolerance, sigma, bins, significance, min_cell);
            const Table f = to_table(features, "features");
            const Table t = to_table(target, "target");
            std::vector<FeatureScore> ranking;
            {
                py::gil_scoped_release release;
                ranking = rank_features(f, t, spec, seed);
            }
            py::list out;
            for (const auto& fs : ranking) out.append(py::make_tuple(fs.index, fs.score));
            return out;
        },
        py::arg("features"), py::arg("target"), MIMIX_ESTIMATOR_ARGS, py::arg("seed") = 0,
        "(feature index, score) pairs by descending score.");

    m.def(
        "mse_sweep",
        [](const std::string& generator, const std::vector<std::size_t>& sizes, std::size_t trials, std::uint64_t seed,
           int m_levels, int dims, double p, const std::string& estimator, std::size_t k, const std::string& norm,
           double atom_tolerance, double sigma, int bins, double significance, int min_cell) {
            const EstimatorSpec spec = make_spec(estimator, k, norm, atom_tolerance, sigma, bins, significance, min_cell);
            const GeneratorSpec g = make_generator(generator, m_levels, dims, p);
            SweepResult r;
            {
                py::gil_scoped_release release;
                r = mse_sweep(spec, g, sizes, trials, seed);
            }
            py::dict out;
            out["estimator"] = r.estimator_name;
            out["ground_truth"] = r.ground_truth;
            out["sizes"] = r.sample_sizes;
            out["mse"] = to_array(r.mse_per_size);
            out["bias"] = to_array(r.mean_bias_per_size);
            Table est(r.estimates.size(), r.trials);
            for (std::size_t s = 0; s < r.estimates.size(); ++s)
                for (std::size_t t = 0; t < r.trials; ++t) est(s, t) = r.estimates[s][t];
            out["estimates"] = to_array(est);
            return out;
        },
        py::arg("generator"), py::arg("sizes"), py::arg("trials"), py::arg("seed"), py::arg("m") = 5,
        py::arg("dims") = 2, py::arg("p") = 0.0, MIMIX_ESTIMATOR_ARGS);

    m.attr("__version__") = MIMIX_VERSION;
}
