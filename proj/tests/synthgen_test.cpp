#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "mimix/estimators.hpp"
#include "mimix/specfun.hpp"
#include "mimix/synthgen.hpp"

namespace mimix {
namespace {

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

bool is_atom(double x, double y) { return (x == 1.0 || x == -1.0) && (y == 1.0 || y == -1.0); }

TEST(GenExp1, MixtureProportions) {
    const Dataset d = gen_exp1(100000, 1);
    std::size_t atoms = 0, at11 = 0;
    std::vector<double> cx, cy;
    for (std::size_t i = 0; i < d.n(); ++i) {
        const double x = d.x()(i, 0), y = d.y()(i, 0);
        if (is_atom(x, y)) {
            ++atoms;
            if (x == 1.0 && y == 1.0) ++at11;
        } else {
            cx.push_back(x);
            cy.push_back(y);
        }
    }
    EXPECT_NEAR(static_cast<double>(atoms) / 1e5, 0.5, 0.01);
    EXPECT_NEAR(static_cast<double>(at11) / static_cast<double>(atoms), 0.45, 0.01);
    EXPECT_NEAR(correlation(cx, cy), 0.9, 0.02);
}

TEST(GenExp2, SupportAndUniformMarginal) {
    const std::size_t n = 100000;
    const Dataset d = gen_exp2(n, 5, 2);
    std::vector<std::size_t> hist(5, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = d.x()(i, 0), y = d.y()(i, 0);
        ASSERT_EQ(x, std::floor(x));
        ASSERT_GE(x, 0.0);
        ASSERT_LE(x, 4.0);
        ASSERT_GE(y - x, 0.0);
        ASSERT_LE(y - x, 2.0);
        ++hist[static_cast<std::size_t>(x)];
    }
    // 3 sigma multinomial band around n/5.
    const double sd = std::sqrt(n * 0.2 * 0.8);
    for (std::size_t h : hist) EXPECT_NEAR(static_cast<double>(h), n / 5.0, 3 * sd);
    EXPECT_THROW(gen_exp2(10, 1, 0), ParameterError);
}

TEST(GenExp3, RoleSwappedSecondPairAndIndependentBlocks) {
    const Dataset d = gen_exp3(10000, 5, 2, 3);
    ASSERT_EQ(d.x_dim(), 2u);
    ASSERT_EQ(d.y_dim(), 2u);
    for (std::size_t i = 0; i < d.n(); ++i) {
        const double x1 = d.x()(i, 0), y1 = d.y()(i, 0), x2 = d.x()(i, 1), y2 = d.y()(i, 1);
        ASSERT_EQ(x1, std::floor(x1));
        ASSERT_EQ(y2, std::floor(y2));
        ASSERT_GE(y1 - x1, 0.0);
        ASSERT_LE(y1 - x1, 2.0);
        ASSERT_GE(x2 - y2, 0.0);
        ASSERT_LE(x2 - y2, 2.0);
    }
    // Blocks (X1, Y1) and (Y2, X2) are independent: discrete halves show no association.
    Table a(d.n(), 1), b(d.n(), 1);
    for (std::size_t i = 0; i < d.n(); ++i) {
        a(i, 0) = d.x()(i, 0);
        b(i, 0) = d.y()(i, 1);
    }
    EXPECT_LT(plugin_mi_exact(validate_dataset(a, b)), 0.01);
    const Dataset d3 = gen_exp3(100, 5, 3, 3);
    EXPECT_EQ(d3.x_dim(), 3u);
    EXPECT_THROW(gen_exp3(10, 5, 4, 0), ParameterError);
}

TEST(GenExp4, ZeroFractionAndSupport) {
    const Dataset d = gen_exp4(100000, 0.15, 4);
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < d.n(); ++i) {
        ASSERT_GT(d.x()(i, 0), 0.0);
        const double y = d.y()(i, 0);
        ASSERT_EQ(y, std::floor(y));
        if (y == 0.0) ++zeros;
    }
    // 0.15 + 0.85 * E[exp(-X)] = 0.15 + 0.85 / 2
    EXPECT_NEAR(static_cast<double>(zeros) / 1e5, 0.575, 0.01);
    EXPECT_THROW(gen_exp4(10, 1.0, 0), ParameterError);
    EXPECT_THROW(gen_exp4(10, -0.1, 0), ParameterError);
}

TEST(GenExp4, NoInflationIsPurePoissonization) {
    const Dataset d = gen_exp4(100000, 0.0, 5);
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < d.n(); ++i) zeros += d.y()(i, 0) == 0.0;
    EXPECT_NEAR(static_cast<double>(zeros) / 1e5, 0.5, 0.01);
}

TEST(GenFeatsel, ShapesMaskAndDropout) {
    const FeatselData d = gen_featsel(20000, 20, 5, 0.15, 6);
    EXPECT_EQ(d.features.cols(), 20u);
    EXPECT_EQ(d.target.cols(), 5u);
    EXPECT_EQ(std::count(d.relevant.begin(), d.relevant.end(), true), 5);
    for (std::size_t c = 0; c < 5; ++c) EXPECT_TRUE(d.relevant[c]);
    // feature zeros: 0.15 + 0.85 / 2
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < d.features.rows(); ++i) zeros += d.features(i, 7) == 0.0;
    EXPECT_NEAR(static_cast<double>(zeros) / 20000.0, 0.575, 0.015);
    std::size_t tzeros = 0;
    for (std::size_t i = 0; i < d.target.rows(); ++i) tzeros += d.target(i, 2) == 0.0;
    EXPECT_NEAR(static_cast<double>(tzeros) / 20000.0, 0.15, 0.01);

    const FeatselData clean = gen_featsel(20000, 20, 5, 0.0, 6);
    zeros = 0;
    for (std::size_t i = 0; i < clean.features.rows(); ++i) zeros += clean.features(i, 7) == 0.0;
    EXPECT_NEAR(static_cast<double>(zeros) / 20000.0, 0.5, 0.015);

    const FeatselData pois = gen_featsel(100, 20, 5, 0.15, 6, TargetNoise::poisson);
    for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(pois.target(i, 0), std::floor(pois.target(i, 0)));

    EXPECT_THROW(gen_featsel(10, 4, 5, 0.1, 0), ParameterError);
    EXPECT_THROW(gen_featsel(10, 20, 5, 1.0, 0), ParameterError);
}

TEST(ApplyDropout, IdentityDeterminismAndThinning) {
    Table t(200, 50, 0.0);
    for (std::size_t i = 0; i < t.data().size(); ++i) t.data()[i] = i % 4 == 0 ? 0.0 : 1.0 + i;
    EXPECT_EQ(apply_dropout(t, 0.0, 1), t);
    EXPECT_EQ(apply_dropout(t, 0.3, 9), apply_dropout(t, 0.3, 9));
    const Table thinned = apply_dropout(t, 0.3, 9);
    auto zero_frac = [](const Table& x) {
        return static_cast<double>(std::count(x.data().begin(), x.data().end(), 0.0)) /
               static_cast<double>(x.data().size());
    };
    // 0.25 + 0.3 * 0.75
    EXPECT_NEAR(zero_frac(thinned) - zero_frac(t), 0.3 * 0.75, 0.01);
    EXPECT_THROW(apply_dropout(t, 1.0, 0), ParameterError);
}

TEST(Generators, DeterministicAndSeedSensitive) {
    EXPECT_EQ(gen_exp1(500, 3), gen_exp1(500, 3));
    EXPECT_EQ(gen_exp4(500, 0.15, 3), gen_exp4(500, 0.15, 3));
    EXPECT_FALSE(gen_exp2(500, 5, 3) == gen_exp2(500, 5, 4));
    // Different seeds give uncorrelated streams.
    const Dataset a = gen_exp1(20000, 10), b = gen_exp1(20000, 11);
    EXPECT_LT(std::fabs(correlation(a.y().column_copy(0), b.y().column_copy(0))), 0.03);
}

TEST(GroundTruth, ClosedForms) {
    GeneratorSpec s;
    s.name = GeneratorName::exp2;
    s.m = 5;
    const GroundTruth g2 = ground_truth(s);
    EXPECT_NEAR(g2.value, 1.0549201679861442, 1e-15);
    EXPECT_EQ(g2.provenance, Provenance::closed_form);

    s.name = GeneratorName::exp3;
    for (int dims : {2, 3}) {
        s.dims = dims;
        EXPECT_EQ(ground_truth(s).value, dims * g2.value);
    }

    s.name = GeneratorName::exp4;
    s.p = 0.0;
    EXPECT_NEAR(ground_truth(s).value, 0.3012, 1e-4);
    EXPECT_NEAR(ground_truth(s).value, 0.30124477334991906, 1e-14);
    s.p = 0.15;
    EXPECT_NEAR(ground_truth(s).value, 0.25602, 1e-4);

    s.name = GeneratorName::featsel;
    EXPECT_THROW(ground_truth(s), ParameterError);
}

TEST(GroundTruth, Exp4SeriesTruncation) {
    double prev = -1.0;
    // Partial sums of a positive series: the estimate decreases monotonically in the truncation length.
    double last = exp4_ground_truth(0.0, 1);
    for (std::size_t terms = 2; terms <= 60; ++terms) {
        const double v = exp4_ground_truth(0.0, terms);
        EXPECT_LE(v, last);
        last = v;
        prev = v;
    }
    EXPECT_LT(exp4_truncation_bound(60), 1e-12);
    EXPECT_NEAR(prev, exp4_ground_truth(0.0), exp4_truncation_bound(60) + 1e-15);
}

TEST(GroundTruth, Exp1QuadratureMonteCarloAndAnalytic) {
    // Analytic value: atoms 0.45 log 3.6 + 0.05 log 0.4, plus half of (log 2 - log(1 - 0.81) / 2).
    const double analytic = 1.2923620858496065;
    GeneratorSpec s;
    s.name = GeneratorName::exp1;
    const GroundTruth gt = ground_truth(s);
    EXPECT_EQ(gt.provenance, Provenance::quadrature);
    EXPECT_LE(gt.error_bound, 1e-6);
    EXPECT_NEAR(gt.value, analytic, 1e-8);
    const MonteCarloValue mc = exp1_ground_truth_monte_carlo(2'000'000, 17);
    EXPECT_NEAR(mc.value, analytic, 5 * mc.std_error);
    EXPECT_LT(mc.std_error, 2e-3);
}

TEST(GeneratorSpec, Validation) {
    GeneratorSpec s;
    s.name = GeneratorName::exp3;
    s.dims = 4;
    EXPECT_THROW(s.validate(), ParameterError);
    EXPECT_THROW(parse_generator_name("exp9"), ParameterError);
    EXPECT_EQ(parse_generator_name("featsel"), GeneratorName::featsel);
    s.name = GeneratorName::exp1;
    EXPECT_THROW(generate(GeneratorSpec{GeneratorName::featsel}, 10, 0), ParameterError);
}

}  // namespace
}  // namespace mimix
