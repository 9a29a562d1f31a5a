#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "mimix/eval.hpp"
#include "mimix/io.hpp"
#include "support/reference.hpp"

namespace mimix {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "mimix");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("mimix_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

TEST_F(CliTest, GenWritesCsvAndGroundTruth) {
    const Result r = run({"gen", "exp2", "--m", "5", "--n", "1000", "--seed", "7", path("out.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("1.054920"), std::string::npos) << r.out;
    const auto report = json::parse(r.out);
    EXPECT_NEAR(report["ground_truth"]["value"].get<double>(), 1.054924, 1e-5);
    const io::CsvTable t = io::read_csv(path("out.csv"));
    EXPECT_EQ(t.values.rows(), 1000u);
    EXPECT_EQ(t.header, (std::vector<std::string>{"x0", "y0"}));
    EXPECT_TRUE(fs::exists(path("out.manifest.json")));

    const std::string first = io::read_file(path("out.csv"));
    ASSERT_EQ(run({"gen", "exp2", "--m", "5", "--n", "1000", "--seed", "7", path("out.csv")}).code, 0);
    EXPECT_EQ(io::read_file(path("out.csv")), first);
}

TEST_F(CliTest, GenParameterAndPathErrors) {
    EXPECT_EQ(run({"gen", "exp4", "--p", "1.0", "--n", "10", "--seed", "1", path("o.csv")}).code, 3);
    EXPECT_EQ(run({"gen", "exp7", "--n", "10", "--seed", "1", path("o.csv")}).code, 3);
    EXPECT_EQ(run({"gen", "exp2", "--n", "10", "--seed", "1", path("nodir/o.csv")}).code, 2);
    EXPECT_EQ(run({"gen", "exp2", "--n", "10", path("o.csv")}).code, 3);  // --seed is required
}

TEST_F(CliTest, EstimateOnGeneratedExp2) {
    ASSERT_EQ(run({"gen", "exp2", "--m", "5", "--n", "4000", "--seed", "11", path("d.csv")}).code, 0);
    const Result r = run({"estimate", "--est", "mixed", "--k", "5", "--x-cols", "0", "--y-cols", "1", path("d.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["value"].get<double>(), 1.055, 0.06);
    EXPECT_EQ(j["estimator"], "mixed");
    EXPECT_EQ(j["n"], 4000);
    EXPECT_EQ(j["config"]["k"], "5");
    EXPECT_TRUE(j["manifest"]["input_digests"].contains(path("d.csv")));
}

TEST_F(CliTest, EstimateErrors) {
    ASSERT_EQ(run({"gen", "exp3", "--n", "200", "--seed", "1", path("d3.csv")}).code, 0);
    const Result adaptive =
        run({"estimate", "--est", "adaptive", "--x-cols", "0-1", "--y-cols", "2-3", path("d3.csv")});
    EXPECT_EQ(adaptive.code, 3);
    EXPECT_NE(adaptive.err.find("one-dimensional"), std::string::npos) << adaptive.err;
    EXPECT_EQ(run({"estimate", "--k", "0", "--x-cols", "0", "--y-cols", "1", path("d3.csv")}).code, 3);
    EXPECT_EQ(run({"estimate", "--k", "500", "--x-cols", "0", "--y-cols", "1", path("d3.csv")}).code, 3);
    EXPECT_EQ(run({"estimate", "--x-cols", "9", "--y-cols", "1", path("d3.csv")}).code, 3);

    io::write_file_atomic(path("bad.csv"), "a,b\n1,2\n3,x\n");
    const Result bad = run({"estimate", "--x-cols", "0", "--y-cols", "1", path("bad.csv")});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("row 1"), std::string::npos) << bad.err;
    EXPECT_NE(bad.err.find("column 1"), std::string::npos) << bad.err;
    io::write_file_atomic(path("nan.csv"), "a,b\n1,2\nnan,3\n4,5\n");
    EXPECT_EQ(run({"estimate", "--k", "1", "--x-cols", "0", "--y-cols", "1", path("nan.csv")}).code, 2);
    EXPECT_EQ(run({"estimate", "--x-cols", "0", "--y-cols", "1", path("missing.csv")}).code, 2);
}

TEST_F(CliTest, EstimateClipZero) {
    io::write_file_atomic(path("same.csv"), "a,b\n2,5\n2,5\n2,5\n");
    const Result r = run({"estimate", "--k", "1", "--clip-zero", "--x-cols", "0", "--y-cols", "1", path("same.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["value"].get<double>(), 0.0);
    EXPECT_LT(j["raw_value"].get<double>(), 0.0);
}

TEST_F(CliTest, BenchmarkRowsAndDeterminism) {
    const std::vector<std::string> args{"benchmark", "exp2",   "--m",     "5",      "--est",
                                        "mixed,ksg-noisy,partition", "--sigma", "0.1", "--sizes",
                                        "500,1000,2000,4000",        "--trials", "3",   "--seed", "5",
                                        path("bench.csv")};
    const Result r = run(args);
    ASSERT_EQ(r.code, 0) << r.err;
    const io::CsvTable parsed = [&] {
        // estimator names are text; count data lines directly.
        std::istringstream in(io::read_file(path("bench.csv")));
        std::string line;
        std::getline(in, line);
        EXPECT_EQ(line, "estimator,n,trials,mse,bias,ground_truth");
        std::size_t rows = 0;
        while (std::getline(in, line)) rows += !line.empty();
        EXPECT_EQ(rows, 12u);
        return io::CsvTable{};
    }();
    (void)parsed;
    EXPECT_TRUE(fs::exists(path("bench.json")));
    EXPECT_TRUE(fs::exists(path("bench.manifest.json")));
    const std::string first = io::read_file(path("bench.csv"));
    ASSERT_EQ(run(args).code, 0);
    EXPECT_EQ(io::read_file(path("bench.csv")), first);

    // Replaying the manifest reproduces the output bytes.
    fs::remove(path("bench.csv"));
    ASSERT_EQ(run({"replay", path("bench.manifest.json")}).code, 0);
    EXPECT_EQ(io::read_file(path("bench.csv")), first);
}

TEST_F(CliTest, BenchmarkMixedMseTrend) {
    const Result r = run({"benchmark", "exp2", "--est", "mixed", "--sizes", "500,1000,2000,4000", "--trials", "100",
                          "--seed", "31", path("trend.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto sweeps = json::parse(io::read_file(path("trend.json")));
    const auto mse = sweeps[0]["mse_per_size"].get<std::vector<double>>();
    EXPECT_LE(count_increases(mse), 1u);
}

TEST_F(CliTest, SelectFeatselDefaults) {
    const Result r = run({"select", "--featsel", "--n", "5000", "--est", "mixed", "--seed", "3", path("sel")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(io::read_file(path("sel.json")));
    EXPECT_GE(j["auroc"].get<double>(), 0.9);
    EXPECT_EQ(j["ranking"].size(), 20u);
    EXPECT_TRUE(fs::exists(path("sel.ranking.csv")));
    EXPECT_TRUE(fs::exists(path("sel.roc.csv")));
    const std::string first = io::read_file(path("sel.ranking.csv"));
    ASSERT_EQ(run({"select", "--featsel", "--n", "5000", "--est", "mixed", "--seed", "3", path("sel")}).code, 0);
    EXPECT_EQ(io::read_file(path("sel.ranking.csv")), first);
}

TEST_F(CliTest, SelectDropoutDegradesAuroc) {
    double clean = 0.0, dropped = 0.0;
    for (int seed = 0; seed < 10; ++seed) {
        for (const char* level : {"0", "0.3"}) {
            const Result r = run({"select", "--featsel", "--n", "2000", "--dropout", level, "--seed",
                                  std::to_string(seed), path("s")});
            ASSERT_EQ(r.code, 0) << r.err;
            const double a = json::parse(r.out)["auroc"].get<double>();
            (std::string(level) == "0" ? clean : dropped) += a / 10.0;
        }
    }
    EXPECT_GE(clean, dropped);
}

TEST_F(CliTest, SelectFromCsvInput) {
    ASSERT_EQ(run({"gen", "featsel", "--n", "1500", "--seed", "4", path("fs.csv")}).code, 0);
    const Result r = run({"select", "--input", path("fs.csv"), "--feature-cols", "0-19", "--target-cols", "20-24",
                          "--relevant-cols", "0-4", "--seed", "1", path("fromcsv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_GT(json::parse(r.out)["auroc"].get<double>(), 0.8);
    EXPECT_EQ(run({"select", "--seed", "1", path("none")}).code, 3);
}

class NetinferTest : public CliTest {
protected:
    void write_network(std::size_t genes) {
        net_ = testing::linear_sem(21, 660, genes, 0.15);
        std::vector<std::string> header;
        for (std::size_t g = 0; g < genes; ++g) header.push_back("g" + std::to_string(g));
        io::write_file_atomic(path("expr.csv"), io::to_csv(header, net_.expression));
        std::string gold = "gene_a,gene_b,label\n";
        for (const auto& [a, b] : net_.edges) gold += std::to_string(a) + "," + std::to_string(b) + ",1\n";
        io::write_file_atomic(path("gold.csv"), gold);
    }

    double permutation_null_sd(const std::vector<double>& scores, const std::vector<bool>& labels) {
        std::mt19937_64 rng(5);
        std::vector<bool> shuffled = labels;
        double sum = 0.0, sq = 0.0;
        const int reps = 2000;
        for (int r = 0; r < reps; ++r) {
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            const double a = auroc(roc_curve(scores, shuffled));
            sum += a;
            sq += a * a;
        }
        const double mean = sum / reps;
        return std::sqrt(sq / reps - mean * mean);
    }

    testing::SemNetwork net_;
};

TEST_F(NetinferTest, RecoversSurrogateNetwork) {
    write_network(20);
    const Result r = run({"netinfer", "--expr", path("expr.csv"), "--gold", path("gold.csv"), "--dropout", "0",
                          "--seed", "1", path("net")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto summary = json::parse(r.out);
    const double clean_auroc = summary["auroc"].get<double>();

    const io::CsvTable pairs = io::read_csv(path("net.pairs.csv"));
    ASSERT_EQ(pairs.values.rows(), 190u);
    std::vector<double> scores;
    std::vector<bool> labels;
    for (std::size_t p = 0; p < pairs.values.rows(); ++p) {
        scores.push_back(pairs.values(p, 2));
        labels.push_back(pairs.values(p, 3) == 1.0);
    }
    EXPECT_EQ(static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true)), net_.edges.size());
    const double sd = permutation_null_sd(scores, labels);
    EXPECT_GT(clean_auroc, 0.5 + 3.0 * sd) << "sd=" << sd;

    const Result heavy = run({"netinfer", "--expr", path("expr.csv"), "--gold", path("gold.csv"), "--dropout", "0.9",
                              "--seed", "1", path("net90")});
    ASSERT_EQ(heavy.code, 0) << heavy.err;
    const double heavy_auroc = json::parse(heavy.out)["auroc"].get<double>();
    EXPECT_LT(std::fabs(heavy_auroc - 0.5), std::fabs(clean_auroc - 0.5));
}

TEST_F(NetinferTest, InputErrors) {
    write_network(20);
    io::write_file_atomic(path("badgold.csv"), "gene_a,gene_b,label\n0,25,1\n");
    EXPECT_EQ(run({"netinfer", "--expr", path("expr.csv"), "--gold", path("badgold.csv"), "--seed", "1", path("n")})
                  .code,
              2);
    io::write_file_atomic(path("tiny.csv"), "a,b\n1,2\n3,4\n5,6\n");
    io::write_file_atomic(path("tinygold.csv"), "gene_a,gene_b,label\n0,1,1\n");
    EXPECT_EQ(run({"netinfer", "--expr", path("tiny.csv"), "--gold", path("tinygold.csv"), "--seed", "1", path("n")})
                  .code,
              2);
    EXPECT_EQ(run({"netinfer", "--expr", path("expr.csv"), "--gold", path("gold.csv"), "--dropout", "1.0", "--seed",
                   "1", path("n")})
                  .code,
              3);
}

}  // namespace
}  // namespace mimix
