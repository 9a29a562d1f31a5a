#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <random>

#include "mimix/io.hpp"
#include "support/reference.hpp"

namespace mimix {
namespace {

TEST(FormatDouble, RoundTripsArbitraryBitPatterns) {
    std::mt19937_64 rng(123);
    for (int i = 0; i < 200000; ++i) {
        const double v = std::bit_cast<double>(rng());
        if (!std::isfinite(v)) continue;
        const double back = io::parse_double(io::format_double(v));
        ASSERT_EQ(std::bit_cast<std::uint64_t>(back), std::bit_cast<std::uint64_t>(v)) << io::format_double(v);
    }
    EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(io::format_double(3.0), "3");
}

TEST(ParseDouble, RejectsGarbage) {
    EXPECT_THROW(io::parse_double("abc"), InputError);
    EXPECT_THROW(io::parse_double("1.5x"), InputError);
    EXPECT_THROW(io::parse_double(""), InputError);
    EXPECT_EQ(io::parse_double(" 2.5 "), 2.5);
    EXPECT_EQ(io::parse_double("+1e3"), 1000.0);
}

TEST(Csv, DatasetRoundTripIsBitIdentical) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Dataset d = testing::random_mixed_dataset(seed, 200, 2, 3);
        Table joint(d.n(), 5);
        for (std::size_t i = 0; i < d.n(); ++i) {
            for (std::size_t c = 0; c < 2; ++c) joint(i, c) = d.x()(i, c);
            for (std::size_t c = 0; c < 3; ++c) joint(i, 2 + c) = d.y()(i, c);
        }
        const std::string text = io::to_csv({"a", "b", "c", "d", "e"}, joint);
        const io::CsvTable parsed = io::parse_csv(text);
        const std::vector<std::size_t> xc{0, 1}, yc{2, 3, 4};
        const Dataset back = validate_dataset(parsed.values.select_columns(xc), parsed.values.select_columns(yc));
        EXPECT_EQ(back, d);
        EXPECT_EQ(io::to_csv({"a", "b", "c", "d", "e"}, parsed.values), text);
    }
}

TEST(Csv, ErrorsNameRowAndColumn) {
    try {
        io::parse_csv("x,y\n1,2\n3,oops\n", "data.csv");
        FAIL();
    } catch (const InputError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("row 1"), std::string::npos) << msg;
        EXPECT_NE(msg.find("column 1"), std::string::npos) << msg;
    }
    EXPECT_THROW(io::parse_csv("x,y\n1,2,3\n"), InputError);
    EXPECT_THROW(io::parse_csv(""), InputError);
    const io::CsvTable t = io::parse_csv("x,y\r\n1,2\r\n\r\n");
    EXPECT_EQ(t.values.rows(), 1u);
}

TEST(ColumnSpec, RangesAndLists) {
    EXPECT_EQ(io::parse_column_spec("0-4"), (std::vector<std::size_t>{0, 1, 2, 3, 4}));
    EXPECT_EQ(io::parse_column_spec("3,1,7-8"), (std::vector<std::size_t>{3, 1, 7, 8}));
    EXPECT_EQ(io::format_column_spec({0, 1, 2, 5, 7, 8}), "0-2,5,7-8");
    EXPECT_THROW(io::parse_column_spec("a"), ParameterError);
    EXPECT_THROW(io::parse_column_spec("4-2"), ParameterError);
    EXPECT_THROW(io::parse_column_spec(""), ParameterError);
}

TEST(WriteFileAtomic, WritesAndReportsUnwritablePaths) {
    const auto dir = std::filesystem::temp_directory_path() / "mimix_io_test";
    std::filesystem::create_directories(dir);
    io::write_file_atomic(dir / "a.txt", "hello");
    EXPECT_EQ(io::read_file(dir / "a.txt"), "hello");
    EXPECT_FALSE(std::filesystem::exists(dir / "a.txt.tmp"));
    EXPECT_THROW(io::write_file_atomic(dir / "missing" / "b.txt", "x"), InputError);
    EXPECT_EQ(io::file_digest(dir / "a.txt"),
              "sha256:2cf24dba5fb0a30e26e83b2ac5b9e29e1b161e5c1fa7425e73043362938b9824");
    std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace mimix
