#include "test_support.hpp"

#include <aro/orlib.hpp>

#include <gtest/gtest.h>

#include <array>
#include <chrono>
#include <cmath>

namespace aro {
namespace {

TEST(ParseUniverse, ReadsFieldsVerbatim)
{
    const auto data = parse_universe("2\n0.1 0.2\n0.3 0.4\n1 1 1.0\n1 2 0.5\n2 2 1.0");
    EXPECT_EQ(data.n_assets, 2);
    EXPECT_EQ(data.mean_returns, (std::vector<double>{0.1, 0.3}));
    EXPECT_EQ(data.stddevs, (std::vector<double>{0.2, 0.4}));
    const std::vector<CorrelationEntry> expected{{1, 1, 1.0}, {1, 2, 0.5}, {2, 2, 1.0}};
    EXPECT_EQ(data.correlations, expected);
}

TEST(ParseUniverse, EmptyTextIsParseError)
{
    EXPECT_THROW(parse_universe(""), ParseError);
    EXPECT_THROW(parse_universe("  \n\t\n"), ParseError);
}

TEST(ParseUniverse, NonNumericTokenReportsLine)
{
    try {
        parse_universe("2\n0.1 0.2\n0.3 abc\n1 1 1\n1 2 0.5\n2 2 1");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("abc"), std::string::npos);
    }
}

TEST(ParseUniverse, MissingPairIsIncomplete)
{
    EXPECT_THROW(parse_universe("2\n0.1 0.2\n0.3 0.4\n1 1 1.0\n2 2 1.0"), IncompleteDataError);
    EXPECT_THROW(parse_universe("3\n0.1 0.2\n0.3 0.4"), IncompleteDataError);
    EXPECT_THROW(parse_universe("2\n0.1 0.2\n0.3 0.4\n1 1 1.0\n1 2"), IncompleteDataError);
}

TEST(ParseUniverse, IndexOutOfRange)
{
    EXPECT_THROW(parse_universe("2\n0.1 0.2\n0.3 0.4\n1 1 1.0\n1 3 0.5\n2 2 1.0"), IndexError);
    EXPECT_THROW(parse_universe("2\n0.1 0.2\n0.3 0.4\n0 1 1.0\n1 2 0.5\n2 2 1.0"), IndexError);
}

TEST(ParseUniverse, AcceptsFortranStyleNumbers)
{
    const auto data = parse_universe("2\n.1E-02 .5E-01\n-.3E-02 +0.4\n1 1 1\n2 1 -.25\n2 2 1");
    EXPECT_DOUBLE_EQ(data.mean_returns[0], 0.001);
    EXPECT_DOUBLE_EQ(data.mean_returns[1], -0.003);
    EXPECT_DOUBLE_EQ(data.correlations[1].rho, -0.25);
}

TEST(BuildCovariance, Examples)
{
    const auto perfect = build_covariance({0.1, 0.1}, {{1, 1, 1}, {1, 2, 1}, {2, 2, 1}});
    EXPECT_DOUBLE_EQ(perfect(0, 1), 0.01);
    const auto independent = build_covariance({0.1, 0.1}, {{1, 1, 1}, {1, 2, 0}, {2, 2, 1}});
    EXPECT_EQ(independent(0, 1), 0.0);
    const auto mixed = build_covariance({0.2, 0.4}, {{1, 1, 1}, {1, 2, 0.5}, {2, 2, 1}});
    EXPECT_DOUBLE_EQ(mixed(0, 1), 0.04);
    EXPECT_EQ(mixed(0, 1), mixed(1, 0));
    EXPECT_DOUBLE_EQ(mixed(1, 1), 0.16);
}

TEST(BuildCovariance, Errors)
{
    EXPECT_THROW(build_covariance({0.1, 0.1}, {{1, 1, 1}, {1, 2, 1.01}, {2, 2, 1}}),
                 ValidationError);
    EXPECT_NO_THROW(build_covariance({0.1, 0.1}, {{1, 1, 1}, {1, 2, 1 + 1e-10}, {2, 2, 1}}));
    EXPECT_THROW(build_covariance({0.1, 0.1}, {{1, 1, 1}, {1, 2, 0.5}}), IncompleteDataError);
}

TEST(AssetUniverse, CovarianceInvariants)
{
    RandomStream rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = test::random_universe(2 + trial, rng);
        const auto& cov = u.covariance_matrix();
        for (int i = 0; i < u.size(); ++i) {
            EXPECT_NEAR(cov(i, i), u.stddev(i) * u.stddev(i), 1e-12 * cov(i, i));
            for (int j = 0; j < i; ++j) {
                EXPECT_EQ(cov(i, j), cov(j, i));
            }
        }
        const auto diag = diagnose_covariance(u);
        EXPECT_TRUE(diag.symmetric());
        EXPECT_TRUE(diag.positive_semidefinite());
    }
}

TEST(AssetUniverse, RoundTripThroughFileFormat)
{
    RandomStream rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto u = test::random_universe(2 + static_cast<int>(rng.uniform_int(0, 30)), rng);
        const auto back = AssetUniverse::from_text(format_universe(u));
        ASSERT_EQ(back.size(), u.size());
        for (int i = 0; i < u.size(); ++i) {
            EXPECT_EQ(back.mean(i), u.mean(i));
            EXPECT_EQ(back.stddev(i), u.stddev(i));
            for (int j = 0; j < u.size(); ++j) {
                EXPECT_EQ(back.covariance(i, j), u.covariance(i, j));
            }
        }
    }
}

TEST(AssetUniverse, RejectsSingleAsset)
{
    EXPECT_THROW(AssetUniverse::from_text("1\n0.1 0.2\n1 1 1"), ValidationError);
}

TEST(ReferenceFrontier, ParsesAndTakesSquareRoots)
{
    const auto ref = parse_reference_frontier("0.005 0.0004\n0.010 0.0016");
    ASSERT_EQ(ref.size(), 2u);
    EXPECT_DOUBLE_EQ(ref.points()[0].mean_return, 0.005);
    EXPECT_DOUBLE_EQ(ref.points()[0].variance, 0.0004);
    EXPECT_DOUBLE_EQ(ref.points()[0].stddev, 0.02);
    EXPECT_DOUBLE_EQ(ref.points()[1].stddev, 0.04);
}

TEST(ReferenceFrontier, SortsAndCollapsesDuplicates)
{
    const auto ref = parse_reference_frontier("0.3 0.09\n0.1 0.01\n0.2 0.05\n0.2 0.04\n");
    ASSERT_EQ(ref.size(), 3u);
    EXPECT_EQ(ref.input_count(), 4u);
    EXPECT_DOUBLE_EQ(ref.points()[0].mean_return, 0.1);
    EXPECT_DOUBLE_EQ(ref.points()[1].variance, 0.04);
    for (std::size_t i = 1; i < ref.size(); ++i) {
        EXPECT_LT(ref.points()[i - 1].mean_return, ref.points()[i].mean_return);
    }
}

TEST(ReferenceFrontier, Errors)
{
    EXPECT_THROW(parse_reference_frontier("0.01 0.0001"), InsufficientDataError);
    EXPECT_THROW(parse_reference_frontier(""), InsufficientDataError);
    EXPECT_THROW(parse_reference_frontier("0.01 -0.0001\n0.02 0.0004"), ValidationError);
    EXPECT_THROW(parse_reference_frontier("0.01 0.0001\n0.02"), IncompleteDataError);
    EXPECT_THROW(parse_reference_frontier("0.01 0.0001\n0.02 x"), ParseError);
}

TEST(SyntheticFixture, MatchesOrLibraryShape)
{
    const auto u = load_universe(test::data_dir() / "synth31.txt");
    const auto ref = load_reference_frontier(test::data_dir() / "synth31_ef.txt");
    EXPECT_EQ(u.size(), 31);
    EXPECT_EQ(ref.input_count(), 2000u);
    for (const auto& k : ref.points()) {
        EXPECT_NEAR(k.stddev, std::sqrt(k.variance), 1e-12 * k.stddev);
    }
    EXPECT_TRUE(diagnose_covariance(u).positive_semidefinite());
}

TEST(LoadFiles, MissingFileIsInputError)
{
    EXPECT_THROW(load_universe(test::data_dir() / "no_such_file.txt"), InputError);
}

TEST(OrLibrary, FiveDatasetsParse)
{
    const auto dir = test::orlib_dir();
    if (!dir) {
        GTEST_SKIP() << "set ARO_ORLIB_DIR to the OR-Library port files";
    }
    const std::array<int, 5> sizes{31, 85, 89, 98, 225};
    for (int d = 1; d <= 5; ++d) {
        const auto stem = std::to_string(d);
        auto path = [&](const std::string& name) {
            return std::filesystem::exists(*dir / (name + ".txt")) ? *dir / (name + ".txt")
                                                                   : *dir / name;
        };
        const auto u = load_universe(path("port" + stem));
        const auto ref = load_reference_frontier(path("portef" + stem));
        EXPECT_EQ(u.size(), sizes[static_cast<std::size_t>(d - 1)]);
        EXPECT_EQ(ref.input_count(), 2000u);
        const auto diag = diagnose_covariance(u);
        EXPECT_TRUE(diag.symmetric());
        if (!diag.positive_semidefinite()) {
            std::cerr << "note: port" << d << " covariance min eigenvalue " << diag.min_eigenvalue
                      << '\n';
        }
    }
}

} // namespace
} // namespace aro
