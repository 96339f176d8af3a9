#include "test_support.hpp"

#include <aro/aro.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

namespace aro {
namespace {

using test::ScriptedSource;

TEST(SelectionPressure, MonotoneExamples)
{
    EXPECT_EQ(selection_pressure(1, 1, PressureForm::monotone), 0.0);
    EXPECT_NEAR(selection_pressure(1, 2, PressureForm::monotone),
                std::sin(std::numbers::pi / 4.0), 1e-15);
    EXPECT_EQ(selection_pressure(3, 1, PressureForm::monotone), 0.0);
}

TEST(SelectionPressure, MonotoneShapeOnGrid)
{
    for (long i = 1; i <= 100; ++i) {
        for (long b = 1; b <= 100; ++b) {
            const double f = selection_pressure(i, b, PressureForm::monotone);
            ASSERT_GE(f, 0.0);
            ASSERT_LE(f, 1.0);
            if (i > 1) {
                ASSERT_LE(f, selection_pressure(i - 1, b, PressureForm::monotone));
            }
            if (b > 1) {
                ASSERT_GE(f, selection_pressure(i, b - 1, PressureForm::monotone));
            }
        }
    }
}

TEST(SelectionPressure, LiteralFormIsAlwaysZero)
{
    for (long i = 1; i <= 100; ++i) {
        for (long b = 1; b <= 100; ++b) {
            ASSERT_EQ(selection_pressure(i, b, PressureForm::literal), 0.0);
        }
    }
}

TEST(PickSubstring, UsesBothDraws)
{
    ScriptedSource src{{}, {2, 3}};
    const auto s = pick_substring(5, src);
    EXPECT_EQ(s.first, 2);
    EXPECT_EQ(s.last, 3);
    EXPECT_EQ(s.length(), 2);

    RandomStream rng(9);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto t = pick_substring(7, rng);
        ASSERT_GE(t.first, 1);
        ASSERT_LE(t.first, t.last);
        ASSERT_LE(t.last, 7);
    }
}

TEST(MutateShares, ReplacesRunWithUnheldIds)
{
    // Positions 2..3 (ids 8, 5) are replaced from {1, 3, 5, 6, 8, 9, 10}.
    ScriptedSource src{{}, {2, 3, 0, 1}};
    const Portfolio p{{2, 8, 5, 4, 7}, {0.2, 0.2, 0.2, 0.2, 0.2}, {0.2, 0.2, 0.2, 0.2, 0.2}};
    const auto q = mutate_shares(p, 10, src);
    EXPECT_EQ(q.indices, (std::vector<int>{2, 1, 3, 4, 7}));
    EXPECT_EQ(q.genes, p.genes);
}

TEST(MutateShares, FullRunAtFullCardinalityKeepsTheSet)
{
    ScriptedSource src{{}, {1, 5, 4, 3, 2, 3, 4}};
    const Portfolio p{{1, 2, 3, 4, 5}, {1, 1, 1, 1, 1}, {0.2, 0.2, 0.2, 0.2, 0.2}};
    const auto q = mutate_shares(p, 5, src);
    EXPECT_EQ(std::set<int>(q.indices.begin(), q.indices.end()), (std::set<int>{1, 2, 3, 4, 5}));
}

TEST(MutateShares, NeverDuplicates)
{
    RandomStream rng(21);
    const auto bounds = Bounds::uniform(31, 0.01, 1.0);
    const auto u = load_universe(test::data_dir() / "synth31.txt");
    Portfolio p = random_portfolio(u, 10, bounds, rng);
    for (int trial = 0; trial < 5000; ++trial) {
        p = mutate_shares(p, 31, rng);
        const std::set<int> ids(p.indices.begin(), p.indices.end());
        ASSERT_EQ(ids.size(), 10u);
        ASSERT_GE(*ids.begin(), 1);
        ASSERT_LE(*ids.rbegin(), 31);
    }
}

TEST(StochasticMutation, Rate)
{
    EXPECT_EQ(stochastic_rate(1), 1.0);
    EXPECT_NEAR(stochastic_rate(2), 1.0 / (1.0 + std::log(2.0)), 1e-15);
    EXPECT_NEAR(stochastic_rate(2), 0.590616, 1e-6);
}

TEST(StochasticMutation, SingleGeneRedrawnUniformly)
{
    // g = 1 so p = 1; r4 = 0.5 redraws, r5 = 0.9 picks the plain U = 0.42.
    ScriptedSource src{{0.5, 0.9, 0.42}, {2, 2}};
    const auto genes = mutate_weights_stochastic({0.1, 0.2, 0.3}, src);
    EXPECT_EQ(genes, (std::vector<double>{0.1, 0.42, 0.3}));
}

TEST(StochasticMutation, ScaledRedraw)
{
    ScriptedSource src{{0.1, 0.2, 0.5, 0.9, 0.0}, {1, 2}};
    const auto genes = mutate_weights_stochastic({0.1, 0.2, 0.3}, src);
    EXPECT_DOUBLE_EQ(genes[0], stochastic_rate(2) * 0.5);
    EXPECT_EQ(genes[1], 0.2);
    EXPECT_EQ(genes[2], 0.3);
}

TEST(StochasticMutation, HighDrawLeavesGenesAlone)
{
    ScriptedSource src;
    src.integers = {1, 10};
    for (int a = 0; a < 10; ++a) {
        src.reals.push_back(0.9);
        src.reals.push_back(0.1);
    }
    const std::vector<double> genes(10, 0.5);
    EXPECT_EQ(mutate_weights_stochastic(genes, src), genes);
    EXPECT_TRUE(src.reals.empty());
}

TEST(ChaoticMutation, Branches)
{
    ScriptedSource src{{0.1, 0.5, 0.6, 0.9, 0.25}, {}};
    const auto genes = mutate_weights_chaotic({0.2, 0.2, 0.2, 0.2}, 1.0, src);
    EXPECT_DOUBLE_EQ(genes[0], 0.04);
    EXPECT_DOUBLE_EQ(genes[1], 0.16);
    EXPECT_EQ(genes[2], 0.2);
    EXPECT_EQ(genes[3], 0.2);
    EXPECT_TRUE(src.reals.empty());
}

TEST(ReproduceBud, FreshParentTakesChaoticBranch)
{
    // f(1, 1) = 0, so r3 = 0 is not below it. Every r6 <= 0.2 zeroes the
    // genes (0.2 * f = 0), which forces a redraw.
    const auto u = AssetUniverse::from_text(test::five_asset_universe);
    const auto bounds = Bounds::uniform(5, 0.01, 1.0);
    AroState state;
    state.parent = Portfolio{{1, 3}, {0.3, 0.7}, {0.3, 0.7}};
    ScriptedSource src{{0.9, 0.0, 0.1, 0.1, 0.25, 0.25}, {}};
    const auto bud = reproduce_bud(state, u, bounds, AroParams{}, src);
    EXPECT_EQ(bud.indices, state.parent.indices);
    EXPECT_DOUBLE_EQ(bud.weights[0], 0.5);
    EXPECT_DOUBLE_EQ(bud.weights[1], 0.5);
    EXPECT_TRUE(src.reals.empty());
}

TEST(ReproduceBud, AlwaysFeasible)
{
    RandomStream rng(33);
    const auto u = load_universe(test::data_dir() / "synth31.txt");
    for (const double upper : {1.0, 0.2}) {
        const auto bounds = Bounds::uniform(31, 0.01, upper);
        AroState state;
        state.parent = random_portfolio(u, 10, bounds, rng);
        for (long i = 1; i <= 3000; ++i) {
            state.iteration = i;
            state.buds = 1 + static_cast<long>(rng.uniform_int(0, 50));
            const auto bud = reproduce_bud(state, u, bounds, AroParams{}, rng);
            ASSERT_TRUE(validate_portfolio(bud, u, bounds, 10).feasible());
            if (i % 7 == 0) {
                state.parent = bud;
            }
        }
    }
}

TEST(AroRun, IdenticalAssetsGiveFlatTrace)
{
    Eigen::MatrixXd rho = Eigen::MatrixXd::Ones(6, 6);
    const AssetUniverse u(std::vector<double>(6, 0.01), std::vector<double>(6, 0.05), rho);
    AroParams params;
    params.t_max = 500;
    const auto r = aro_run(u, 3, Bounds::uniform(6, 0.01, 1.0), RiskAversion(0.5), params);
    ASSERT_EQ(r.trace.size(), 500u);
    for (double f : r.trace) {
        EXPECT_NEAR(f, r.trace.front(), 1e-15);
    }
}

TEST(AroRun, TraceIsMonotoneAndEndsAtBest)
{
    const auto u = load_universe(test::data_dir() / "synth31.txt");
    AroParams params;
    params.t_max = 3000;
    for (const double lambda : {0.0, 0.3, 0.9, 1.0}) {
        const auto r = aro_run(u, 10, Bounds::uniform(31, 0.01, 1.0), RiskAversion(lambda), params);
        ASSERT_EQ(r.trace.size(), 3000u);
        EXPECT_EQ(r.bud_evaluations, 3000);
        for (std::size_t t = 1; t < r.trace.size(); ++t) {
            ASSERT_GE(r.trace[t], r.trace[t - 1]);
        }
        EXPECT_EQ(r.trace.back(), r.best_fitness);
        EXPECT_NEAR(r.best_objective(), evaluate_objective(r.best, u, RiskAversion(lambda)), 0.0);
    }
}

TEST(AroRun, SeedDeterminesResult)
{
    const auto u = load_universe(test::data_dir() / "synth31.txt");
    AroParams params;
    params.t_max = 2000;
    params.seed = 99;
    const auto bounds = Bounds::uniform(31, 0.01, 1.0);
    const auto a = aro_run(u, 10, bounds, RiskAversion(0.4), params);
    const auto b = aro_run(u, 10, bounds, RiskAversion(0.4), params);
    EXPECT_EQ(a.best, b.best);
    EXPECT_EQ(a.trace, b.trace);
}

TEST(AroRun, RejectsBadConfiguration)
{
    const auto u = AssetUniverse::from_text(test::five_asset_universe);
    AroParams params;
    params.t_max = 10;
    EXPECT_THROW(aro_run(u, 6, Bounds::uniform(5, 0.01, 1.0), RiskAversion(0.5), params),
                 ConfigError);
    EXPECT_THROW(aro_run(u, 2, Bounds::uniform(5, 0.01, 0.4), RiskAversion(0.5), params),
                 InfeasibilityError);
    EXPECT_THROW(aro_run(u, 2, Bounds::uniform(4, 0.01, 1.0), RiskAversion(0.5), params),
                 ConfigError);
    params.t_max = 0;
    EXPECT_THROW(aro_run(u, 2, Bounds::uniform(5, 0.01, 1.0), RiskAversion(0.5), params),
                 ConfigError);
}

TEST(AroRun, MatchesEnumerationOnFiveAssets)
{
    // Best objective over all 10 pairs and a 0.001 gene grid, computed
    // independently (see the acceptance oracle).
    const auto u = AssetUniverse::from_text(test::five_asset_universe);
    const auto bounds = Bounds::uniform(5, 0.01, 1.0);
    const std::array<std::pair<double, double>, 3> expected{
        {{0.0, -0.2995}, {0.5, -0.056097823468800004}, {1.0, 0.0348510772216}}};
    AroParams params;
    params.t_max = 5000;
    for (const auto& [lambda, best] : expected) {
        const auto r = aro_run(u, 2, bounds, RiskAversion(lambda), params);
        EXPECT_NEAR(r.best_objective(), best, 1e-3) << "lambda " << lambda;
    }
}

} // namespace
} // namespace aro
