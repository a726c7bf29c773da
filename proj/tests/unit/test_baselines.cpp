#include "contrastfs/baselines.hpp"
#include "contrastfs/error.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace contrastfs;

TEST(Fisher, ToyExample)
{
    const ImportanceReport r = fisher_scores(fixtures::toy());
    EXPECT_NEAR(r.scores[0], 61.0 / 18.0, 1e-12);
    EXPECT_EQ(r.method, "fisher");
}

TEST(Fisher, ConstantFeatureScoresZero)
{
    const Dataset d = fixtures::from_rows({{1, 0}, {1, 1}, {1, 5}, {1, 6}}, {0, 0, 1, 1}, 2);
    const ImportanceReport r = fisher_scores(d);
    EXPECT_EQ(r.scores[0], 0.0);
    EXPECT_GT(r.scores[1], 0.0);
}

TEST(Fisher, PerfectlySeparatedFeatureIsLargeButFinite)
{
    const ImportanceReport r = fisher_scores(fixtures::one_feature({{0, 0, 0}, {1, 1, 1}}));
    EXPECT_TRUE(std::isfinite(r.scores[0]));
    EXPECT_GT(r.scores[0], 1e9);
}

TEST(Fisher, MatchesOracle)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Dataset d = oracle::random_dataset(50 + seed, 7, 2 + seed % 5, 90 + seed);
        const auto got = fisher_scores(d).scores;
        const auto want = oracle::fisher(d, 1e-12);
        for (std::size_t t = 0; t < got.size(); ++t) EXPECT_LE(fixtures::rel_diff(got[t], want[t]), 1e-10);
    }
}

TEST(Fisher, AffineInvariance)
{
    const Dataset d = oracle::random_dataset(100, 5, 3, 4);
    const auto base = fisher_scores(d).scores;
    std::vector<double> values(d.matrix().data().begin(), d.matrix().data().end());
    for (auto& v : values) v = -7.0 * v + 3.0;
    const Dataset t(Matrix(d.samples(), d.features(), std::move(values)),
                    std::vector<Label>(d.labels().begin(), d.labels().end()), 3);
    const auto moved = fisher_scores(t).scores;
    for (std::size_t f = 0; f < 5; ++f) EXPECT_LE(fixtures::rel_diff(moved[f], base[f]), 1e-9);
}

TEST(Fisher, NeedsTwoClasses)
{
    EXPECT_THROW(fisher_scores(fixtures::one_feature({{1, 2, 3}})), Error);
}

TEST(RandomSelection, DistinctInRangeAndSeeded)
{
    const auto a = random_selection(100, 30, 5);
    EXPECT_EQ(a.size(), 30u);
    EXPECT_EQ(std::set<FeatureIndex>(a.begin(), a.end()).size(), 30u);
    EXPECT_TRUE(std::all_of(a.begin(), a.end(), [](FeatureIndex t) { return t < 100; }));
    EXPECT_EQ(random_selection(100, 30, 5), a);
    EXPECT_NE(random_selection(100, 30, 6), a);
}

TEST(RandomSelection, FullAndEmpty)
{
    auto all = random_selection(10, 10, 1);
    std::sort(all.begin(), all.end());
    EXPECT_EQ(all, (std::vector<FeatureIndex>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
    EXPECT_TRUE(random_selection(10, 0, 1).empty());
    EXPECT_THROW(random_selection(10, 11, 1), Error);
}

TEST(RandomSelection, RoughlyUniform)
{
    std::vector<int> hits(20, 0);
    for (std::uint64_t s = 0; s < 2000; ++s) {
        for (auto t : random_selection(20, 5, s)) ++hits[t];
    }
    // Expected 500 per index.
    for (int h : hits) {
        EXPECT_GT(h, 400);
        EXPECT_LT(h, 600);
    }
}
