#include "contrastfs/error.hpp"
#include "contrastfs/moments.hpp"
#include "contrastfs/redundancy.hpp"
#include "contrastfs/selector.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace contrastfs;

namespace {

SurrogateMatrix surrogate_of(const Dataset& d)
{
    const ClassStats cs = compute_class_stats(d);
    return build_surrogate(cs, compute_global_stats(d, cs), SelectorConfig{});
}

DiscrepancyProfile profile(FeatureIndex t, std::vector<double> v)
{
    return DiscrepancyProfile{t, std::move(v)};
}

std::vector<FeatureIndex> all_features(std::size_t d)
{
    std::vector<FeatureIndex> idx(d);
    std::iota(idx.begin(), idx.end(), FeatureIndex{0});
    return idx;
}

}  // namespace

TEST(Profiles, ToyExample)
{
    const std::vector<FeatureIndex> idx{0};
    const auto p = discrepancy_profiles(surrogate_of(fixtures::toy()), idx);
    ASSERT_EQ(p.size(), 1u);
    const double r2 = std::sqrt(2.0);
    ASSERT_EQ(p[0].values.size(), 3u);
    EXPECT_NEAR(p[0].values[0], 12.0 / r2, 1e-12);
    EXPECT_NEAR(p[0].values[1], 6.0 / r2, 1e-12);
    EXPECT_NEAR(p[0].values[2], -6.0 / r2, 1e-12);
}

TEST(Profiles, NeedThreeClasses)
{
    const std::vector<FeatureIndex> idx{0};
    try {
        discrepancy_profiles(surrogate_of(fixtures::one_feature({{0, 1}, {2, 4}})), idx);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooFewClasses);
    }
}

TEST(Redundancy, PearsonExample)
{
    const std::vector<DiscrepancyProfile> p{profile(0, {1, 2, 3}), profile(1, {1, 2, 100})};
    const Matrix r = redundancy_matrix(p);
    // centered [-1, 0, 1] and [-100/3, -97/3, 197/3]: 99 / (sqrt(2) sqrt(19406/3))
    EXPECT_NEAR(r(0, 1), 99.0 / std::sqrt(2.0 * 19406.0 / 3.0), 1e-12);
    EXPECT_NEAR(r(0, 1), 0.870388, 1e-6);
    EXPECT_NEAR(r(0, 1), oracle::pearson({1, 2, 3}, {1, 2, 100}), 1e-12);
    const auto s = redundancy_scores(p);
    EXPECT_NEAR(s[0], 0.935194, 1e-6);
    EXPECT_EQ(s[0], s[1]);
}

TEST(Redundancy, DuplicateAndNegatedProfilesAreExactlyOne)
{
    const std::vector<DiscrepancyProfile> p{profile(0, {0.1, 0.7, -0.3, 2.2}), profile(1, {0.1, 0.7, -0.3, 2.2}),
                                            profile(2, {-0.1, -0.7, 0.3, -2.2})};
    const Matrix r = redundancy_matrix(p);
    EXPECT_EQ(r(0, 1), 1.0);
    EXPECT_EQ(r(0, 2), 1.0);
    EXPECT_EQ(r(1, 2), 1.0);
}

TEST(Redundancy, ConstantProfileCorrelatesZero)
{
    const std::vector<DiscrepancyProfile> p{profile(0, {2, 2, 2}), profile(1, {1, 5, 3}), profile(2, {0, 0, 0})};
    const Matrix r = redundancy_matrix(p);
    EXPECT_EQ(r(0, 1), 0.0);
    EXPECT_EQ(r(0, 2), 0.0);
    EXPECT_EQ(r(0, 0), 1.0);
}

TEST(Redundancy, MatrixProperties)
{
    const Dataset d = oracle::random_dataset(200, 12, 5, 3);
    const auto p = discrepancy_profiles(surrogate_of(d), all_features(12));
    const Matrix r = redundancy_matrix(p);
    for (std::size_t i = 0; i < 12; ++i) {
        EXPECT_EQ(r(i, i), 1.0);
        for (std::size_t j = 0; j < 12; ++j) {
            EXPECT_EQ(r(i, j), r(j, i));
            EXPECT_GE(r(i, j), 0.0);
            EXPECT_LE(r(i, j), 1.0);
            if (i != j) {
                EXPECT_NEAR(r(i, j), std::abs(oracle::pearson(p[i].values, p[j].values)), 1e-12);
            }
        }
    }
}

TEST(Redundancy, AffineInvarianceOfProfilesCorrelation)
{
    const Dataset d = oracle::random_dataset(150, 6, 4, 17);
    const auto base = redundancy_scores(discrepancy_profiles(surrogate_of(d), all_features(6)));
    std::vector<double> values(d.matrix().data().begin(), d.matrix().data().end());
    for (auto& v : values) v = -4.0 * v + 12.5;
    const Dataset t(Matrix(d.samples(), d.features(), std::move(values)),
                    std::vector<Label>(d.labels().begin(), d.labels().end()), 4);
    const auto moved = redundancy_scores(discrepancy_profiles(surrogate_of(t), all_features(6)));
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(moved[i], base[i], 1e-9);
}

TEST(Prune, MatchesBruteForceOracle)
{
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const Dataset d = oracle::random_dataset(80, 4 + seed % 5, 3 + seed % 3, 500 + seed);
        const SurrogateMatrix s = surrogate_of(d);
        const ImportanceReport report = importance_scores(s);
        const auto idx = select_top_m(report, d.features());
        const auto profiles = discrepancy_profiles(s, idx);
        std::vector<std::vector<double>> by_position;
        for (const auto& p : profiles) by_position.push_back(p.values);
        for (std::size_t r = 0; r < idx.size(); ++r) {
            EXPECT_EQ(prune_redundant(idx, report, profiles, r), oracle::greedy_prune(idx, report.scores, by_position, r))
                << "seed " << seed << " r " << r;
        }
    }
}

TEST(Prune, DuplicatePairLosesTheLessImportantCopy)
{
    // Profiles 0, 1, 3 are mutually weakly correlated; 2 and 4 are copies.
    const std::vector<DiscrepancyProfile> p{profile(0, {1, 0, 0, 0, 0, -1}), profile(1, {0, 1, 0, 0, -1, 0}),
                                            profile(2, {0, 0, 1, -1, 0, 0.5}), profile(3, {1, 1, -1, 1, 1, 0}),
                                            profile(4, {0, 0, 1, -1, 0, 0.5})};
    ImportanceReport report;
    report.scores = {5.0, 4.0, 3.0, 2.0, 2.5};
    const std::vector<FeatureIndex> idx{0, 1, 2, 4, 3};
    EXPECT_EQ(prune_redundant(idx, report, p, 1), (std::vector<FeatureIndex>{0, 1, 2, 3}));
    report.scores = {5.0, 4.0, 3.0, 2.0, 3.0};
    EXPECT_EQ(prune_redundant(idx, report, p, 1), (std::vector<FeatureIndex>{0, 1, 2, 3}));
    report.scores = {5.0, 4.0, 3.0, 2.0, 3.5};
    EXPECT_EQ(prune_redundant(idx, report, p, 1), (std::vector<FeatureIndex>{0, 1, 4, 3}));
}

TEST(Prune, KeepsOneCopyUnlessTheDuplicateIsTheHub)
{
    // After one copy goes, the other is removed next only if its summed
    // correlation to the rest beats every other feature's. Whenever some
    // other feature is at least as connected, one copy must survive.
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const Dataset base = oracle::random_dataset(100, 6, 5, 900 + seed);
        const FeatureIndex dup = seed % 6;
        const std::vector<FeatureIndex> cols{0, 1, 2, 3, 4, 5, dup};
        const Dataset d = base.select_features(cols);
        const SurrogateMatrix s = surrogate_of(d);
        const ImportanceReport report = importance_scores(s);
        const auto idx = all_features(7);
        const auto profiles = discrepancy_profiles(s, idx);
        auto corr = [&](std::size_t a, std::size_t b) {
            return std::abs(oracle::pearson(profiles[a].values, profiles[b].values));
        };
        double dup_total = 0.0;
        for (std::size_t o = 0; o < 6; ++o) {
            if (o != dup) dup_total += corr(dup, o);
        }
        bool other_hub = false;
        for (std::size_t o = 0; o < 6; ++o) {
            if (o == dup) continue;
            double total = corr(dup, o);
            for (std::size_t q = 0; q < 6; ++q) {
                if (q != o && q != dup) total += corr(o, q);
            }
            other_hub = other_hub || total > dup_total + 1e-9;
        }
        const auto after_two = prune_redundant(idx, report, profiles, 2);
        const bool kept = std::find(after_two.begin(), after_two.end(), dup) != after_two.end() ||
                          std::find(after_two.begin(), after_two.end(), FeatureIndex{6}) != after_two.end();
        if (other_hub) {
            EXPECT_TRUE(kept) << "seed " << seed;
            ++checked;
        }
    }
    EXPECT_GT(checked, 20);
}

TEST(Prune, TieBreaksOnImportanceThenIndex)
{
    const std::vector<DiscrepancyProfile> p{profile(0, {1, 2, 3}), profile(1, {1, 2, 3}), profile(2, {3, 2, 1})};
    ImportanceReport report;
    report.scores = {1.0, 0.5, 2.0};
    const std::vector<FeatureIndex> idx{0, 1, 2};
    EXPECT_EQ(prune_redundant(idx, report, p, 1), (std::vector<FeatureIndex>{0, 2}));
    report.scores = {1.0, 1.0, 1.0};
    EXPECT_EQ(prune_redundant(idx, report, p, 1), (std::vector<FeatureIndex>{0, 1}));
    EXPECT_EQ(prune_redundant(idx, report, p, 2), (std::vector<FeatureIndex>{0}));
}

TEST(Prune, RemoveCountBounds)
{
    const std::vector<DiscrepancyProfile> p{profile(0, {1, 2, 3}), profile(1, {1, 0, 3})};
    ImportanceReport report;
    report.scores = {1.0, 2.0};
    const std::vector<FeatureIndex> idx{0, 1};
    EXPECT_EQ(prune_redundant(idx, report, p, 0), idx);
    try {
        prune_redundant(idx, report, p, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::RemoveCountOutOfRange);
    }
}
