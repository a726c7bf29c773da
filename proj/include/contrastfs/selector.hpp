#pragma once

#include "contrastfs/core.hpp"

#include <vector>

namespace contrastfs {

/// sign(x) * max(|x|, epsilon), with sign(0) = +1.
double clamp_away_from_zero(double x, double epsilon) noexcept;

/// C x d weights applied to the surrogate: 1, sigma/mu or mu/sigma
/// (the divisor is clamped away from zero).
Matrix coefficient_of_variation(const ClassStats& class_stats, CvMode mode, double epsilon);

/// Dimensionless per-class representation of every feature:
///
///   as_written: Z[k][t] = Cv[k][t] * (mu[k][t] - mu[t]) / clamp(sigma[k][t] - mean_k sigma[k][t])
///   global_std: Z[k][t] = Cv[k][t] * (mu[k][t] - mu[t]) / clamp(sigma[t])
///
/// The deviations mu[k] - mu and sigma[k] - mean(sigma) are evaluated as
/// weighted sums of pairwise class differences, which are exactly
/// antisymmetric: for two equal-sized classes Z[0] == Z[1] bit for bit.
SurrogateMatrix build_surrogate(const ClassStats& class_stats, const GlobalStats& global_stats,
                                const SelectorConfig& config);

/// Mean absolute difference of Z over ordered class pairs, ranked.
/// Throws DegenerateClassCount when C < 2.
ImportanceReport importance_scores(const SurrogateMatrix& surrogate);

/// First m entries of the ranking. Throws MOutOfRange unless 1 <= m <= d.
std::vector<FeatureIndex> select_top_m(const ImportanceReport& report, std::size_t m);

/// Validates the dataset and scores every feature. `config.m` is not used.
/// The report's wall time covers moments, surrogate and scoring.
ImportanceReport score_features(const Dataset& dataset, const SelectorConfig& config);

/// score_features without the dataset scan; the caller has validated it.
ImportanceReport score_features_unchecked(const Dataset& dataset, const SelectorConfig& config);

struct Selection {
    ImportanceReport report;
    std::vector<FeatureIndex> indices;
};

/// score_features followed by select_top_m(config.m).
Selection select(const Dataset& dataset, const SelectorConfig& config);

}  // namespace contrastfs
