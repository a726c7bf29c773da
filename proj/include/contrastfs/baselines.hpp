#pragma once

#include "contrastfs/core.hpp"

#include <cstdint>
#include <vector>

namespace contrastfs {

/// Fisher score on the shared moment substrate:
///   F[t] = sum_k n_k (mu[k][t] - mu[t])^2 / clamp(sum_k n_k sigma[k][t]^2)
/// Throws DegenerateClassCount when C < 2.
ImportanceReport fisher_scores(const Dataset& dataset, double epsilon = 1e-12);
ImportanceReport fisher_scores_unchecked(const Dataset& dataset, double epsilon = 1e-12);

/// m distinct indices from [0, d), uniform, seeded. Throws MOutOfRange when m > d.
std::vector<FeatureIndex> random_selection(std::size_t d, std::size_t m, std::uint64_t seed);

}  // namespace contrastfs
