#pragma once

#include "contrastfs/core.hpp"

#include <span>
#include <vector>

namespace contrastfs {

/// Signed surrogate differences Z[i][t] - Z[j][t], i < j lexicographic, for
/// each feature in `indices`. Throws TooFewClasses when C < 3 (fewer than two
/// pairs leaves nothing to correlate).
std::vector<DiscrepancyProfile> discrepancy_profiles(const SurrogateMatrix& surrogate,
                                                     std::span<const FeatureIndex> indices);

/// |Pearson| between profiles. Symmetric, unit diagonal, entries in [0, 1].
/// A zero-variance profile correlates 0 with every other profile.
Matrix redundancy_matrix(std::span<const DiscrepancyProfile> profiles);

/// Row means of redundancy_matrix, diagonal included.
std::vector<double> redundancy_scores(std::span<const DiscrepancyProfile> profiles);

/// Removes `remove_count` features from `indices` one at a time. Each step
/// recomputes redundancy over the survivors and drops the most redundant
/// feature; ties go to the lower importance score, then the higher index.
/// Survivors keep their order in `indices`. `profiles` must cover every
/// feature in `indices`. Throws RemoveCountOutOfRange unless r < |indices|.
std::vector<FeatureIndex> prune_redundant(std::span<const FeatureIndex> indices, const ImportanceReport& report,
                                          std::span<const DiscrepancyProfile> profiles, std::size_t remove_count);

}  // namespace contrastfs
