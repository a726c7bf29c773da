#pragma once

#include "contrastfs/core.hpp"

#include <cstdint>
#include <span>

namespace contrastfs {

/// Per-class mean and unbiased standard deviation of every feature, in one
/// pass over the rows.
///
/// Accumulation is shifted by the first sample of each class so that large
/// offsets do not cancel. Each (class, feature) sum runs in sample index
/// order; parallelism splits the feature range only, so the result is
/// bitwise identical for any worker count.
ClassStats compute_class_stats(const Dataset& dataset);

/// Same, with an integer multiplicity per sample (bootstrap resamples).
/// `weights` is empty (all ones) or has one entry per sample. Every class
/// must keep a positive total weight.
ClassStats compute_class_stats(const Dataset& dataset, std::span<const std::uint32_t> weights,
                               std::size_t workers);

/// Whole-dataset mean and unbiased std plus the unweighted mean of class stds.
///
/// Derived from the class moments with the pooled decomposition
///   (n-1) s^2 = sum_k (n_k-1) s_k^2 + sum_k n_k (m_k - m)^2
/// so no second pass over the samples is needed.
GlobalStats compute_global_stats(const ClassStats& class_stats);

/// Checks that `class_stats` counts add up to the dataset size.
GlobalStats compute_global_stats(const Dataset& dataset, const ClassStats& class_stats);

}  // namespace contrastfs
