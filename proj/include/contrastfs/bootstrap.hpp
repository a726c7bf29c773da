#pragma once

#include "contrastfs/core.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace contrastfs {

enum class BootstrapMode {
    score,   ///< average the importance scores of B resampled selector runs
    moment,  ///< average the resampled moments, then score once
};

std::string_view to_string(BootstrapMode mode) noexcept;
BootstrapMode parse_bootstrap_mode(std::string_view text);

struct BootstrapOptions {
    std::size_t replicates = 30;
    std::uint64_t seed = 0;
    BootstrapMode mode = BootstrapMode::score;
    /// Test hook: every replicate is the original sample.
    bool identity_resample = false;
};

/// Per-sample multiplicities of one stratified resample: within each class k
/// (in class order) n_k rows are drawn uniformly with replacement from that
/// class, using a generator seeded with `seed`.
std::vector<std::uint32_t> stratified_resample_weights(const Dataset& dataset, std::uint64_t seed);

/// Bootstrap-aggregated ContrastFS importance. Replicate b is drawn with
/// seed derive_seed(options.seed, b); replicates run concurrently and are
/// reduced in replicate order, so the report depends only on the inputs.
/// Throws InvalidReplicateCount when replicates == 0.
ImportanceReport bootstrap_scores(const Dataset& dataset, const SelectorConfig& config, const BootstrapOptions& options);

}  // namespace contrastfs
