#pragma once

#include "contrastfs/core.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace contrastfs {

struct CsvOptions {
    /// Column name (requires a header) or zero-based column index.
    std::variant<std::string, std::size_t> label_column = std::size_t{0};
    bool has_header = true;
    char delimiter = ',';
    /// Fixed label encoding; when empty the labels found in the file are
    /// sorted (numerically if every label is an integer) and numbered.
    std::vector<std::string> class_names;
};

/// RFC-4180 style CSV: quoted fields, doubled quotes, CRLF tolerated.
/// Feature columns keep their file order. Throws Io, Parse, MissingLabelColumn
/// or NonFiniteValue.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options);

/// MNIST-style IDX pair (images 0x00000803, labels 0x00000801), plain or
/// gzip-compressed. Pixels are flattened row-major and kept in [0, 255].
/// Throws Io, BadMagic, CountMismatch or Truncated.
Dataset load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path);

/// Binary dataset cache, little-endian:
///   "CFSDATA\0", u32 version (1), u64 n, u64 d, u64 C,
///   n*d f64 features row-major, n u32 labels.
void save_cache(const Dataset& dataset, const std::filesystem::path& path);
Dataset load_cache(const std::filesystem::path& path);

struct SplitSpec {
    std::uint64_t seed = 0;
    double train_fraction = 0.7;
    bool stratified = true;
};

struct Split {
    Dataset train;
    Dataset test;
    std::vector<std::size_t> train_indices;  // ascending
    std::vector<std::size_t> test_indices;   // ascending
};

/// Seeded train/test partition.
///
/// Stratified: each class is shuffled, floor(n_k * f) rows go to train
/// (at least 1, at most n_k - 1), and the remaining round(n * f) - sum
/// rows are handed out one per class in a seeded class order.
/// Otherwise round(n * f) rows of a seeded shuffle go to train.
/// Throws ClassTooSmall when a stratified class has fewer than 2 samples.
Split split(const Dataset& dataset, const SplitSpec& spec);

/// features + N(0, sigma^2) per cell, cells visited row-major. Labels unchanged.
Dataset add_gaussian_noise(const Dataset& dataset, double sigma, std::uint64_t seed);

}  // namespace contrastfs
