#pragma once

#include "contrastfs/bootstrap.hpp"
#include "contrastfs/core.hpp"
#include "contrastfs/ingestion.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace contrastfs {

enum class MethodKind { contrastfs, fisher, random, bootstrap };

/// A named feature-ranking method with everything needed to rerun it.
struct Method {
    MethodKind kind = MethodKind::contrastfs;
    SelectorConfig config{};       // contrastfs, bootstrap; fisher uses epsilon
    std::uint64_t seed = 0;        // random
    BootstrapOptions bootstrap{};  // bootstrap

    std::string name() const;
};

/// Parses "contrastfs", "fisher", "random" or "bootstrap". Throws InvalidConfig.
MethodKind parse_method_kind(std::string_view text);

/// Full ranking of `dataset` by `method`. The random method ranks a seeded
/// permutation and reports descending placeholder scores.
ImportanceReport run_method(const Method& method, const Dataset& dataset);

/// The as_written denominator cancels exactly for two classes (every score
/// collapses to 0), so the benchmark harness switches contrastfs and
/// bootstrap methods to global_std there. Other methods pass through.
Method harness_method(const Method& method, std::size_t class_count);

/// Majority vote of the k nearest training points (squared Euclidean
/// distance over `indices`). Distance ties prefer the lower training index,
/// vote ties the smaller class id. Throws EmptySelection or KOutOfRange.
double knn_accuracy(const Dataset& train, const Dataset& test, std::span<const FeatureIndex> indices, std::size_t k);

struct TimingStats {
    std::string method;
    std::vector<double> seconds;
    double min = 0.0;
    double mean = 0.0;
    double std = 0.0;
    std::size_t workers = 1;
};

/// Wall time of the full-feature scoring pass of `method`, after `warmups`
/// untimed runs. The dataset is validated once, outside the timed region.
/// Throws std::logic_error if two repeats disagree on any score.
TimingStats time_method(const Method& method, const Dataset& dataset, std::size_t repeats, std::size_t warmups);

/// Unbiased sample std divided by the mean. Throws TooFewValues or ZeroMean.
double relative_std(std::span<const double> values);

/// Accuracy of the top-m prefix of one ranking for each m in `sizes`
/// (strictly ascending, each in [1, d]). The ranking comes from
/// harness_method(method, C). Throws InvalidArgument otherwise.
std::vector<std::pair<std::size_t, double>> accuracy_curve(const Dataset& train, const Dataset& test,
                                                           const Method& method, std::span<const std::size_t> sizes,
                                                           std::size_t k);

struct CurveRun {
    std::string method;
    std::uint64_t split_seed = 0;
    std::vector<std::pair<std::size_t, double>> points;
};

struct RsdRow {
    std::string method;
    std::size_t m = 0;
    double mean = 0.0;
    double std = 0.0;
    double rsd = 0.0;
};

struct CurveStudy {
    std::vector<CurveRun> runs;   // method-major, then split seed
    std::vector<RsdRow> rsd;      // method-major, then size
};

/// Repeated-split protocol: for every seed, split `dataset` with
/// `split_template` (its seed replaced), rank on train with every method and
/// score each size on test. Seeded methods (random, bootstrap) use
/// derive_seed(method seed, split seed) so reruns differ per split but stay
/// reproducible. RSD rows summarise each (method, size) over the seeds.
CurveStudy run_curve_study(const Dataset& dataset, std::span<const Method> methods,
                           std::span<const std::size_t> sizes, std::span<const std::uint64_t> seeds,
                           const SplitSpec& split_template, std::size_t k);

}  // namespace contrastfs
