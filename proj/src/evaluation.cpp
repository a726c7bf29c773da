#include "contrastfs/evaluation.hpp"

#include "contrastfs/baselines.hpp"
#include "contrastfs/error.hpp"
#include "contrastfs/parallel.hpp"
#include "contrastfs/rng.hpp"
#include "contrastfs/selector.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace contrastfs {

std::string Method::name() const
{
    switch (kind) {
    case MethodKind::contrastfs: return "contrastfs";
    case MethodKind::fisher: return "fisher";
    case MethodKind::random: return "random";
    case MethodKind::bootstrap: return "bootstrap";
    }
    return "unknown";
}

MethodKind parse_method_kind(std::string_view text)
{
    if (text == "contrastfs") return MethodKind::contrastfs;
    if (text == "fisher") return MethodKind::fisher;
    if (text == "random") return MethodKind::random;
    if (text == "bootstrap") return MethodKind::bootstrap;
    throw Error(ErrorKind::InvalidConfig, "unknown method '" + std::string(text) + "'");
}

namespace {

ImportanceReport run_unchecked(const Method& method, const Dataset& dataset)
{
    switch (method.kind) {
    case MethodKind::contrastfs: return score_features_unchecked(dataset, method.config);
    case MethodKind::fisher: return fisher_scores_unchecked(dataset, method.config.epsilon);
    case MethodKind::bootstrap: return bootstrap_scores(dataset, method.config, method.bootstrap);
    case MethodKind::random: {
        const std::size_t d = dataset.features();
        ImportanceReport report;
        report.method = "random";
        report.config = {{"seed", std::to_string(method.seed)}};
        report.ranking = random_selection(d, d, method.seed);
        report.scores.assign(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            report.scores[report.ranking[i]] = static_cast<double>(d - i);
        }
        return report;
    }
    }
    throw Error(ErrorKind::InvalidConfig, "unknown method");
}

}  // namespace

ImportanceReport run_method(const Method& method, const Dataset& dataset)
{
    validate_dataset(dataset);
    return run_unchecked(method, dataset);
}

Method harness_method(const Method& method, std::size_t class_count)
{
    Method out = method;
    const bool uses_selector = method.kind == MethodKind::contrastfs || method.kind == MethodKind::bootstrap;
    if (uses_selector && class_count == 2) {
        out.config.denominator_mode = DenominatorMode::global_std;
    }
    return out;
}

double knn_accuracy(const Dataset& train, const Dataset& test, std::span<const FeatureIndex> indices, std::size_t k)
{
    if (indices.empty()) {
        throw Error(ErrorKind::EmptySelection, "k-NN needs at least one feature");
    }
    if (k < 1 || k > train.samples()) {
        throw Error(ErrorKind::KOutOfRange,
                    "k=" + std::to_string(k) + " outside [1, " + std::to_string(train.samples()) + "]");
    }
    if (test.samples() == 0) {
        throw Error(ErrorKind::EmptyDataset, "test set is empty");
    }
    if (train.features() != test.features()) {
        throw Error(ErrorKind::ShapeMismatch, "train and test have different feature counts");
    }
    const Matrix xtr = train.select_features(indices).matrix();
    const Matrix xte = test.select_features(indices).matrix();
    const std::size_t m = indices.size();
    const std::size_t n_train = train.samples();
    const std::size_t classes = std::max(train.class_count(), test.class_count());
    const auto ytr = train.labels();
    const auto yte = test.labels();

    std::vector<std::size_t> correct_per_point(test.samples(), 0);
    parallel_for(test.samples(), [&](std::size_t begin, std::size_t end) {
        // (distance, train index), sorted ascending lexicographically.
        std::vector<std::pair<double, std::size_t>> best;
        best.reserve(k + 1);
        std::vector<std::size_t> votes(classes);
        for (std::size_t q = begin; q < end; ++q) {
            const double* __restrict query = xte.row(q).data();
            best.clear();
            for (std::size_t i = 0; i < n_train; ++i) {
                const double* __restrict p = xtr.row(i).data();
                double dist = 0.0;
                for (std::size_t j = 0; j < m; ++j) {
                    const double diff = p[j] - query[j];
                    dist += diff * diff;
                }
                if (best.size() == k && !(dist < best.back().first)) {
                    continue;  // equal distance: the earlier index already holds the slot
                }
                const std::pair<double, std::size_t> entry{dist, i};
                best.insert(std::upper_bound(best.begin(), best.end(), entry), entry);
                if (best.size() > k) {
                    best.pop_back();
                }
            }
            std::fill(votes.begin(), votes.end(), 0);
            for (const auto& [dist, i] : best) {
                ++votes[ytr[i]];
            }
            const auto winner = static_cast<Label>(std::max_element(votes.begin(), votes.end()) - votes.begin());
            correct_per_point[q] = winner == yte[q] ? 1 : 0;
        }
    });
    std::size_t correct = 0;
    for (const auto c : correct_per_point) {
        correct += c;
    }
    return static_cast<double>(correct) / static_cast<double>(test.samples());
}

TimingStats time_method(const Method& method, const Dataset& dataset, std::size_t repeats, std::size_t warmups)
{
    if (repeats < 1) {
        throw Error(ErrorKind::InvalidArgument, "timing needs at least one repeat");
    }
    validate_dataset(dataset);
    for (std::size_t w = 0; w < warmups; ++w) {
        (void)run_unchecked(method, dataset);
    }
    TimingStats stats;
    stats.method = method.name();
    stats.workers = worker_count();
    std::vector<double> reference;
    for (std::size_t r = 0; r < repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        const ImportanceReport report = run_unchecked(method, dataset);
        stats.seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        if (r == 0) {
            reference = report.scores;
        } else if (report.scores != reference) {
            throw std::logic_error("scores of " + method.name() + " changed between timing repeats");
        }
    }
    stats.min = *std::min_element(stats.seconds.begin(), stats.seconds.end());
    double sum = 0.0;
    for (const double s : stats.seconds) {
        sum += s;
    }
    stats.mean = sum / static_cast<double>(repeats);
    if (repeats > 1) {
        double ss = 0.0;
        for (const double s : stats.seconds) {
            ss += (s - stats.mean) * (s - stats.mean);
        }
        stats.std = std::sqrt(ss / static_cast<double>(repeats - 1));
    }
    return stats;
}

double relative_std(std::span<const double> values)
{
    if (values.size() < 2) {
        throw Error(ErrorKind::TooFewValues, "relative std needs at least two values");
    }
    double mean = 0.0;
    for (const double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    if (mean == 0.0) {
        throw Error(ErrorKind::ZeroMean, "relative std of values with zero mean");
    }
    double ss = 0.0;
    for (const double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(values.size() - 1)) / mean;
}

std::vector<std::pair<std::size_t, double>> accuracy_curve(const Dataset& train, const Dataset& test,
                                                           const Method& method, std::span<const std::size_t> sizes,
                                                           std::size_t k)
{
    if (sizes.empty()) {
        throw Error(ErrorKind::InvalidArgument, "accuracy curve needs at least one size");
    }
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1 || sizes[i] > train.features()) {
            throw Error(ErrorKind::MOutOfRange, "size " + std::to_string(sizes[i]) + " outside [1, " +
                                                    std::to_string(train.features()) + "]");
        }
        if (i > 0 && sizes[i] <= sizes[i - 1]) {
            throw Error(ErrorKind::InvalidArgument, "sizes must be strictly ascending without duplicates");
        }
    }
    const ImportanceReport report = run_method(harness_method(method, train.class_count()), train);
    std::vector<std::pair<std::size_t, double>> curve;
    for (const auto m : sizes) {
        const std::span<const FeatureIndex> prefix(report.ranking.data(), m);
        curve.emplace_back(m, knn_accuracy(train, test, prefix, k));
    }
    return curve;
}

CurveStudy run_curve_study(const Dataset& dataset, std::span<const Method> methods,
                           std::span<const std::size_t> sizes, std::span<const std::uint64_t> seeds,
                           const SplitSpec& split_template, std::size_t k)
{
    if (methods.empty() || seeds.empty()) {
        throw Error(ErrorKind::InvalidArgument, "curve study needs at least one method and one seed");
    }
    std::vector<Split> splits;
    splits.reserve(seeds.size());
    for (const auto seed : seeds) {
        SplitSpec spec = split_template;
        spec.seed = seed;
        splits.push_back(split(dataset, spec));
    }

    CurveStudy study;
    for (const auto& base : methods) {
        std::vector<std::vector<double>> by_size(sizes.size());
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            Method method = base;
            method.seed = derive_seed(base.seed, seeds[s]);
            method.bootstrap.seed = derive_seed(base.bootstrap.seed, seeds[s]);
            CurveRun run{base.name(), seeds[s], accuracy_curve(splits[s].train, splits[s].test, method, sizes, k)};
            for (std::size_t i = 0; i < sizes.size(); ++i) {
                by_size[i].push_back(run.points[i].second);
            }
            study.runs.push_back(std::move(run));
        }
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            RsdRow row{base.name(), sizes[i], 0.0, 0.0, 0.0};
            for (const double a : by_size[i]) {
                row.mean += a;
            }
            row.mean /= static_cast<double>(by_size[i].size());
            if (by_size[i].size() >= 2) {
                double ss = 0.0;
                for (const double a : by_size[i]) {
                    ss += (a - row.mean) * (a - row.mean);
                }
                row.std = std::sqrt(ss / static_cast<double>(by_size[i].size() - 1));
                row.rsd = relative_std(by_size[i]);
            }
            study.rsd.push_back(row);
        }
    }
    return study;
}

}  // namespace contrastfs
