#include "contrastfs/bootstrap.hpp"

#include "contrastfs/error.hpp"
#include "contrastfs/moments.hpp"
#include "contrastfs/parallel.hpp"
#include "contrastfs/rng.hpp"
#include "contrastfs/selector.hpp"

#include <chrono>
#include <string>

namespace contrastfs {

std::string_view to_string(BootstrapMode mode) noexcept
{
    return mode == BootstrapMode::score ? "score" : "moment";
}

BootstrapMode parse_bootstrap_mode(std::string_view text)
{
    if (text == "score") return BootstrapMode::score;
    if (text == "moment") return BootstrapMode::moment;
    throw Error(ErrorKind::InvalidConfig, "unknown bootstrap mode '" + std::string(text) + "'");
}

namespace {

std::vector<std::vector<std::size_t>> rows_by_class(const Dataset& dataset)
{
    std::vector<std::vector<std::size_t>> rows(dataset.class_count());
    const auto labels = dataset.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        rows[labels[i]].push_back(i);
    }
    return rows;
}

std::vector<std::uint32_t> resample(const Dataset& dataset, const std::vector<std::vector<std::size_t>>& rows,
                                    std::uint64_t seed)
{
    std::vector<std::uint32_t> weights(dataset.samples(), 0);
    Rng rng(seed);
    for (const auto& members : rows) {
        for (std::size_t draw = 0; draw < members.size(); ++draw) {
            ++weights[members[rng.below(members.size())]];
        }
    }
    return weights;
}

}  // namespace

std::vector<std::uint32_t> stratified_resample_weights(const Dataset& dataset, std::uint64_t seed)
{
    return resample(dataset, rows_by_class(dataset), seed);
}

ImportanceReport bootstrap_scores(const Dataset& dataset, const SelectorConfig& config, const BootstrapOptions& options)
{
    if (options.replicates == 0) {
        throw Error(ErrorKind::InvalidReplicateCount, "bootstrap needs at least one replicate");
    }
    validate_dataset(dataset);
    if (dataset.class_count() < 2) {
        throw Error(ErrorKind::DegenerateClassCount, "importance needs at least two classes");
    }
    const auto start = std::chrono::steady_clock::now();
    const std::size_t d = dataset.features();
    const std::size_t classes = dataset.class_count();
    const std::size_t replicates = options.replicates;
    const auto rows = rows_by_class(dataset);

    auto stats_for = [&](std::size_t b) {
        const auto weights = options.identity_resample ? std::vector<std::uint32_t>{}
                                                       : resample(dataset, rows, derive_seed(options.seed, b));
        return compute_class_stats(dataset, weights, 1);
    };

    std::vector<double> scores(d, 0.0);
    if (options.mode == BootstrapMode::score) {
        std::vector<std::vector<double>> per_replicate(replicates);
        parallel_for(replicates, [&](std::size_t b0, std::size_t b1) {
            for (std::size_t b = b0; b < b1; ++b) {
                const ClassStats cs = stats_for(b);
                per_replicate[b] = importance_scores(build_surrogate(cs, compute_global_stats(cs), config)).scores;
            }
        });
        for (const auto& s : per_replicate) {
            for (std::size_t t = 0; t < d; ++t) {
                scores[t] += s[t];
            }
        }
        for (auto& s : scores) {
            s /= static_cast<double>(replicates);
        }
    } else {
        std::vector<ClassStats> per_replicate(replicates);
        parallel_for(replicates, [&](std::size_t b0, std::size_t b1) {
            for (std::size_t b = b0; b < b1; ++b) {
                per_replicate[b] = stats_for(b);
            }
        });
        ClassStats mean_cs{Matrix(classes, d), Matrix(classes, d), per_replicate.front().counts};
        GlobalStats mean_gs{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
        for (const auto& cs : per_replicate) {
            const GlobalStats gs = compute_global_stats(cs);
            for (std::size_t i = 0; i < classes * d; ++i) {
                mean_cs.means.data()[i] += cs.means.data()[i];
                mean_cs.stds.data()[i] += cs.stds.data()[i];
            }
            for (std::size_t t = 0; t < d; ++t) {
                mean_gs.mean[t] += gs.mean[t];
                mean_gs.std[t] += gs.std[t];
                mean_gs.mean_class_std[t] += gs.mean_class_std[t];
            }
        }
        const auto b = static_cast<double>(replicates);
        for (auto& v : mean_cs.means.data()) v /= b;
        for (auto& v : mean_cs.stds.data()) v /= b;
        for (std::size_t t = 0; t < d; ++t) {
            mean_gs.mean[t] /= b;
            mean_gs.std[t] /= b;
            mean_gs.mean_class_std[t] /= b;
        }
        scores = importance_scores(build_surrogate(mean_cs, mean_gs, config)).scores;
    }

    ImportanceReport report;
    report.method = "contrastfs-bootstrap";
    report.config = echo(config);
    report.config.emplace_back("replicates", std::to_string(replicates));
    report.config.emplace_back("seed", std::to_string(options.seed));
    report.config.emplace_back("mode", std::string(to_string(options.mode)));
    report.ranking = rank_by_score(scores);
    report.scores = std::move(scores);
    report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace contrastfs
