#include "contrastfs/selector.hpp"

#include "contrastfs/error.hpp"
#include "contrastfs/moments.hpp"

#include <chrono>
#include <cmath>

namespace contrastfs {

double clamp_away_from_zero(double x, double epsilon) noexcept
{
    if (x < 0.0) {
        return -std::max(-x, epsilon);
    }
    return std::max(x, epsilon);
}

Matrix coefficient_of_variation(const ClassStats& class_stats, CvMode mode, double epsilon)
{
    const std::size_t classes = class_stats.class_count();
    const std::size_t d = class_stats.features();
    Matrix cv(classes, d, 1.0);
    if (mode == CvMode::unit) {
        return cv;
    }
    for (std::size_t k = 0; k < classes; ++k) {
        for (std::size_t t = 0; t < d; ++t) {
            const double mu = class_stats.means(k, t);
            const double sd = class_stats.stds(k, t);
            cv(k, t) = mode == CvMode::rel_std ? sd / clamp_away_from_zero(mu, epsilon)
                                               : mu / clamp_away_from_zero(sd, epsilon);
        }
    }
    return cv;
}

SurrogateMatrix build_surrogate(const ClassStats& class_stats, const GlobalStats& global_stats,
                                const SelectorConfig& config)
{
    const std::size_t classes = class_stats.class_count();
    const std::size_t d = class_stats.features();
    if (global_stats.mean.size() != d) {
        throw Error(ErrorKind::ShapeMismatch, "global statistics do not match class statistics");
    }
    if (!(config.epsilon > 0.0)) {
        throw Error(ErrorKind::InvalidConfig, "epsilon must be positive");
    }
    double total = 0.0;
    for (const auto c : class_stats.counts) {
        total += static_cast<double>(c);
    }

    const Matrix cv = coefficient_of_variation(class_stats, config.cv_mode, config.epsilon);
    SurrogateMatrix out{Matrix(classes, d), config};
    std::vector<double> numerator(d);
    std::vector<double> denominator(d);

    for (std::size_t k = 0; k < classes; ++k) {
        std::fill(numerator.begin(), numerator.end(), 0.0);
        std::fill(denominator.begin(), denominator.end(), 0.0);
        const auto mu_k = class_stats.means.row(k);
        const auto sd_k = class_stats.stds.row(k);
        for (std::size_t j = 0; j < classes; ++j) {
            const double nj = static_cast<double>(class_stats.counts[j]);
            const auto mu_j = class_stats.means.row(j);
            const auto sd_j = class_stats.stds.row(j);
            for (std::size_t t = 0; t < d; ++t) {
                numerator[t] += nj * (mu_k[t] - mu_j[t]);
                denominator[t] += sd_k[t] - sd_j[t];
            }
        }
        auto z = out.z.row(k);
        const auto w = cv.row(k);
        for (std::size_t t = 0; t < d; ++t) {
            const double deviation = numerator[t] / total;
            const double scale = config.denominator_mode == DenominatorMode::as_written
                                     ? denominator[t] / static_cast<double>(classes)
                                     : global_stats.std[t];
            z[t] = w[t] * (deviation / clamp_away_from_zero(scale, config.epsilon));
        }
    }
    return out;
}

ImportanceReport importance_scores(const SurrogateMatrix& surrogate)
{
    const std::size_t classes = surrogate.z.rows();
    const std::size_t d = surrogate.z.cols();
    if (classes < 2) {
        throw Error(ErrorKind::DegenerateClassCount,
                    "importance needs at least two classes, got " + std::to_string(classes));
    }
    std::vector<double> scores(d, 0.0);
    for (std::size_t i = 0; i < classes; ++i) {
        const auto zi = surrogate.z.row(i);
        for (std::size_t j = i + 1; j < classes; ++j) {
            const auto zj = surrogate.z.row(j);
            for (std::size_t t = 0; t < d; ++t) {
                scores[t] += std::abs(zi[t] - zj[t]);
            }
        }
    }
    // Each unordered pair stands for both ordered pairs.
    const double norm = 2.0 / (static_cast<double>(classes) * static_cast<double>(classes - 1));
    for (auto& s : scores) {
        s *= norm;
    }
    ImportanceReport report;
    report.method = "contrastfs";
    report.config = echo(surrogate.config);
    report.ranking = rank_by_score(scores);
    report.scores = std::move(scores);
    return report;
}

std::vector<FeatureIndex> select_top_m(const ImportanceReport& report, std::size_t m)
{
    if (m < 1 || m > report.ranking.size()) {
        throw Error(ErrorKind::MOutOfRange,
                    "m=" + std::to_string(m) + " outside [1, " + std::to_string(report.ranking.size()) + "]");
    }
    return {report.ranking.begin(), report.ranking.begin() + static_cast<std::ptrdiff_t>(m)};
}

ImportanceReport score_features(const Dataset& dataset, const SelectorConfig& config)
{
    validate_dataset(dataset);
    return score_features_unchecked(dataset, config);
}

ImportanceReport score_features_unchecked(const Dataset& dataset, const SelectorConfig& config)
{
    if (dataset.class_count() < 2) {
        throw Error(ErrorKind::DegenerateClassCount, "importance needs at least two classes");
    }
    const auto start = std::chrono::steady_clock::now();
    const ClassStats cs = compute_class_stats(dataset);
    const GlobalStats gs = compute_global_stats(dataset, cs);
    ImportanceReport report = importance_scores(build_surrogate(cs, gs, config));
    report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

Selection select(const Dataset& dataset, const SelectorConfig& config)
{
    config.validate(dataset.features());
    Selection s;
    s.report = score_features(dataset, config);
    s.indices = select_top_m(s.report, config.m);
    return s;
}

}  // namespace contrastfs
