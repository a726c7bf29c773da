#include "contrastfs/baselines.hpp"

#include "contrastfs/error.hpp"
#include "contrastfs/moments.hpp"
#include "contrastfs/rng.hpp"
#include "contrastfs/selector.hpp"

#include <chrono>
#include <numeric>
#include <sstream>

namespace contrastfs {

ImportanceReport fisher_scores(const Dataset& dataset, double epsilon)
{
    validate_dataset(dataset);
    return fisher_scores_unchecked(dataset, epsilon);
}

ImportanceReport fisher_scores_unchecked(const Dataset& dataset, double epsilon)
{
    if (dataset.class_count() < 2) {
        throw Error(ErrorKind::DegenerateClassCount, "Fisher score needs at least two classes");
    }
    if (!(epsilon > 0.0)) {
        throw Error(ErrorKind::InvalidConfig, "epsilon must be positive");
    }
    const auto start = std::chrono::steady_clock::now();
    const ClassStats cs = compute_class_stats(dataset);
    const GlobalStats gs = compute_global_stats(dataset, cs);

    const std::size_t d = dataset.features();
    std::vector<double> between(d, 0.0);
    std::vector<double> within(d, 0.0);
    for (std::size_t k = 0; k < cs.class_count(); ++k) {
        const auto nk = static_cast<double>(cs.counts[k]);
        const auto mu = cs.means.row(k);
        const auto sd = cs.stds.row(k);
        for (std::size_t t = 0; t < d; ++t) {
            const double dm = mu[t] - gs.mean[t];
            between[t] += nk * dm * dm;
            within[t] += nk * sd[t] * sd[t];
        }
    }
    std::vector<double> scores(d);
    for (std::size_t t = 0; t < d; ++t) {
        scores[t] = between[t] / clamp_away_from_zero(within[t], epsilon);
    }

    ImportanceReport report;
    report.method = "fisher";
    std::ostringstream eps;
    eps.precision(17);
    eps << epsilon;
    report.config = {{"epsilon", eps.str()}};
    report.ranking = rank_by_score(scores);
    report.scores = std::move(scores);
    report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<FeatureIndex> random_selection(std::size_t d, std::size_t m, std::uint64_t seed)
{
    if (m > d) {
        throw Error(ErrorKind::MOutOfRange, "cannot draw " + std::to_string(m) + " of " + std::to_string(d) + " features");
    }
    std::vector<FeatureIndex> pool(d);
    std::iota(pool.begin(), pool.end(), FeatureIndex{0});
    Rng rng(seed);
    // Partial Fisher-Yates: the first m slots are the draw.
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + rng.below(d - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(m);
    return pool;
}

}  // namespace contrastfs
