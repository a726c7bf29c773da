#include "contrastfs/moments.hpp"

#include "contrastfs/error.hpp"
#include "contrastfs/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace contrastfs {

namespace {

struct ColumnBlock {
    std::size_t begin;
    std::size_t end;
};

void accumulate_block(const Dataset& dataset, std::span<const std::uint32_t> weights, ColumnBlock block,
                      ClassStats& out)
{
    const std::size_t n = dataset.samples();
    const std::size_t classes = dataset.class_count();
    const std::size_t width = block.end - block.begin;
    const auto labels = dataset.labels();

    std::vector<double> shift(classes * width, 0.0);
    std::vector<double> sums(classes * width, 0.0);
    std::vector<double> squares(classes * width, 0.0);
    std::vector<std::size_t> counts(classes, 0);

    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t w = weights.empty() ? 1u : weights[i];
        if (w == 0) {
            continue;
        }
        const std::size_t k = labels[i];
        const double* __restrict x = dataset.row(i).data() + block.begin;
        double* __restrict sh = shift.data() + k * width;
        double* __restrict s = sums.data() + k * width;
        double* __restrict q = squares.data() + k * width;
        if (counts[k] == 0) {
            std::copy(x, x + width, sh);
        }
        counts[k] += w;
        if (w == 1) {
            for (std::size_t t = 0; t < width; ++t) {
                const double dv = x[t] - sh[t];
                s[t] += dv;
                q[t] += dv * dv;
            }
        } else {
            const double wd = static_cast<double>(w);
            for (std::size_t t = 0; t < width; ++t) {
                const double dv = x[t] - sh[t];
                s[t] += wd * dv;
                q[t] += wd * dv * dv;
            }
        }
    }

    for (std::size_t k = 0; k < classes; ++k) {
        const auto nk = static_cast<double>(counts[k]);
        for (std::size_t t = 0; t < width; ++t) {
            const std::size_t at = k * width + t;
            const double s = sums[at];
            out.means(k, block.begin + t) = shift[at] + s / nk;
            if (counts[k] > 1) {
                const double ss = std::max(0.0, squares[at] - s * s / nk);
                out.stds(k, block.begin + t) = std::sqrt(ss / (nk - 1.0));
            } else {
                out.stds(k, block.begin + t) = 0.0;
            }
        }
    }
}

}  // namespace

ClassStats compute_class_stats(const Dataset& dataset)
{
    return compute_class_stats(dataset, {}, worker_count());
}

ClassStats compute_class_stats(const Dataset& dataset, std::span<const std::uint32_t> weights, std::size_t workers)
{
    const std::size_t n = dataset.samples();
    const std::size_t d = dataset.features();
    const std::size_t classes = dataset.class_count();
    if (!weights.empty() && weights.size() != n) {
        throw Error(ErrorKind::ShapeMismatch, "weight vector length does not match sample count");
    }

    ClassStats stats{Matrix(classes, d), Matrix(classes, d), std::vector<std::size_t>(classes, 0)};
    const auto labels = dataset.labels();
    for (std::size_t i = 0; i < n; ++i) {
        stats.counts[labels[i]] += weights.empty() ? 1u : weights[i];
    }
    for (std::size_t k = 0; k < classes; ++k) {
        if (stats.counts[k] == 0) {
            throw Error(ErrorKind::EmptyClass, "class " + std::to_string(k) + " has no samples");
        }
    }

    // Blocks narrower than this lose the contiguous inner loop.
    constexpr std::size_t min_block = 64;
    const std::size_t blocks = std::max<std::size_t>(1, std::min(workers, (d + min_block - 1) / min_block));
    parallel_for(
        blocks,
        [&](std::size_t b0, std::size_t b1) {
            for (std::size_t b = b0; b < b1; ++b) {
                accumulate_block(dataset, weights, {d * b / blocks, d * (b + 1) / blocks}, stats);
            }
        },
        blocks);
    return stats;
}

GlobalStats compute_global_stats(const ClassStats& class_stats)
{
    const std::size_t classes = class_stats.class_count();
    const std::size_t d = class_stats.features();
    const auto n = static_cast<double>(std::accumulate(class_stats.counts.begin(), class_stats.counts.end(),
                                                       std::size_t{0}));
    GlobalStats g{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};

    // Shifted by the first class mean: a constant feature gets its exact value back.
    const auto base = class_stats.means.row(0);
    for (std::size_t k = 0; k < classes; ++k) {
        const auto nk = static_cast<double>(class_stats.counts[k]);
        const auto mu = class_stats.means.row(k);
        const auto sd = class_stats.stds.row(k);
        for (std::size_t t = 0; t < d; ++t) {
            g.mean[t] += nk * (mu[t] - base[t]);
            g.mean_class_std[t] += sd[t];
        }
    }
    for (std::size_t t = 0; t < d; ++t) {
        g.mean[t] = base[t] + g.mean[t] / n;
        g.mean_class_std[t] /= static_cast<double>(classes);
    }

    if (n > 1.0) {
        std::vector<double> ss(d, 0.0);
        for (std::size_t k = 0; k < classes; ++k) {
            const auto nk = static_cast<double>(class_stats.counts[k]);
            const auto mu = class_stats.means.row(k);
            const auto sd = class_stats.stds.row(k);
            for (std::size_t t = 0; t < d; ++t) {
                const double dm = mu[t] - g.mean[t];
                ss[t] += (nk - 1.0) * sd[t] * sd[t] + nk * dm * dm;
            }
        }
        for (std::size_t t = 0; t < d; ++t) {
            g.std[t] = std::sqrt(ss[t] / (n - 1.0));
        }
    }
    return g;
}

GlobalStats compute_global_stats(const Dataset& dataset, const ClassStats& class_stats)
{
    const auto total = std::accumulate(class_stats.counts.begin(), class_stats.counts.end(), std::size_t{0});
    if (total != dataset.samples() || class_stats.features() != dataset.features()) {
        throw Error(ErrorKind::ShapeMismatch, "class statistics were not computed from this dataset");
    }
    return compute_global_stats(class_stats);
}

}  // namespace contrastfs
