#include "contrastfs/redundancy.hpp"

#include "contrastfs/error.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace contrastfs {

namespace {

struct Centered {
    std::vector<double> values;
    double norm = 0.0;
};

Centered center(const std::vector<double>& v)
{
    Centered c;
    double mean = 0.0;
    for (const double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    c.values.reserve(v.size());
    double ss = 0.0;
    for (const double x : v) {
        c.values.push_back(x - mean);
        ss += (x - mean) * (x - mean);
    }
    c.norm = std::sqrt(ss);
    return c;
}

double abs_correlation(const Centered& a, const Centered& b)
{
    if (a.norm == 0.0 || b.norm == 0.0) {
        return 0.0;
    }
    // Identical or sign-flipped profiles are exactly redundant; the quotient
    // below can round to just under 1 and break ties between copies.
    if (a.values == b.values ||
        std::equal(a.values.begin(), a.values.end(), b.values.begin(), [](double x, double y) { return x == -y; })) {
        return 1.0;
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
    }
    return std::min(1.0, std::abs(dot / (a.norm * b.norm)));
}

}  // namespace

std::vector<DiscrepancyProfile> discrepancy_profiles(const SurrogateMatrix& surrogate,
                                                     std::span<const FeatureIndex> indices)
{
    const std::size_t classes = surrogate.z.rows();
    if (classes < 3) {
        throw Error(ErrorKind::TooFewClasses, "redundancy needs at least three classes, got " + std::to_string(classes));
    }
    std::vector<DiscrepancyProfile> profiles;
    profiles.reserve(indices.size());
    for (const auto t : indices) {
        if (t >= surrogate.z.cols()) {
            throw Error(ErrorKind::InvalidArgument, "feature index " + std::to_string(t) + " out of range");
        }
        DiscrepancyProfile p{t, {}};
        p.values.reserve(classes * (classes - 1) / 2);
        for (std::size_t i = 0; i < classes; ++i) {
            for (std::size_t j = i + 1; j < classes; ++j) {
                p.values.push_back(surrogate.z(i, t) - surrogate.z(j, t));
            }
        }
        profiles.push_back(std::move(p));
    }
    return profiles;
}

Matrix redundancy_matrix(std::span<const DiscrepancyProfile> profiles)
{
    const std::size_t m = profiles.size();
    std::vector<Centered> centered;
    centered.reserve(m);
    for (const auto& p : profiles) {
        if (!profiles.empty() && p.values.size() != profiles.front().values.size()) {
            throw Error(ErrorKind::ShapeMismatch, "discrepancy profiles differ in length");
        }
        if (p.values.size() < 2) {
            throw Error(ErrorKind::TooFewClasses, "profiles need at least two class pairs");
        }
        centered.push_back(center(p.values));
    }
    Matrix r(m, m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        r(i, i) = 1.0;
        for (std::size_t j = i + 1; j < m; ++j) {
            const double c = abs_correlation(centered[i], centered[j]);
            r(i, j) = c;
            r(j, i) = c;
        }
    }
    return r;
}

std::vector<double> redundancy_scores(std::span<const DiscrepancyProfile> profiles)
{
    const Matrix r = redundancy_matrix(profiles);
    std::vector<double> means(r.rows(), 0.0);
    for (std::size_t i = 0; i < r.rows(); ++i) {
        for (const double v : r.row(i)) {
            means[i] += v;
        }
        means[i] /= static_cast<double>(r.cols());
    }
    return means;
}

std::vector<FeatureIndex> prune_redundant(std::span<const FeatureIndex> indices, const ImportanceReport& report,
                                          std::span<const DiscrepancyProfile> profiles, std::size_t remove_count)
{
    if (remove_count >= indices.size() && !(remove_count == 0 && indices.empty())) {
        throw Error(ErrorKind::RemoveCountOutOfRange, "cannot remove " + std::to_string(remove_count) + " of " +
                                                          std::to_string(indices.size()) + " features");
    }
    std::unordered_map<FeatureIndex, const DiscrepancyProfile*> by_feature;
    for (const auto& p : profiles) {
        by_feature.emplace(p.feature, &p);
    }
    std::vector<FeatureIndex> survivors(indices.begin(), indices.end());
    for (const auto t : survivors) {
        if (!by_feature.contains(t)) {
            throw Error(ErrorKind::InvalidArgument, "no discrepancy profile for feature " + std::to_string(t));
        }
        if (t >= report.scores.size()) {
            throw Error(ErrorKind::InvalidArgument, "feature " + std::to_string(t) + " is not in the report");
        }
    }
    if (remove_count == 0) {
        return survivors;
    }

    std::vector<DiscrepancyProfile> current;
    for (std::size_t step = 0; step < remove_count; ++step) {
        current.clear();
        for (const auto t : survivors) {
            current.push_back(*by_feature.at(t));
        }
        const auto scores = redundancy_scores(current);
        std::size_t victim = 0;
        for (std::size_t i = 1; i < survivors.size(); ++i) {
            const auto a = survivors[i];
            const auto b = survivors[victim];
            if (scores[i] > scores[victim] ||
                (scores[i] == scores[victim] &&
                 (report.scores[a] < report.scores[b] || (report.scores[a] == report.scores[b] && a > b)))) {
                victim = i;
            }
        }
        survivors.erase(survivors.begin() + static_cast<std::ptrdiff_t>(victim));
    }
    return survivors;
}

}  // namespace contrastfs
