#include "contrastfs/core.hpp"

#include "contrastfs/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace contrastfs {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : m_rows(rows), m_cols(cols), m_data(std::move(data))
{
    if (m_data.size() != rows * cols) {
        throw Error(ErrorKind::ShapeMismatch, "matrix data has " + std::to_string(m_data.size()) +
                                                  " values, expected " + std::to_string(rows * cols));
    }
}

Dataset::Dataset(Matrix features, std::vector<Label> labels, std::size_t class_count,
                 std::vector<std::string> feature_names, std::vector<std::string> class_names)
    : m_features(std::move(features)),
      m_labels(std::move(labels)),
      m_class_count(class_count),
      m_feature_names(std::move(feature_names)),
      m_class_names(std::move(class_names))
{
    if (m_labels.size() != m_features.rows()) {
        throw Error(ErrorKind::ShapeMismatch, std::to_string(m_labels.size()) + " labels for " +
                                                  std::to_string(m_features.rows()) + " samples");
    }
    if (!m_feature_names.empty() && m_feature_names.size() != m_features.cols()) {
        throw Error(ErrorKind::ShapeMismatch, "feature name count does not match feature count");
    }
    if (!m_class_names.empty() && m_class_names.size() != m_class_count) {
        throw Error(ErrorKind::ShapeMismatch, "class name count does not match class count");
    }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const
{
    const std::size_t d = features();
    std::vector<double> data;
    data.reserve(indices.size() * d);
    std::vector<Label> labels;
    labels.reserve(indices.size());
    for (const auto i : indices) {
        if (i >= samples()) {
            throw Error(ErrorKind::InvalidArgument, "sample index " + std::to_string(i) + " out of range");
        }
        const auto r = row(i);
        data.insert(data.end(), r.begin(), r.end());
        labels.push_back(m_labels[i]);
    }
    return Dataset(Matrix(indices.size(), d, std::move(data)), std::move(labels), m_class_count, m_feature_names,
                   m_class_names);
}

Dataset Dataset::select_features(std::span<const FeatureIndex> indices) const
{
    const std::size_t n = samples();
    Matrix out(n, indices.size());
    for (const auto t : indices) {
        if (t >= features()) {
            throw Error(ErrorKind::InvalidArgument, "feature index " + std::to_string(t) + " out of range");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto src = row(i);
        auto dst = out.row(i);
        for (std::size_t j = 0; j < indices.size(); ++j) {
            dst[j] = src[indices[j]];
        }
    }
    std::vector<std::string> names;
    if (!m_feature_names.empty()) {
        for (const auto t : indices) {
            names.push_back(m_feature_names[t]);
        }
    }
    return Dataset(std::move(out), m_labels, m_class_count, std::move(names), m_class_names);
}

void validate_dataset(const Dataset& dataset)
{
    const std::size_t n = dataset.samples();
    const std::size_t d = dataset.features();
    if (n == 0 || d == 0 || dataset.class_count() == 0) {
        throw Error(ErrorKind::EmptyDataset, "dataset needs at least one sample, feature and class (n=" +
                                                 std::to_string(n) + ", d=" + std::to_string(d) + ")");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = dataset.row(i);
        for (std::size_t t = 0; t < d; ++t) {
            if (!std::isfinite(r[t])) {
                throw Error(ErrorKind::NonFiniteValue,
                            "non-finite value at row " + std::to_string(i) + ", column " + std::to_string(t));
            }
        }
    }
    const auto labels = dataset.labels();
    std::vector<std::size_t> counts(dataset.class_count(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] >= dataset.class_count()) {
            throw Error(ErrorKind::LabelOutOfRange, "label " + std::to_string(labels[i]) + " at row " +
                                                        std::to_string(i) + " is not below class count " +
                                                        std::to_string(dataset.class_count()));
        }
        ++counts[labels[i]];
    }
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] == 0) {
            throw Error(ErrorKind::EmptyClass, "class " + std::to_string(k) + " has no samples");
        }
    }
}

std::vector<std::size_t> class_counts(const Dataset& dataset)
{
    std::vector<std::size_t> counts(dataset.class_count(), 0);
    for (const auto y : dataset.labels()) {
        if (y < counts.size()) {
            ++counts[y];
        }
    }
    return counts;
}

std::string_view to_string(CvMode mode) noexcept
{
    switch (mode) {
    case CvMode::unit: return "unit";
    case CvMode::rel_std: return "rel_std";
    case CvMode::inv_rel_std: return "inv_rel_std";
    }
    return "unit";
}

std::string_view to_string(DenominatorMode mode) noexcept
{
    switch (mode) {
    case DenominatorMode::as_written: return "as_written";
    case DenominatorMode::global_std: return "global_std";
    }
    return "as_written";
}

namespace {

std::string normalized(std::string_view text)
{
    std::string s(text);
    std::replace(s.begin(), s.end(), '-', '_');
    return s;
}

}  // namespace

CvMode parse_cv_mode(std::string_view text)
{
    const auto s = normalized(text);
    if (s == "unit") return CvMode::unit;
    if (s == "rel_std") return CvMode::rel_std;
    if (s == "inv_rel_std") return CvMode::inv_rel_std;
    throw Error(ErrorKind::InvalidConfig, "unknown cv mode '" + std::string(text) + "'");
}

DenominatorMode parse_denominator_mode(std::string_view text)
{
    const auto s = normalized(text);
    if (s == "as_written") return DenominatorMode::as_written;
    if (s == "global_std") return DenominatorMode::global_std;
    throw Error(ErrorKind::InvalidConfig, "unknown denominator mode '" + std::string(text) + "'");
}

void SelectorConfig::validate(std::size_t feature_count) const
{
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw Error(ErrorKind::InvalidConfig, "epsilon must be a finite positive number");
    }
    if (m < 1 || m > feature_count) {
        throw Error(ErrorKind::MOutOfRange,
                    "m=" + std::to_string(m) + " outside [1, " + std::to_string(feature_count) + "]");
    }
}

ConfigEcho echo(const SelectorConfig& config)
{
    std::ostringstream eps;
    eps.precision(17);
    eps << config.epsilon;
    return {
        {"cv_mode", std::string(to_string(config.cv_mode))},
        {"denominator_mode", std::string(to_string(config.denominator_mode))},
        {"epsilon", eps.str()},
        {"m", std::to_string(config.m)},
    };
}

std::vector<FeatureIndex> rank_by_score(std::span<const double> scores)
{
    std::vector<FeatureIndex> order(scores.size());
    std::iota(order.begin(), order.end(), FeatureIndex{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](FeatureIndex a, FeatureIndex b) { return scores[a] > scores[b]; });
    return order;
}

}  // namespace contrastfs
