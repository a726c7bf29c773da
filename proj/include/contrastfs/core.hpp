#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace contrastfs {

using Label = std::uint32_t;
using FeatureIndex = std::size_t;

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : m_rows(rows), m_cols(cols), m_data(rows * cols, fill)
    {
    }
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const noexcept { return m_rows; }
    std::size_t cols() const noexcept { return m_cols; }

    double operator()(std::size_t r, std::size_t c) const noexcept { return m_data[r * m_cols + c]; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return m_data[r * m_cols + c]; }

    std::span<const double> row(std::size_t r) const noexcept { return {m_data.data() + r * m_cols, m_cols}; }
    std::span<double> row(std::size_t r) noexcept { return {m_data.data() + r * m_cols, m_cols}; }

    std::span<const double> data() const noexcept { return m_data; }
    std::span<double> data() noexcept { return m_data; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t m_rows = 0;
    std::size_t m_cols = 0;
    std::vector<double> m_data;
};

/// n samples x d features with dense class labels 0..C-1.
///
/// Features are stored sample-major: every statistic is accumulated by
/// streaming rows into per-class accumulators, which keeps the inner loop
/// contiguous over features. The constructor only checks shapes; the value
/// invariants (finite cells, non-empty classes) are checked by
/// validate_dataset() at every pipeline entry point.
class Dataset {
public:
    Dataset() = default;
    Dataset(Matrix features, std::vector<Label> labels, std::size_t class_count,
            std::vector<std::string> feature_names = {}, std::vector<std::string> class_names = {});

    std::size_t samples() const noexcept { return m_features.rows(); }
    std::size_t features() const noexcept { return m_features.cols(); }
    std::size_t class_count() const noexcept { return m_class_count; }

    const Matrix& matrix() const noexcept { return m_features; }
    std::span<const double> row(std::size_t i) const noexcept { return m_features.row(i); }
    double value(std::size_t i, std::size_t t) const noexcept { return m_features(i, t); }
    std::span<const Label> labels() const noexcept { return m_labels; }

    /// Optional, empty or one per feature.
    const std::vector<std::string>& feature_names() const noexcept { return m_feature_names; }
    /// Original label values, indexed by dense class id. Empty when labels were dense on input.
    const std::vector<std::string>& class_names() const noexcept { return m_class_names; }

    /// Rows `indices` in the given order, same class encoding.
    Dataset subset(std::span<const std::size_t> indices) const;
    /// Columns `indices` in the given order.
    Dataset select_features(std::span<const FeatureIndex> indices) const;

private:
    Matrix m_features;
    std::vector<Label> m_labels;
    std::size_t m_class_count = 0;
    std::vector<std::string> m_feature_names;
    std::vector<std::string> m_class_names;
};

/// Throws Error{EmptyDataset | NonFiniteValue | LabelOutOfRange | EmptyClass}.
void validate_dataset(const Dataset& dataset);

/// Per-class sample counts.
std::vector<std::size_t> class_counts(const Dataset& dataset);

enum class CvMode { unit, rel_std, inv_rel_std };
enum class DenominatorMode { as_written, global_std };

std::string_view to_string(CvMode mode) noexcept;
std::string_view to_string(DenominatorMode mode) noexcept;
/// Accepts both `rel_std` and `rel-std` spellings. Throws InvalidConfig.
CvMode parse_cv_mode(std::string_view text);
DenominatorMode parse_denominator_mode(std::string_view text);

struct SelectorConfig {
    CvMode cv_mode = CvMode::unit;
    DenominatorMode denominator_mode = DenominatorMode::as_written;
    double epsilon = 1e-12;
    std::size_t m = 1;

    /// Throws InvalidConfig (epsilon) or MOutOfRange (m against `feature_count`).
    void validate(std::size_t feature_count) const;

    bool operator==(const SelectorConfig&) const = default;
};

struct ClassStats {
    Matrix means;                      // C x d
    Matrix stds;                       // C x d, unbiased; 0 for single-sample classes
    std::vector<std::size_t> counts;   // C

    std::size_t class_count() const noexcept { return counts.size(); }
    std::size_t features() const noexcept { return means.cols(); }
};

struct GlobalStats {
    std::vector<double> mean;
    std::vector<double> std;
    std::vector<double> mean_class_std;
};

struct SurrogateMatrix {
    Matrix z;   // C x d
    SelectorConfig config;
};

/// Ordered key/value echo of whatever configuration produced a report.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

ConfigEcho echo(const SelectorConfig& config);

struct ImportanceReport {
    std::string method;
    ConfigEcho config;
    std::vector<double> scores;
    std::vector<FeatureIndex> ranking;
    double wall_time_seconds = 0.0;
};

/// Indices sorted by descending score; equal scores keep ascending index order.
std::vector<FeatureIndex> rank_by_score(std::span<const double> scores);

struct DiscrepancyProfile {
    FeatureIndex feature = 0;
    /// Z^i - Z^j for class pairs i < j in lexicographic order.
    std::vector<double> values;
};

}  // namespace contrastfs
