#pragma once

#include "contrastfs/core.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

namespace fixtures {

/// One feature; `classes[k]` lists the samples of class k.
inline contrastfs::Dataset one_feature(std::initializer_list<std::vector<double>> classes)
{
    std::vector<double> values;
    std::vector<contrastfs::Label> labels;
    contrastfs::Label k = 0;
    for (const auto& xs : classes) {
        for (double x : xs) {
            values.push_back(x);
            labels.push_back(k);
        }
        ++k;
    }
    const std::size_t n = values.size();
    return contrastfs::Dataset(contrastfs::Matrix(n, 1, std::move(values)), std::move(labels), k);
}

/// The three-class toy set {[0,2],[4,6],[8,12]}.
inline contrastfs::Dataset toy()
{
    return one_feature({{0, 2}, {4, 6}, {8, 12}});
}

inline contrastfs::Dataset from_rows(const std::vector<std::vector<double>>& rows, std::vector<contrastfs::Label> labels,
                                     std::size_t classes)
{
    std::vector<double> values;
    for (const auto& r : rows) values.insert(values.end(), r.begin(), r.end());
    const std::size_t d = rows.empty() ? 0 : rows.front().size();
    return contrastfs::Dataset(contrastfs::Matrix(rows.size(), d, std::move(values)), std::move(labels), classes);
}

inline std::filesystem::path temp_dir()
{
    std::filesystem::path p(CONTRASTFS_TEST_TMP);
    std::filesystem::create_directories(p);
    return p;
}

inline double rel_diff(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace fixtures
