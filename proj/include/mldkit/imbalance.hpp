#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "mldkit/dataset.hpp"

namespace mldkit {

/// Ratios that never occur (zero-count labels divide by zero) carry this
/// marker; test with ratio_defined().
inline constexpr double kUndefinedRatio = std::numeric_limits<double>::quiet_NaN();

inline bool ratio_defined(double v) { return !std::isnan(v); }

/// Per-label imbalance ratios plus the dataset aggregates.
///
/// irlbl[y] = (count of the most frequent label) / (count of y), so the most
/// frequent label scores exactly 1 and rarer labels score higher. Labels with
/// zero count are undefined and excluded from mean_ir/max_ir.
struct ImbalanceProfile {
    std::vector<double> irlbl;
    double mean_ir = 0.0;
    double max_ir = 0.0;
    double card = 0.0;  // average active labels per instance
    double dens = 0.0;  // card / |L|
};

/// Computes the whole profile in one pass. Requires at least one instance
/// with a non-empty labelset (throws DatasetError otherwise).
ImbalanceProfile imbalance_profile(const MultiLabelDataset& dataset);

std::vector<double> irlbl(const MultiLabelDataset& dataset);
double mean_ir(const MultiLabelDataset& dataset);

/// Card/Dens need only a non-empty dataset; empty labelsets count in |D|.
double cardinality(const MultiLabelDataset& dataset);
double density(const MultiLabelDataset& dataset);

}  // namespace mldkit
