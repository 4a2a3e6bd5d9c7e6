#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mldkit/dataset.hpp"

namespace mldkit {

struct ResampleOutcome {
    MultiLabelDataset dataset;
    std::int64_t decoupled_count = 0;
    std::int64_t dropped_empty_count = 0;
    std::int64_t added_count = 0;
    std::int64_t removed_count = 0;
    std::uint64_t seed = 0;  // unused by remedial
    std::vector<std::string> warnings;
};

/// Decouples instances whose concurrence score exceeds the dataset mean:
/// the original keeps the minority labels (IRLbl above the mean ratio), an
/// appended clone with identical features keeps the rest. Scores and ratios
/// are computed once, on the input. Per-label totals are preserved exactly.
/// A side that would end up with an empty labelset is discarded and counted
/// in dropped_empty_count, leaving that instance unchanged.
ResampleOutcome remedial(const MultiLabelDataset& dataset);

/// Label-powerset random oversampling. Instances are bagged by full labelset;
/// bags rarer than the mean bag frequency receive clones of uniformly drawn
/// members, round-robin from the rarest bag, until floor(|D| * P / 100)
/// clones are appended. Requires 0 < P <= 100. Without minority bags the
/// input comes back unchanged with a warning.
ResampleOutcome lp_ros(const MultiLabelDataset& dataset, double percentage, std::uint64_t seed);

/// Label-powerset random undersampling. Removes up to floor(|D| * P / 100)
/// uniformly drawn members of bags more frequent than the mean, round-robin
/// from the most frequent bag, never shrinking a bag below the mean.
/// Requires 0 < P < 100. Without majority bags the input comes back
/// unchanged with a warning.
ResampleOutcome lp_rus(const MultiLabelDataset& dataset, double percentage, std::uint64_t seed);

}  // namespace mldkit
