#pragma once

#include <cstdint>
#include <vector>

#include "mldkit/dataset.hpp"
#include "mldkit/imbalance.hpp"

namespace mldkit {

/// Concurrence scores for one dataset.
///
/// scumble_ins[i] is an Atkinson-style inequality score over the IRLbl of the
/// instance's active labels: 1 - geometric mean / arithmetic mean, in [0,1].
/// Instances with at most one active label score exactly 0, as do instances
/// whose active labels all share one IRLbl value. scumble is the plain mean
/// over all instances; scumble_cv its sample coefficient of variation.
/// scumble_lbl[y] averages scumble_ins over the instances containing y, so a
/// minority label that only ever appears next to frequent labels scores high.
struct ConcurrenceProfile {
    std::vector<double> scumble_ins;     // |D|
    double scumble = 0.0;                // mean of scumble_ins
    double scumble_cv = kUndefinedRatio; // sd(n-1)/mean; NaN when mean is 0 or |D| < 2
    std::vector<double> scumble_lbl;     // |L|; NaN for zero-count labels
    std::vector<double> scumble_lbl_cv;  // |L|; NaN when the restricted mean is 0 or count < 2
};

/// Score of one instance. `imbalance` must come from the same dataset.
double scumble_ins(const MultiLabelDataset& dataset, const ImbalanceProfile& imbalance,
                   std::size_t instance_index);

ConcurrenceProfile concurrence_profile(const MultiLabelDataset& dataset);
ConcurrenceProfile concurrence_profile(const MultiLabelDataset& dataset,
                                       const ImbalanceProfile& imbalance);

/// scumble_cv as a standalone query; throws DatasetError when |D| < 2,
/// returns the undefined marker when scumble is 0.
double scumble_cv(const MultiLabelDataset& dataset);

/// One difficult label: a minority label (irlbl > mean_ir) with nonzero
/// scumble_lbl, together with the majority labels it shares instances with.
struct DifficultLabel {
    std::int32_t label = 0;
    double scumble_lbl = 0.0;
    double irlbl = 0.0;

    struct Partner {
        std::int32_t label = 0;
        std::int64_t shared_instances = 0;
    };
    std::vector<Partner> majority_partners;  // by shared count descending
};

/// Minority labels sorted by descending scumble_lbl (ties by declaration
/// order), truncated to top_k. Labels with zero or undefined scumble_lbl are
/// not difficult and are omitted; a zero-concurrence dataset yields an empty
/// list.
std::vector<DifficultLabel> difficult_labels(const MultiLabelDataset& dataset, std::size_t top_k);
std::vector<DifficultLabel> difficult_labels(const MultiLabelDataset& dataset,
                                             const ImbalanceProfile& imbalance,
                                             const ConcurrenceProfile& concurrence,
                                             const CoOccurrenceMatrix& pairs, std::size_t top_k);

}  // namespace mldkit
