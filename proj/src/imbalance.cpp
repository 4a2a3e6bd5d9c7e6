#include "mldkit/imbalance.hpp"

#include <algorithm>

#include "mldkit/errors.hpp"

namespace mldkit {

namespace {

void require_nonempty(const MultiLabelDataset& dataset) {
    if (dataset.num_instances() == 0) throw DatasetError("dataset has no instances");
}

}  // namespace

ImbalanceProfile imbalance_profile(const MultiLabelDataset& dataset) {
    require_nonempty(dataset);
    const auto& counts = dataset.label_counts();
    const std::int64_t max_count = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
    if (max_count == 0) throw DatasetError("no active labels");

    ImbalanceProfile profile;
    profile.irlbl.reserve(counts.size());
    double sum = 0.0;
    std::size_t defined = 0;
    for (std::int64_t count : counts) {
        if (count == 0) {
            profile.irlbl.push_back(kUndefinedRatio);
            continue;
        }
        const double ratio = static_cast<double>(max_count) / static_cast<double>(count);
        profile.irlbl.push_back(ratio);
        sum += ratio;
        profile.max_ir = std::max(profile.max_ir, ratio);
        ++defined;
    }
    profile.mean_ir = sum / static_cast<double>(defined);
    profile.card = static_cast<double>(dataset.total_label_assignments()) /
                   static_cast<double>(dataset.num_instances());
    profile.dens = profile.card / static_cast<double>(dataset.num_labels());
    return profile;
}

std::vector<double> irlbl(const MultiLabelDataset& dataset) {
    return imbalance_profile(dataset).irlbl;
}

double mean_ir(const MultiLabelDataset& dataset) {
    return imbalance_profile(dataset).mean_ir;
}

double cardinality(const MultiLabelDataset& dataset) {
    require_nonempty(dataset);
    return static_cast<double>(dataset.total_label_assignments()) /
           static_cast<double>(dataset.num_instances());
}

double density(const MultiLabelDataset& dataset) {
    return cardinality(dataset) / static_cast<double>(dataset.num_labels());
}

}  // namespace mldkit
