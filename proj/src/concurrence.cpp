#include "mldkit/concurrence.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "mldkit/errors.hpp"

namespace mldkit {

namespace {

double instance_score(const LabelSet& labels, const std::vector<double>& irlbl) {
    if (labels.size() <= 1) return 0.0;
    double product = 1.0;
    double sum = 0.0;
    double log_sum = 0.0;
    for (std::int32_t label : labels) {
        const double ratio = irlbl[static_cast<std::size_t>(label)];
        assert(ratio_defined(ratio));  // active labels always have a nonzero count
        product *= ratio;
        sum += ratio;
        log_sum += std::log(ratio);
    }
    const double k = static_cast<double>(labels.size());
    double geometric = std::pow(product, 1.0 / k);
    if (!std::isfinite(geometric)) geometric = std::exp(log_sum / k);  // product overflowed
    const double arithmetic = sum / k;
    const double score = 1.0 - geometric / arithmetic;
    return std::clamp(score, 0.0, 1.0);
}

double sample_sd(const std::vector<double>& values, double mean) {
    double acc = 0.0;
    for (double v : values) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

}  // namespace

double scumble_ins(const MultiLabelDataset& dataset, const ImbalanceProfile& imbalance,
                   std::size_t instance_index) {
    if (instance_index >= dataset.num_instances())
        throw DatasetError("instance index " + std::to_string(instance_index) + " out of range");
    return instance_score(dataset.instances()[instance_index].labels, imbalance.irlbl);
}

ConcurrenceProfile concurrence_profile(const MultiLabelDataset& dataset) {
    return concurrence_profile(dataset, imbalance_profile(dataset));
}

ConcurrenceProfile concurrence_profile(const MultiLabelDataset& dataset,
                                       const ImbalanceProfile& imbalance) {
    if (dataset.num_instances() == 0) throw DatasetError("dataset has no instances");

    ConcurrenceProfile profile;
    profile.scumble_ins.reserve(dataset.num_instances());
    double total = 0.0;
    for (const Instance& instance : dataset.instances()) {
        const double score = instance_score(instance.labels, imbalance.irlbl);
        profile.scumble_ins.push_back(score);
        total += score;
    }
    profile.scumble = total / static_cast<double>(dataset.num_instances());

    if (dataset.num_instances() >= 2 && profile.scumble > 0.0)
        profile.scumble_cv = sample_sd(profile.scumble_ins, profile.scumble) / profile.scumble;

    // Per-label: restrict scumble_ins to the instances containing each label.
    std::vector<std::vector<double>> by_label(dataset.num_labels());
    for (std::size_t i = 0; i < dataset.num_instances(); ++i) {
        for (std::int32_t label : dataset.instances()[i].labels)
            by_label[static_cast<std::size_t>(label)].push_back(profile.scumble_ins[i]);
    }
    profile.scumble_lbl.assign(dataset.num_labels(), kUndefinedRatio);
    profile.scumble_lbl_cv.assign(dataset.num_labels(), kUndefinedRatio);
    for (std::size_t label = 0; label < dataset.num_labels(); ++label) {
        const auto& scores = by_label[label];
        if (scores.empty()) continue;
        double sum = 0.0;
        for (double v : scores) sum += v;
        const double mean = sum / static_cast<double>(scores.size());
        profile.scumble_lbl[label] = mean;
        if (scores.size() >= 2 && mean > 0.0)
            profile.scumble_lbl_cv[label] = sample_sd(scores, mean) / mean;
    }
    return profile;
}

double scumble_cv(const MultiLabelDataset& dataset) {
    if (dataset.num_instances() < 2)
        throw DatasetError("scumble_cv needs at least 2 instances");
    return concurrence_profile(dataset).scumble_cv;
}

std::vector<DifficultLabel> difficult_labels(const MultiLabelDataset& dataset, std::size_t top_k) {
    const ImbalanceProfile imbalance = imbalance_profile(dataset);
    return difficult_labels(dataset, imbalance, concurrence_profile(dataset, imbalance),
                            co_occurrence(dataset), top_k);
}

std::vector<DifficultLabel> difficult_labels(const MultiLabelDataset& dataset,
                                             const ImbalanceProfile& imbalance,
                                             const ConcurrenceProfile& concurrence,
                                             const CoOccurrenceMatrix& pairs, std::size_t top_k) {
    std::vector<DifficultLabel> result;
    const auto num_labels = static_cast<std::int32_t>(dataset.num_labels());
    for (std::int32_t label = 0; label < num_labels; ++label) {
        const auto idx = static_cast<std::size_t>(label);
        const double ratio = imbalance.irlbl[idx];
        const double score = concurrence.scumble_lbl[idx];
        if (!ratio_defined(ratio) || ratio <= imbalance.mean_ir) continue;  // majority label
        if (!ratio_defined(score) || score <= 0.0) continue;                // not concurrence-affected
        DifficultLabel entry;
        entry.label = label;
        entry.scumble_lbl = score;
        entry.irlbl = ratio;
        for (std::int32_t partner = 0; partner < num_labels; ++partner) {
            const auto pidx = static_cast<std::size_t>(partner);
            if (partner == label || !ratio_defined(imbalance.irlbl[pidx])) continue;
            if (imbalance.irlbl[pidx] > imbalance.mean_ir) continue;  // only majority partners
            const std::int64_t shared = pairs.at(idx, pidx);
            if (shared > 0) entry.majority_partners.push_back({partner, shared});
        }
        std::stable_sort(entry.majority_partners.begin(), entry.majority_partners.end(),
                         [](const DifficultLabel::Partner& a, const DifficultLabel::Partner& b) {
                             return a.shared_instances > b.shared_instances;
                         });
        result.push_back(std::move(entry));
    }
    std::stable_sort(result.begin(), result.end(), [](const DifficultLabel& a, const DifficultLabel& b) {
        return a.scumble_lbl > b.scumble_lbl;
    });
    if (result.size() > top_k) result.resize(top_k);
    return result;
}

}  // namespace mldkit
