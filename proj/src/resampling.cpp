#include "mldkit/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "mldkit/concurrence.hpp"
#include "mldkit/errors.hpp"
#include "mldkit/imbalance.hpp"
#include "mldkit/random.hpp"

namespace mldkit {
namespace {

struct Bag {
    LabelSet labels;
    std::vector<std::size_t> members;  // source instance indices
};

/// Bags grouped by full labelset, ordered lexicographically by labelset.
std::vector<Bag> bag_by_labelset(const MultiLabelDataset& dataset) {
    std::map<LabelSet, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < dataset.num_instances(); ++i)
        groups[dataset.instances()[i].labels].push_back(i);
    std::vector<Bag> bags;
    bags.reserve(groups.size());
    for (auto& [labels, members] : groups) bags.push_back(Bag{labels, std::move(members)});
    return bags;
}

MultiLabelDataset rebuild(const MultiLabelDataset& source, std::vector<Instance> instances) {
    return MultiLabelDataset(source.relation_name(), source.schema(), std::move(instances));
}

}  // namespace

ResampleOutcome remedial(const MultiLabelDataset& dataset) {
    ImbalanceProfile imbalance = imbalance_profile(dataset);
    ConcurrenceProfile concurrence = concurrence_profile(dataset, imbalance);
    const double mean_score = concurrence.scumble;

    ResampleOutcome outcome;
    std::vector<Instance> originals = dataset.instances();
    std::vector<Instance> clones;

    for (std::size_t i = 0; i < originals.size(); ++i) {
        if (!(concurrence.scumble_ins[i] > mean_score)) continue;
        ++outcome.decoupled_count;

        LabelSet minority, majority;
        for (std::int32_t label : originals[i].labels) {
            double ratio = imbalance.irlbl[static_cast<std::size_t>(label)];
            if (ratio > imbalance.mean_ir)
                minority.push_back(label);
            else
                majority.push_back(label);
        }
        if (minority.empty() || majority.empty()) {
            ++outcome.dropped_empty_count;
            continue;
        }
        Instance clone{originals[i].features, std::move(majority)};
        originals[i].labels = std::move(minority);
        clones.push_back(std::move(clone));
        ++outcome.added_count;
    }

    originals.insert(originals.end(), std::make_move_iterator(clones.begin()),
                     std::make_move_iterator(clones.end()));
    outcome.dataset = rebuild(dataset, std::move(originals));
    return outcome;
}

ResampleOutcome lp_ros(const MultiLabelDataset& dataset, double percentage, std::uint64_t seed) {
    if (!(percentage > 0.0) || percentage > 100.0)
        throw std::invalid_argument("lp_ros percentage must be in (0, 100]");

    ResampleOutcome outcome;
    outcome.seed = seed;

    std::vector<Bag> bags = bag_by_labelset(dataset);
    const double mean_freq =
        bags.empty() ? 0.0 : static_cast<double>(dataset.num_instances()) / static_cast<double>(bags.size());

    std::vector<Bag> minority;
    for (Bag& bag : bags)
        if (static_cast<double>(bag.members.size()) < mean_freq) minority.push_back(std::move(bag));
    std::stable_sort(minority.begin(), minority.end(),
                     [](const Bag& a, const Bag& b) { return a.members.size() < b.members.size(); });

    if (minority.empty()) {
        outcome.dataset = dataset;
        outcome.warnings.push_back("no labelset is rarer than the mean frequency; nothing to oversample");
        return outcome;
    }

    auto budget = static_cast<std::int64_t>(
        std::floor(static_cast<double>(dataset.num_instances()) * percentage / 100.0));

    std::vector<Instance> instances = dataset.instances();
    instances.reserve(instances.size() + static_cast<std::size_t>(budget));
    Rng rng(seed);
    std::size_t turn = 0;
    while (outcome.added_count < budget) {
        const Bag& bag = minority[turn % minority.size()];
        std::size_t pick = bag.members[rng.uniform_index(bag.members.size())];
        instances.push_back(dataset.instances()[pick]);
        ++outcome.added_count;
        ++turn;
    }

    outcome.dataset = rebuild(dataset, std::move(instances));
    return outcome;
}

ResampleOutcome lp_rus(const MultiLabelDataset& dataset, double percentage, std::uint64_t seed) {
    if (!(percentage > 0.0) || percentage >= 100.0)
        throw std::invalid_argument("lp_rus percentage must be in (0, 100)");

    ResampleOutcome outcome;
    outcome.seed = seed;

    std::vector<Bag> bags = bag_by_labelset(dataset);
    const double mean_freq =
        bags.empty() ? 0.0 : static_cast<double>(dataset.num_instances()) / static_cast<double>(bags.size());

    std::vector<Bag> majority;
    for (Bag& bag : bags)
        if (static_cast<double>(bag.members.size()) > mean_freq) majority.push_back(std::move(bag));
    std::stable_sort(majority.begin(), majority.end(),
                     [](const Bag& a, const Bag& b) { return a.members.size() > b.members.size(); });

    if (majority.empty()) {
        outcome.dataset = dataset;
        outcome.warnings.push_back(
            "no labelset is more frequent than the mean frequency; nothing to undersample");
        return outcome;
    }

    auto budget = static_cast<std::int64_t>(
        std::floor(static_cast<double>(dataset.num_instances()) * percentage / 100.0));
    const auto floor_size = static_cast<std::size_t>(std::ceil(mean_freq));

    std::vector<bool> removed(dataset.num_instances(), false);
    Rng rng(seed);
    bool progressed = true;
    while (outcome.removed_count < budget && progressed) {
        progressed = false;
        for (Bag& bag : majority) {
            if (outcome.removed_count >= budget) break;
            if (bag.members.size() <= floor_size) continue;
            std::size_t j = rng.uniform_index(bag.members.size());
            removed[bag.members[j]] = true;
            bag.members[j] = bag.members.back();
            bag.members.pop_back();
            ++outcome.removed_count;
            progressed = true;
        }
    }

    std::vector<Instance> instances;
    instances.reserve(dataset.num_instances() - static_cast<std::size_t>(outcome.removed_count));
    for (std::size_t i = 0; i < dataset.num_instances(); ++i)
        if (!removed[i]) instances.push_back(dataset.instances()[i]);

    outcome.dataset = rebuild(dataset, std::move(instances));
    return outcome;
}

}  // namespace mldkit
