#include "mldkit/dataset.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace mldkit {

bool Instance::has_label(std::int32_t label) const {
    return std::binary_search(labels.begin(), labels.end(), label);
}

LabelSet normalized_labelset(LabelSet labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

MultiLabelDataset::MultiLabelDataset(std::string relation_name, std::vector<AttributeSchema> schema,
                                     std::vector<Instance> instances)
    : relation_name_(std::move(relation_name)),
      schema_(std::move(schema)),
      instances_(std::move(instances)) {
    for (std::size_t pos = 0; pos < schema_.size(); ++pos) {
        if (schema_[pos].is_label) {
            label_names_.push_back(schema_[pos].name);
            label_schema_pos_.push_back(pos);
        } else {
            feature_schema_pos_.push_back(pos);
        }
    }
    label_counts_.assign(label_names_.size(), 0);
    const auto num_labels = static_cast<std::int32_t>(label_names_.size());
    for (const Instance& instance : instances_) {
        for (std::int32_t label : instance.labels) {
            if (label >= 0 && label < num_labels) {
                ++label_counts_[static_cast<std::size_t>(label)];
                ++total_assignments_;
            }
        }
    }
}

bool MultiLabelDataset::operator==(const MultiLabelDataset& other) const {
    return relation_name_ == other.relation_name_ && schema_ == other.schema_ &&
           instances_ == other.instances_;
}

std::vector<Violation> validate(const MultiLabelDataset& dataset) {
    std::vector<Violation> violations;

    std::set<std::string> seen_names;
    for (const AttributeSchema& attr : dataset.schema()) {
        if (!seen_names.insert(attr.name).second) {
            violations.push_back({std::nullopt, "unique-attribute-names",
                                  "duplicate attribute name '" + attr.name + "'"});
        }
        if (attr.is_label) {
            const auto& dom = attr.nominal_values;
            const bool binary = attr.kind == AttributeKind::nominal && dom.size() == 2 &&
                                ((dom[0] == "0" && dom[1] == "1") || (dom[0] == "1" && dom[1] == "0"));
            if (!binary) {
                violations.push_back({std::nullopt, "label-binary-nominal",
                                      "label attribute '" + attr.name +
                                          "' is not nominal with domain {0,1}"});
            }
        }
    }
    if (dataset.num_labels() < 1) {
        violations.push_back({std::nullopt, "at-least-one-label", "dataset declares no labels"});
    }

    const auto num_labels = static_cast<std::int32_t>(dataset.num_labels());
    for (std::size_t i = 0; i < dataset.num_instances(); ++i) {
        const Instance& instance = dataset.instances()[i];
        if (instance.features.size() != dataset.num_features()) {
            violations.push_back({i, "feature-arity",
                                  "instance has " + std::to_string(instance.features.size()) +
                                      " feature values, schema declares " +
                                      std::to_string(dataset.num_features())});
        }
        for (std::size_t f = 0; f < instance.features.size() && f < dataset.num_features(); ++f) {
            const AttributeSchema& attr = dataset.schema()[dataset.feature_schema_pos(f)];
            const FeatureValue& value = instance.features[f];
            if (const auto* nominal = std::get_if<NominalIndex>(&value)) {
                if (attr.kind != AttributeKind::nominal || nominal->index < 0 ||
                    static_cast<std::size_t>(nominal->index) >= attr.nominal_values.size()) {
                    violations.push_back({i, "nominal-domain",
                                          "value for attribute '" + attr.name +
                                              "' is outside the declared domain"});
                }
            } else if (std::holds_alternative<double>(value) && attr.kind != AttributeKind::numeric) {
                violations.push_back({i, "value-kind",
                                      "numeric value for non-numeric attribute '" + attr.name + "'"});
            } else if (std::holds_alternative<std::string>(value) && attr.kind != AttributeKind::text) {
                violations.push_back({i, "value-kind",
                                      "string value for non-string attribute '" + attr.name + "'"});
            }
        }
        if (!std::is_sorted(instance.labels.begin(), instance.labels.end()) ||
            std::adjacent_find(instance.labels.begin(), instance.labels.end()) !=
                instance.labels.end()) {
            violations.push_back({i, "labelset-sorted-unique", "labelset is not sorted and unique"});
        }
        for (std::int32_t label : instance.labels) {
            if (label < 0 || label >= num_labels) {
                violations.push_back({i, "label-index-range",
                                      "label index " + std::to_string(label) + " outside [0, " +
                                          std::to_string(num_labels) + ")"});
            }
        }
    }
    return violations;
}

CoOccurrenceMatrix co_occurrence(const MultiLabelDataset& dataset) {
    CoOccurrenceMatrix matrix(dataset.num_labels());
    const auto num_labels = static_cast<std::int32_t>(dataset.num_labels());
    for (const Instance& instance : dataset.instances()) {
        LabelSet labels;  // in-range members only; invalid indices are validate()'s business
        for (std::int32_t label : instance.labels) {
            if (label >= 0 && label < num_labels) labels.push_back(label);
        }
        for (std::size_t a = 0; a < labels.size(); ++a) {
            matrix.add(static_cast<std::size_t>(labels[a]), static_cast<std::size_t>(labels[a]), 1);
            for (std::size_t b = a + 1; b < labels.size(); ++b) {
                matrix.add(static_cast<std::size_t>(labels[a]), static_cast<std::size_t>(labels[b]), 1);
            }
        }
    }
    return matrix;
}

LabelsetCensus distinct_labelsets(const MultiLabelDataset& dataset) {
    LabelsetCensus census;
    for (const Instance& instance : dataset.instances()) {
        ++census.frequency[instance.labels];
    }
    return census;
}

}  // namespace mldkit
