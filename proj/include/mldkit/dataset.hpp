#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mldkit {

enum class AttributeKind { numeric, nominal, text };

struct AttributeSchema {
    std::string name;
    AttributeKind kind = AttributeKind::numeric;
    std::vector<std::string> nominal_values;  // declared domain, nominal only
    bool is_label = false;

    bool operator==(const AttributeSchema&) const = default;
};

/// Explicit missing marker ('?' in ARFF).
struct Missing {
    bool operator==(const Missing&) const = default;
};

/// Index into the owning attribute's declared nominal value list.
struct NominalIndex {
    std::int32_t index = 0;
    bool operator==(const NominalIndex&) const = default;
};

using FeatureValue = std::variant<Missing, double, NominalIndex, std::string>;

/// Active labels of one instance: sorted, unique label indices in [0, |L|).
using LabelSet = std::vector<std::int32_t>;

struct Instance {
    std::vector<FeatureValue> features;  // non-label attributes, schema order
    LabelSet labels;

    bool has_label(std::int32_t label) const;

    bool operator==(const Instance&) const = default;
};

/// Returns a copy of `labels` sorted with duplicates removed.
LabelSet normalized_labelset(LabelSet labels);

/// Immutable in-memory multilabel dataset: attribute schema (label attributes
/// flagged in place), feature rows, and per-instance labelsets. All queries
/// are const and safe to run concurrently; resampling builds new datasets.
class MultiLabelDataset {
public:
    MultiLabelDataset() = default;
    MultiLabelDataset(std::string relation_name, std::vector<AttributeSchema> schema,
                      std::vector<Instance> instances);

    const std::string& relation_name() const { return relation_name_; }
    const std::vector<AttributeSchema>& schema() const { return schema_; }
    const std::vector<Instance>& instances() const { return instances_; }

    /// Label names in schema declaration order; label index l names labels()[l].
    const std::vector<std::string>& label_names() const { return label_names_; }

    std::size_t num_instances() const { return instances_.size(); }
    std::size_t num_labels() const { return label_names_.size(); }
    std::size_t num_features() const { return feature_schema_pos_.size(); }

    /// Schema position of label l / feature f.
    std::size_t label_schema_pos(std::size_t label) const { return label_schema_pos_[label]; }
    std::size_t feature_schema_pos(std::size_t feature) const { return feature_schema_pos_[feature]; }

    /// counts[l] = number of instances whose labelset contains l. Out-of-range
    /// label indices (reported by validate()) are not counted.
    const std::vector<std::int64_t>& label_counts() const { return label_counts_; }

    /// Total active label assignments, sum of label_counts().
    std::int64_t total_label_assignments() const { return total_assignments_; }

    bool operator==(const MultiLabelDataset& other) const;

private:
    std::string relation_name_;
    std::vector<AttributeSchema> schema_;
    std::vector<Instance> instances_;
    std::vector<std::string> label_names_;
    std::vector<std::size_t> label_schema_pos_;
    std::vector<std::size_t> feature_schema_pos_;
    std::vector<std::int64_t> label_counts_;
    std::int64_t total_assignments_ = 0;
};

struct Violation {
    std::optional<std::size_t> instance;  // empty for schema-level violations
    std::string rule;
    std::string detail;
};

/// Checks every dataset invariant; violations are data, not failures.
/// Empty result means the dataset is well formed.
std::vector<Violation> validate(const MultiLabelDataset& dataset);

/// Symmetric |L|x|L| co-occurrence counts; the diagonal holds label counts.
class CoOccurrenceMatrix {
public:
    CoOccurrenceMatrix() = default;
    explicit CoOccurrenceMatrix(std::size_t labels)
        : labels_(labels), counts_(labels * labels, 0) {}

    std::size_t num_labels() const { return labels_; }
    std::int64_t at(std::size_t i, std::size_t j) const { return counts_[i * labels_ + j]; }
    void add(std::size_t i, std::size_t j, std::int64_t v) {
        counts_[i * labels_ + j] += v;
        if (i != j) counts_[j * labels_ + i] += v;
    }

private:
    std::size_t labels_ = 0;
    std::vector<std::int64_t> counts_;
};

CoOccurrenceMatrix co_occurrence(const MultiLabelDataset& dataset);

/// Unique labelsets with frequencies (the empty labelset counts when present).
/// Keyed lexicographically, so iteration order is deterministic.
struct LabelsetCensus {
    std::map<LabelSet, std::int64_t> frequency;

    std::size_t count() const { return frequency.size(); }
};

LabelsetCensus distinct_labelsets(const MultiLabelDataset& dataset);

}  // namespace mldkit
