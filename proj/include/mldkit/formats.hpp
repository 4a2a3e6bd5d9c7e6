#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mldkit/arff.hpp"
#include "mldkit/dataset.hpp"

namespace mldkit::formats {

/// Reads a MULAN label-space document: every <label name="..."/> under the
/// <labels> root, in document order, nested groups flattened. Namespace
/// prefixes are tolerated. Empty or duplicate names and a label-free
/// document are errors.
std::vector<std::string> parse_labels_xml(std::string_view text);
std::vector<std::string> read_labels_file(const std::filesystem::path& path);

std::string labels_xml(const std::vector<std::string>& names);
void write_labels_file(const std::filesystem::path& path, const std::vector<std::string>& names);

/// Signed label count from a MEKA relation name of the form
/// "base: -C <int> ...". Returns nullopt when the name does not carry one.
std::optional<long> meka_label_count(std::string_view relation_name);

/// Relation name with any MEKA option suffix removed.
std::string meka_base_name(std::string_view relation_name);

/// Promotes a parsed relation to a dataset, flagging `label_names` as labels.
/// Label indices follow schema order. Label columns must be binary: nominal
/// {0,1} (either declaration order; activeness means value "1"), or numeric
/// with only 0/1 observed, which is rewritten as nominal {"0","1"}. Missing
/// label values are errors. The result always passes validate().
MultiLabelDataset assemble(arff::RawRelation relation, const std::vector<std::string>& label_names);

/// MEKA variant: the label attributes are the first C (C > 0) or last |C|
/// (C < 0) per the relation-name header, which is stripped from the name.
MultiLabelDataset assemble_meka(arff::RawRelation relation);

/// The label-space file conventionally next to an ARFF: same path with an
/// .xml extension, if it exists.
std::optional<std::filesystem::path> sibling_labels_file(const std::filesystem::path& arff_path);

/// Loads a dataset from disk. With a labels path the pair is read as MULAN;
/// without one the ARFF must carry a MEKA -C header.
MultiLabelDataset read_dataset(const std::filesystem::path& arff_path,
                               std::optional<std::filesystem::path> labels_path = {});

enum class LabelLayout { mulan, meka };

/// Flattens a dataset back to a writable relation. The meka layout needs the
/// labels contiguous; otherwise attributes are reordered labels-first, which
/// leaves instances untouched since they store features and labels apart.
/// A ':' in the relation name is refused for meka, it would corrupt the
/// header.
arff::RawRelation to_raw(const MultiLabelDataset& dataset, LabelLayout layout);

/// Path of the label-space file write_dataset emits next to `arff_path`.
std::filesystem::path labels_path_for(const std::filesystem::path& arff_path);

/// Writes the ARFF, plus the label-space XML beside it for the mulan layout.
void write_dataset(const std::filesystem::path& arff_path, const MultiLabelDataset& dataset,
                   arff::RowStyle style, LabelLayout layout);

}  // namespace mldkit::formats
