#include "mldkit/formats.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mldkit/errors.hpp"
#include "mldkit/xml.hpp"

namespace mldkit::formats {
namespace {

void collect_labels(const xml::Element& element, std::vector<std::string>& names) {
    for (const xml::Element& child : element.children) {
        if (child.local_name() == "label") {
            const std::string* name = child.attribute("name");
            if (name == nullptr || name->empty())
                throw ParseError("label element without a name attribute");
            names.push_back(*name);
        }
        collect_labels(child, names);
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

bool is_binary_domain(const std::vector<std::string>& values) {
    return values.size() == 2 &&
           ((values[0] == "0" && values[1] == "1") || (values[0] == "1" && values[1] == "0"));
}

[[noreturn]] void assembly_error(const std::string& message) { throw DatasetError(message); }

}  // namespace

std::vector<std::string> parse_labels_xml(std::string_view text) {
    xml::Element root = xml::parse(text);
    if (root.local_name() != "labels")
        throw ParseError("label space root element must be <labels>, got <" + root.name + ">");
    std::vector<std::string> names;
    collect_labels(root, names);
    if (names.empty()) throw ParseError("label space declares no labels");
    std::unordered_set<std::string_view> seen;
    for (const std::string& name : names)
        if (!seen.insert(name).second)
            throw ParseError("duplicate label '" + name + "' in label space");
    return names;
}

std::vector<std::string> read_labels_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_labels_xml(buffer.str());
}

std::string labels_xml(const std::vector<std::string>& names) {
    std::string out = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";
    out += "<labels xmlns=\"http://mulan.sourceforge.net/labels\">\n";
    for (const std::string& name : names)
        out += "  <label name=\"" + xml::escape(name) + "\"></label>\n";
    out += "</labels>\n";
    return out;
}

void write_labels_file(const std::filesystem::path& path, const std::vector<std::string>& names) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path.string() + "' for writing");
    out << labels_xml(names);
    out.flush();
    if (!out) throw ParseError("failed writing '" + path.string() + "'");
}

std::optional<long> meka_label_count(std::string_view relation_name) {
    auto colon = relation_name.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    std::string_view options = relation_name.substr(colon + 1);

    std::vector<std::string_view> tokens;
    std::size_t start = 0;
    while (start <= options.size()) {
        std::size_t end = options.find_first_of(" \t", start);
        if (end == std::string_view::npos) end = options.size();
        if (end > start) tokens.push_back(options.substr(start, end - start));
        start = end + 1;
    }
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (tokens[i] != "-C") continue;
        std::string_view value = tokens[i + 1];
        long count = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), count);
        if (ec == std::errc{} && ptr == value.data() + value.size()) return count;
        return std::nullopt;
    }
    return std::nullopt;
}

std::string meka_base_name(std::string_view relation_name) {
    auto colon = relation_name.find(':');
    if (colon == std::string_view::npos) return std::string(relation_name);
    return std::string(trim(relation_name.substr(0, colon)));
}

MultiLabelDataset assemble(arff::RawRelation relation, const std::vector<std::string>& label_names) {
    if (label_names.empty()) assembly_error("no labels designated");

    std::unordered_map<std::string_view, std::size_t> positions;
    for (std::size_t i = 0; i < relation.attributes.size(); ++i) {
        auto [it, inserted] = positions.emplace(relation.attributes[i].name, i);
        (void)it;
        if (!inserted)
            assembly_error("duplicate attribute name '" + relation.attributes[i].name + "'");
    }

    std::vector<bool> is_label(relation.attributes.size(), false);
    for (const std::string& name : label_names) {
        auto it = positions.find(name);
        if (it == positions.end())
            assembly_error("label '" + name + "' is not an attribute of relation '" +
                           relation.name + "'");
        if (is_label[it->second]) assembly_error("label '" + name + "' designated twice");
        is_label[it->second] = true;
    }

    // Per label column: position of the nominal value "1", or -1 for a
    // numeric column pending 0/1 coercion.
    std::vector<AttributeSchema> schema;
    schema.reserve(relation.attributes.size());
    std::vector<std::int32_t> active_value(relation.attributes.size(), 0);
    for (std::size_t i = 0; i < relation.attributes.size(); ++i) {
        arff::RawAttribute& attr = relation.attributes[i];
        AttributeSchema entry{attr.name, attr.kind, attr.nominal_values, is_label[i]};
        if (is_label[i]) {
            if (attr.kind == AttributeKind::nominal) {
                if (!is_binary_domain(attr.nominal_values))
                    assembly_error("label attribute '" + attr.name +
                                   "' must have the nominal domain {0,1}");
                active_value[i] = attr.nominal_values[0] == "1" ? 0 : 1;
            } else if (attr.kind == AttributeKind::numeric) {
                entry.kind = AttributeKind::nominal;
                entry.nominal_values = {"0", "1"};
                active_value[i] = -1;
            } else {
                assembly_error("label attribute '" + attr.name + "' cannot be a string attribute");
            }
        }
        schema.push_back(std::move(entry));
    }

    std::vector<Instance> instances;
    instances.reserve(relation.rows.size());
    for (std::size_t row_index = 0; row_index < relation.rows.size(); ++row_index) {
        const auto& row = relation.rows[row_index];
        if (row.size() != relation.attributes.size())
            assembly_error("row " + std::to_string(row_index + 1) + " has " +
                           std::to_string(row.size()) + " values, expected " +
                           std::to_string(relation.attributes.size()));
        Instance instance;
        std::int32_t label_index = 0;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (!is_label[i]) {
                instance.features.push_back(row[i]);
                continue;
            }
            const std::string& attr_name = relation.attributes[i].name;
            bool active = false;
            if (std::holds_alternative<Missing>(row[i]))
                assembly_error("missing value for label '" + attr_name + "' in row " +
                               std::to_string(row_index + 1));
            if (active_value[i] >= 0) {
                if (!std::holds_alternative<NominalIndex>(row[i]))
                    assembly_error("label '" + attr_name + "' in row " +
                                   std::to_string(row_index + 1) + " is not nominal");
                active = std::get<NominalIndex>(row[i]).index == active_value[i];
            } else {
                if (!std::holds_alternative<double>(row[i]))
                    assembly_error("label '" + attr_name + "' in row " +
                                   std::to_string(row_index + 1) + " is not numeric");
                double v = std::get<double>(row[i]);
                if (v != 0.0 && v != 1.0)
                    assembly_error("label '" + attr_name + "' in row " +
                                   std::to_string(row_index + 1) + " has non-binary value " +
                                   arff::format_double(v));
                active = v == 1.0;
            }
            if (active) instance.labels.push_back(label_index);
            ++label_index;
        }
        instances.push_back(std::move(instance));
    }

    MultiLabelDataset dataset(std::move(relation.name), std::move(schema), std::move(instances));
    auto violations = validate(dataset);
    if (!violations.empty()) {
        std::string message = "assembled dataset is not well formed:";
        std::size_t shown = 0;
        for (const Violation& v : violations) {
            if (shown == 3) {
                message += " (+" + std::to_string(violations.size() - shown) + " more)";
                break;
            }
            message += " [" + v.rule + "] " + v.detail + ";";
            ++shown;
        }
        assembly_error(message);
    }
    return dataset;
}

MultiLabelDataset assemble_meka(arff::RawRelation relation) {
    std::optional<long> count = meka_label_count(relation.name);
    if (!count)
        assembly_error("relation '" + relation.name + "' carries no MEKA -C label count");
    long c = *count;
    if (c == 0) assembly_error("MEKA label count is zero");
    std::size_t n = relation.attributes.size();
    std::size_t labels = static_cast<std::size_t>(c > 0 ? c : -c);
    if (labels > n)
        assembly_error("MEKA label count " + std::to_string(c) + " exceeds " + std::to_string(n) +
                       " attributes");

    std::size_t first = c > 0 ? 0 : n - labels;
    std::vector<std::string> label_names;
    label_names.reserve(labels);
    for (std::size_t i = first; i < first + labels; ++i)
        label_names.push_back(relation.attributes[i].name);

    relation.name = meka_base_name(relation.name);
    return assemble(std::move(relation), label_names);
}

std::optional<std::filesystem::path> sibling_labels_file(const std::filesystem::path& arff_path) {
    std::filesystem::path candidate = arff_path;
    candidate.replace_extension(".xml");
    std::error_code ec;
    if (std::filesystem::is_regular_file(candidate, ec)) return candidate;
    return std::nullopt;
}

MultiLabelDataset read_dataset(const std::filesystem::path& arff_path,
                               std::optional<std::filesystem::path> labels_path) {
    arff::RawRelation relation = arff::parse_file(arff_path);
    if (labels_path) return assemble(std::move(relation), read_labels_file(*labels_path));
    if (meka_label_count(relation.name)) return assemble_meka(std::move(relation));
    assembly_error("'" + arff_path.string() +
                   "' has no label designation: pass a labels XML file or use a MEKA -C header");
}

arff::RawRelation to_raw(const MultiLabelDataset& dataset, LabelLayout layout) {
    const auto& schema = dataset.schema();
    std::size_t n = schema.size();
    std::size_t num_labels = dataset.num_labels();

    // Schema positions in output order. The meka layout requires contiguous
    // labels; non-contiguous schemas are rewritten labels-first.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    long meka_count = 0;
    if (layout == LabelLayout::meka) {
        if (num_labels == 0) assembly_error("cannot write a dataset without labels as MEKA");
        if (dataset.relation_name().find(':') != std::string::npos)
            assembly_error("relation name '" + dataset.relation_name() +
                           "' contains ':' and cannot carry a MEKA header");
        bool prefix = true, suffix = true;
        for (std::size_t l = 0; l < num_labels; ++l) {
            if (dataset.label_schema_pos(l) != l) prefix = false;
            if (dataset.label_schema_pos(l) != n - num_labels + l) suffix = false;
        }
        if (prefix) {
            meka_count = static_cast<long>(num_labels);
        } else if (suffix) {
            meka_count = -static_cast<long>(num_labels);
        } else {
            order.clear();
            for (std::size_t l = 0; l < num_labels; ++l) order.push_back(dataset.label_schema_pos(l));
            for (std::size_t i = 0; i < n; ++i)
                if (!schema[i].is_label) order.push_back(i);
            meka_count = static_cast<long>(num_labels);
        }
    }

    arff::RawRelation relation;
    relation.name = layout == LabelLayout::meka
                        ? dataset.relation_name() + ": -C " + std::to_string(meka_count)
                        : dataset.relation_name();
    relation.attributes.reserve(n);
    for (std::size_t pos : order) {
        relation.attributes.push_back(
            arff::RawAttribute{schema[pos].name, schema[pos].kind, schema[pos].nominal_values});
    }

    // Schema position -> (label index | feature index) for cell lookup.
    std::vector<std::int32_t> label_at(n, -1);
    std::vector<std::size_t> feature_at(n, 0);
    for (std::size_t l = 0; l < num_labels; ++l)
        label_at[dataset.label_schema_pos(l)] = static_cast<std::int32_t>(l);
    for (std::size_t f = 0; f < dataset.num_features(); ++f)
        feature_at[dataset.feature_schema_pos(f)] = f;

    // Nominal positions of "0"/"1" per label column.
    std::vector<std::int32_t> on_index(n, 0), off_index(n, 0);
    for (std::size_t l = 0; l < num_labels; ++l) {
        std::size_t pos = dataset.label_schema_pos(l);
        const auto& domain = schema[pos].nominal_values;
        auto on = std::find(domain.begin(), domain.end(), "1");
        auto off = std::find(domain.begin(), domain.end(), "0");
        if (schema[pos].kind != AttributeKind::nominal || on == domain.end() || off == domain.end())
            assembly_error("label attribute '" + schema[pos].name +
                           "' lacks the nominal domain {0,1}");
        on_index[pos] = static_cast<std::int32_t>(on - domain.begin());
        off_index[pos] = static_cast<std::int32_t>(off - domain.begin());
    }

    relation.rows.reserve(dataset.num_instances());
    for (const Instance& instance : dataset.instances()) {
        std::vector<FeatureValue> row;
        row.reserve(n);
        for (std::size_t pos : order) {
            if (label_at[pos] >= 0) {
                bool active = instance.has_label(label_at[pos]);
                row.emplace_back(NominalIndex{active ? on_index[pos] : off_index[pos]});
            } else {
                row.push_back(instance.features.at(feature_at[pos]));
            }
        }
        relation.rows.push_back(std::move(row));
    }
    return relation;
}

std::filesystem::path labels_path_for(const std::filesystem::path& arff_path) {
    std::filesystem::path out = arff_path;
    out.replace_extension(".xml");
    return out;
}

void write_dataset(const std::filesystem::path& arff_path, const MultiLabelDataset& dataset,
                   arff::RowStyle style, LabelLayout layout) {
    arff::RawRelation relation = to_raw(dataset, layout);
    arff::write_file(arff_path, relation, style);
    if (layout == LabelLayout::mulan)
        write_labels_file(labels_path_for(arff_path), dataset.label_names());
}

}  // namespace mldkit::formats
