#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mldkit/dataset.hpp"

namespace mldkit::arff {

/// One parsed @attribute declaration. Labels are not distinguished at this
/// layer; designation happens at dataset assembly.
struct RawAttribute {
    std::string name;
    AttributeKind kind = AttributeKind::numeric;
    std::vector<std::string> nominal_values;

    bool operator==(const RawAttribute&) const = default;
};

/// A parsed ARFF relation: every row carries one typed cell per attribute.
struct RawRelation {
    std::string name;
    std::vector<RawAttribute> attributes;
    std::vector<std::vector<FeatureValue>> rows;

    bool operator==(const RawRelation&) const = default;
};

/// Parses ARFF text. Accepted grammar:
///   - case-insensitive @relation/@attribute/@data keywords,
///   - '%' comment lines and blank lines anywhere,
///   - single- or double-quoted names/values with backslash escapes,
///   - numeric/real/integer, nominal {v1,v2,...} and string attribute kinds
///     (date and relational are rejected),
///   - dense comma-separated rows and sparse {index value, ...} rows, where
///     omitted sparse cells default to 0 / first nominal value / empty string,
///   - '?' missing markers (a quoted "?" is a literal value),
///   - LF and CRLF line endings.
/// Failures throw ParseError with a 1-based line (and column) position.
RawRelation parse(std::istream& in);
RawRelation parse_string(std::string_view text);
RawRelation parse_file(const std::filesystem::path& path);

enum class RowStyle { dense, sparse };

/// Writes the relation back as ARFF (LF line endings). Semantic round-trip is
/// guaranteed: parse(write(r)) == r. Numerics use shortest round-trip form.
void write(std::ostream& out, const RawRelation& relation, RowStyle style);
void write_file(const std::filesystem::path& path, const RawRelation& relation, RowStyle style);

/// Quotes a name/value for ARFF output when it cannot stand bare.
std::string quote_token(std::string_view text);

/// Shortest round-trip decimal form of v (locale independent).
std::string format_double(double v);

}  // namespace mldkit::arff
