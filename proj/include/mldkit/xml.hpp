#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mldkit::xml {

/// Minimal DOM for the XML this toolkit reads and emits: label-space files
/// and generated SVG. Supports prologs, comments, DOCTYPE, attributes,
/// self-closing tags, CDATA and the standard entities. text holds the
/// element's own character data with surrounding whitespace kept.
struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Element> children;
    std::string text;

    /// Attribute value by exact name, nullptr when absent.
    const std::string* attribute(std::string_view attr_name) const;

    /// Element name with any namespace prefix removed.
    std::string_view local_name() const;
};

/// Parses a complete document and returns its root element.
/// Throws ParseError (with line/column) on malformed input.
Element parse(std::string_view text);

/// Escapes &, <, >, " and ' for use in text content or attribute values.
std::string escape(std::string_view text);

}  // namespace mldkit::xml
