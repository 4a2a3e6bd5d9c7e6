#include "mldkit/arff.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "mldkit/errors.hpp"

namespace mldkit::arff {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t'; }

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

/// Scanner over a single logical line; columns are 1-based for diagnostics.
class LineScanner {
public:
    LineScanner(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

    std::size_t line_no() const { return line_no_; }
    std::size_t column() const { return pos_ + 1; }

    void skip_ws() {
        while (pos_ < line_.size() && is_space(line_[pos_])) ++pos_;
    }

    bool at_end() const { return pos_ >= line_.size(); }
    char peek() const { return line_[pos_]; }
    void advance() { ++pos_; }

    bool consume(char c) {
        if (!at_end() && line_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, line_no_, column());
    }

    void expect(char c, const char* what) {
        skip_ws();
        if (!consume(c)) fail(std::string("expected ") + what);
    }

    /// Reads a quoted or bare token. Bare tokens stop at any delimiter in
    /// `stop` or at whitespace when `ws_stops` is set; they are never empty.
    /// Returns the decoded text and whether it was quoted.
    std::pair<std::string, bool> token(std::string_view stop, bool ws_stops) {
        skip_ws();
        if (at_end()) fail("unexpected end of line");
        if (peek() == '\'' || peek() == '"') return {quoted_token(), true};
        std::size_t start = pos_;
        while (!at_end()) {
            char c = line_[pos_];
            if (ws_stops && is_space(c)) break;
            if (stop.find(c) != std::string_view::npos) break;
            ++pos_;
        }
        std::size_t end = pos_;
        while (end > start && is_space(line_[end - 1])) --end;
        if (end == start) fail("empty token");
        return {std::string(line_.substr(start, end - start)), false};
    }

    std::string rest_trimmed() {
        skip_ws();
        std::size_t end = line_.size();
        while (end > pos_ && is_space(line_[end - 1])) --end;
        std::string out(line_.substr(pos_, end - pos_));
        pos_ = line_.size();
        return out;
    }

private:
    std::string quoted_token() {
        char quote = line_[pos_];
        std::size_t open_col = column();
        ++pos_;
        std::string out;
        while (!at_end()) {
            char c = line_[pos_];
            if (c == quote) {
                ++pos_;
                return out;
            }
            if (c == '\\') {
                ++pos_;
                if (at_end()) break;
                char esc = line_[pos_];
                switch (esc) {
                    case 't': out.push_back('\t'); break;
                    case 'n': out.push_back('\n'); break;
                    case 'r': out.push_back('\r'); break;
                    default: out.push_back(esc); break;
                }
                ++pos_;
            } else {
                out.push_back(c);
                ++pos_;
            }
        }
        throw ParseError("unterminated quoted token", line_no_, open_col);
    }

    std::string_view line_;
    std::size_t pos_ = 0;
    std::size_t line_no_;
};

double parse_number(const std::string& text, LineScanner& sc) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        sc.fail("invalid numeric value '" + text + "'");
    return v;
}

std::int32_t nominal_index(const RawAttribute& attr, const std::string& value, LineScanner& sc) {
    auto it = std::find(attr.nominal_values.begin(), attr.nominal_values.end(), value);
    if (it == attr.nominal_values.end())
        sc.fail("value '" + value + "' is outside the nominal domain of attribute '" + attr.name + "'");
    return static_cast<std::int32_t>(it - attr.nominal_values.begin());
}

FeatureValue decode_cell(const RawAttribute& attr, const std::string& text, bool was_quoted,
                         LineScanner& sc) {
    if (!was_quoted && text == "?") return Missing{};
    switch (attr.kind) {
        case AttributeKind::numeric:
            return parse_number(text, sc);
        case AttributeKind::nominal:
            return NominalIndex{nominal_index(attr, text, sc)};
        case AttributeKind::text:
            return text;
    }
    sc.fail("unreachable attribute kind");
}

FeatureValue default_cell(const RawAttribute& attr) {
    switch (attr.kind) {
        case AttributeKind::numeric: return 0.0;
        case AttributeKind::nominal: return NominalIndex{0};
        case AttributeKind::text: return std::string{};
    }
    return Missing{};
}

void parse_attribute(LineScanner& sc, RawRelation& rel) {
    auto [name, name_quoted] = sc.token("{", true);
    (void)name_quoted;
    sc.skip_ws();
    if (sc.at_end()) sc.fail("attribute '" + name + "' is missing its type");

    RawAttribute attr;
    attr.name = std::move(name);
    if (sc.peek() == '{') {
        sc.advance();
        attr.kind = AttributeKind::nominal;
        while (true) {
            auto [value, quoted] = sc.token(",}", false);
            (void)quoted;
            if (std::find(attr.nominal_values.begin(), attr.nominal_values.end(), value) !=
                attr.nominal_values.end())
                sc.fail("duplicate nominal value '" + value + "'");
            attr.nominal_values.push_back(std::move(value));
            sc.skip_ws();
            if (sc.consume('}')) break;
            if (!sc.consume(',')) sc.fail("expected ',' or '}' in nominal domain");
        }
        sc.skip_ws();
        if (!sc.at_end()) sc.fail("trailing content after nominal domain");
    } else {
        std::string kind_word = sc.rest_trimmed();
        std::string kind = to_lower(kind_word);
        if (kind == "numeric" || kind == "real" || kind == "integer") {
            attr.kind = AttributeKind::numeric;
        } else if (kind == "string") {
            attr.kind = AttributeKind::text;
        } else if (kind.rfind("date", 0) == 0 || kind.rfind("relational", 0) == 0) {
            sc.fail("unsupported attribute kind '" + kind_word + "'");
        } else {
            sc.fail("unknown attribute kind '" + kind_word + "'");
        }
    }
    rel.attributes.push_back(std::move(attr));
}

std::vector<FeatureValue> parse_dense_row(LineScanner& sc, const RawRelation& rel) {
    std::vector<FeatureValue> row;
    row.reserve(rel.attributes.size());
    while (true) {
        if (row.size() >= rel.attributes.size())
            sc.fail("row has more than " + std::to_string(rel.attributes.size()) + " values");
        auto [text, quoted] = sc.token(",", false);
        row.push_back(decode_cell(rel.attributes[row.size()], text, quoted, sc));
        sc.skip_ws();
        if (sc.at_end()) break;
        if (!sc.consume(',')) sc.fail("expected ',' between values");
    }
    if (row.size() != rel.attributes.size())
        sc.fail("row has " + std::to_string(row.size()) + " values, expected " +
                std::to_string(rel.attributes.size()));
    return row;
}

std::vector<FeatureValue> parse_sparse_row(LineScanner& sc, const RawRelation& rel) {
    sc.expect('{', "'{'");
    std::vector<FeatureValue> row;
    row.reserve(rel.attributes.size());
    for (const RawAttribute& attr : rel.attributes) row.push_back(default_cell(attr));

    sc.skip_ws();
    if (sc.consume('}')) {
        sc.skip_ws();
        if (!sc.at_end()) sc.fail("trailing content after sparse row");
        return row;
    }

    std::unordered_set<std::size_t> seen;
    while (true) {
        sc.skip_ws();
        auto [index_text, index_quoted] = sc.token(" \t", true);
        if (index_quoted) sc.fail("sparse index must be a bare integer");
        std::size_t index = 0;
        const char* first = index_text.data();
        const char* last = first + index_text.size();
        auto [ptr, ec] = std::from_chars(first, last, index);
        if (ec != std::errc{} || ptr != last)
            sc.fail("invalid sparse index '" + index_text + "'");
        if (index >= rel.attributes.size())
            sc.fail("sparse index " + std::to_string(index) + " is out of range for " +
                    std::to_string(rel.attributes.size()) + " attributes");
        if (!seen.insert(index).second)
            sc.fail("duplicate sparse index " + std::to_string(index));

        auto [text, quoted] = sc.token(",}", false);
        row[index] = decode_cell(rel.attributes[index], text, quoted, sc);
        sc.skip_ws();
        if (sc.consume('}')) break;
        if (!sc.consume(',')) sc.fail("expected ',' or '}' in sparse row");
    }
    sc.skip_ws();
    if (!sc.at_end()) sc.fail("trailing content after sparse row");
    return row;
}

bool needs_quoting(std::string_view text) {
    if (text.empty() || text == "?") return true;
    for (char c : text) {
        if (is_space(c) || c == ',' || c == '\'' || c == '"' || c == '{' || c == '}' ||
            c == '%' || c == '\\' || c == '\n' || c == '\r' || c == '\t')
            return true;
    }
    return false;
}

void write_cell(std::ostream& out, const RawAttribute& attr, const FeatureValue& value) {
    if (std::holds_alternative<Missing>(value)) {
        out << '?';
        return;
    }
    switch (attr.kind) {
        case AttributeKind::numeric:
            out << format_double(std::get<double>(value));
            return;
        case AttributeKind::nominal: {
            auto idx = static_cast<std::size_t>(std::get<NominalIndex>(value).index);
            out << quote_token(attr.nominal_values.at(idx));
            return;
        }
        case AttributeKind::text:
            out << quote_token(std::get<std::string>(value));
            return;
    }
}

bool is_default_cell(const RawAttribute& attr, const FeatureValue& value) {
    switch (attr.kind) {
        case AttributeKind::numeric:
            return std::holds_alternative<double>(value) && std::get<double>(value) == 0.0;
        case AttributeKind::nominal:
            return std::holds_alternative<NominalIndex>(value) &&
                   std::get<NominalIndex>(value).index == 0;
        case AttributeKind::text:
            return std::holds_alternative<std::string>(value) &&
                   std::get<std::string>(value).empty();
    }
    return false;
}

}  // namespace

RawRelation parse(std::istream& in) {
    RawRelation rel;
    enum class Phase { preamble, header, data } phase = Phase::preamble;
    std::string raw;
    std::size_t line_no = 0;
    bool first_line = true;

    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (first_line) {
            first_line = false;
            if (raw.size() >= 3 && raw[0] == '\xEF' && raw[1] == '\xBB' && raw[2] == '\xBF')
                raw.erase(0, 3);
        }

        LineScanner sc(raw, line_no);
        sc.skip_ws();
        if (sc.at_end() || sc.peek() == '%') continue;

        if (phase == Phase::data) {
            if (sc.peek() == '{')
                rel.rows.push_back(parse_sparse_row(sc, rel));
            else
                rel.rows.push_back(parse_dense_row(sc, rel));
            continue;
        }

        if (sc.peek() != '@') sc.fail("expected a directive starting with '@'");
        sc.advance();
        auto [word, word_quoted] = sc.token("", true);
        if (word_quoted) sc.fail("directive keyword must be bare");
        std::string keyword = to_lower(word);

        if (keyword == "relation") {
            if (phase != Phase::preamble) sc.fail("duplicate @relation directive");
            sc.skip_ws();
            if (sc.at_end()) sc.fail("@relation requires a name");
            if (sc.peek() == '\'' || sc.peek() == '"') {
                auto [name, quoted] = sc.token("", true);
                (void)quoted;
                rel.name = std::move(name);
                sc.skip_ws();
                if (!sc.at_end()) sc.fail("trailing content after relation name");
            } else {
                rel.name = sc.rest_trimmed();
            }
            phase = Phase::header;
        } else if (keyword == "attribute") {
            if (phase != Phase::header) sc.fail("@attribute must follow @relation");
            parse_attribute(sc, rel);
        } else if (keyword == "data") {
            if (phase != Phase::header) sc.fail("@data must follow @relation");
            if (rel.attributes.empty()) sc.fail("@data with no attributes declared");
            sc.skip_ws();
            if (!sc.at_end()) sc.fail("trailing content after @data");
            phase = Phase::data;
        } else {
            sc.fail("unknown directive '@" + word + "'");
        }
    }

    if (phase == Phase::preamble) throw ParseError("missing @relation directive", line_no, 1);
    if (phase == Phase::header) throw ParseError("missing @data directive", line_no, 1);
    return rel;
}

RawRelation parse_string(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse(in);
}

RawRelation parse_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    return parse(in);
}

std::string quote_token(std::string_view text) {
    if (!needs_quoting(text)) return std::string(text);
    std::string out;
    out.reserve(text.size() + 2);
    out.push_back('\'');
    for (char c : text) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\'': out += "\\'"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c); break;
        }
    }
    out.push_back('\'');
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "0";
    return std::string(buf, ptr);
}

void write(std::ostream& out, const RawRelation& relation, RowStyle style) {
    out << "@relation " << quote_token(relation.name) << "\n\n";
    for (const RawAttribute& attr : relation.attributes) {
        out << "@attribute " << quote_token(attr.name) << ' ';
        switch (attr.kind) {
            case AttributeKind::numeric:
                out << "numeric";
                break;
            case AttributeKind::text:
                out << "string";
                break;
            case AttributeKind::nominal: {
                out << '{';
                for (std::size_t i = 0; i < attr.nominal_values.size(); ++i) {
                    if (i != 0) out << ',';
                    out << quote_token(attr.nominal_values[i]);
                }
                out << '}';
                break;
            }
        }
        out << "\n";
    }
    out << "\n@data\n";

    for (const auto& row : relation.rows) {
        if (style == RowStyle::dense) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i != 0) out << ',';
                write_cell(out, relation.attributes[i], row[i]);
            }
        } else {
            out << '{';
            bool first = true;
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (is_default_cell(relation.attributes[i], row[i])) continue;
                if (!first) out << ", ";
                first = false;
                out << i << ' ';
                write_cell(out, relation.attributes[i], row[i]);
            }
            out << '}';
        }
        out << "\n";
    }
}

void write_file(const std::filesystem::path& path, const RawRelation& relation, RowStyle style) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path.string() + "' for writing");
    write(out, relation, style);
    out.flush();
    if (!out) throw ParseError("failed writing '" + path.string() + "'");
}

}  // namespace mldkit::arff
