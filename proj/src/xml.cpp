#include "mldkit/xml.hpp"

#include <cctype>
#include <cstdint>

#include "mldkit/errors.hpp"

namespace mldkit::xml {
namespace {

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
    return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.';
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Element parse_document() {
        skip_misc();
        Element root = parse_element();
        skip_misc();
        if (!at_end()) fail("content after document root");
        return root;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char get() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, line_, col_);
    }

    bool starts_with(std::string_view prefix) const {
        return text_.substr(pos_, prefix.size()) == prefix;
    }

    void expect(std::string_view literal) {
        for (char c : literal) {
            if (at_end() || peek() != c) fail("expected '" + std::string(literal) + "'");
            get();
        }
    }

    void skip_ws() {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
                get();
            else
                break;
        }
    }

    void skip_until(std::string_view terminator) {
        while (!at_end()) {
            if (starts_with(terminator)) {
                expect(terminator);
                return;
            }
            get();
        }
        fail("unterminated construct, expected '" + std::string(terminator) + "'");
    }

    /// Prolog, processing instructions, comments, DOCTYPE, whitespace.
    void skip_misc() {
        while (true) {
            skip_ws();
            if (starts_with("<?")) {
                skip_until("?>");
            } else if (starts_with("<!--")) {
                skip_until("-->");
            } else if (starts_with("<!DOCTYPE")) {
                skip_doctype();
            } else {
                return;
            }
        }
    }

    void skip_doctype() {
        expect("<!DOCTYPE");
        int depth = 0;
        while (!at_end()) {
            char c = get();
            if (c == '[' || c == '<') ++depth;
            if (c == ']') --depth;
            if (c == '>') {
                if (depth <= 0) return;
                --depth;
            }
        }
        fail("unterminated DOCTYPE");
    }

    std::string parse_name() {
        if (at_end() || !is_name_start(peek())) fail("expected a name");
        std::string name;
        while (!at_end() && is_name_char(peek())) name.push_back(get());
        return name;
    }

    std::string parse_reference() {
        expect("&");
        std::string entity;
        while (!at_end() && peek() != ';') entity.push_back(get());
        if (at_end()) fail("unterminated entity reference");
        get();
        if (entity == "amp") return "&";
        if (entity == "lt") return "<";
        if (entity == "gt") return ">";
        if (entity == "quot") return "\"";
        if (entity == "apos") return "'";
        if (!entity.empty() && entity[0] == '#') {
            std::uint32_t code = 0;
            std::size_t i = 1;
            int base = 10;
            if (i < entity.size() && (entity[i] == 'x' || entity[i] == 'X')) {
                base = 16;
                ++i;
            }
            if (i >= entity.size()) fail("empty character reference");
            for (; i < entity.size(); ++i) {
                char c = entity[i];
                int digit;
                if (c >= '0' && c <= '9')
                    digit = c - '0';
                else if (base == 16 && c >= 'a' && c <= 'f')
                    digit = c - 'a' + 10;
                else if (base == 16 && c >= 'A' && c <= 'F')
                    digit = c - 'A' + 10;
                else
                    fail("invalid character reference '&" + entity + ";'");
                code = code * static_cast<std::uint32_t>(base) + static_cast<std::uint32_t>(digit);
                if (code > 0x10FFFF) fail("character reference out of range");
            }
            return encode_utf8(code);
        }
        fail("unknown entity '&" + entity + ";'");
    }

    static std::string encode_utf8(std::uint32_t code) {
        std::string out;
        if (code < 0x80) {
            out.push_back(static_cast<char>(code));
        } else if (code < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (code >> 6)));
            out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        } else if (code < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (code >> 12)));
            out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (code >> 18)));
            out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        }
        return out;
    }

    std::string parse_attribute_value() {
        if (at_end() || (peek() != '"' && peek() != '\'')) fail("expected a quoted attribute value");
        char quote = get();
        std::string value;
        while (!at_end() && peek() != quote) {
            if (peek() == '&')
                value += parse_reference();
            else if (peek() == '<')
                fail("'<' in attribute value");
            else
                value.push_back(get());
        }
        if (at_end()) fail("unterminated attribute value");
        get();
        return value;
    }

    Element parse_element() {
        expect("<");
        Element element;
        element.name = parse_name();
        while (true) {
            skip_ws();
            if (at_end()) fail("unterminated start tag");
            if (peek() == '>') {
                get();
                parse_content(element);
                return element;
            }
            if (starts_with("/>")) {
                expect("/>");
                return element;
            }
            std::string attr_name = parse_name();
            skip_ws();
            expect("=");
            skip_ws();
            std::string value = parse_attribute_value();
            for (const auto& [existing, unused] : element.attributes)
                if (existing == attr_name) fail("duplicate attribute '" + attr_name + "'");
            element.attributes.emplace_back(std::move(attr_name), std::move(value));
        }
    }

    void parse_content(Element& element) {
        while (true) {
            if (at_end()) fail("unterminated element '" + element.name + "'");
            if (starts_with("</")) {
                expect("</");
                std::string name = parse_name();
                if (name != element.name)
                    fail("mismatched end tag '</" + name + ">' for '" + element.name + "'");
                skip_ws();
                expect(">");
                return;
            }
            if (starts_with("<!--")) {
                skip_until("-->");
            } else if (starts_with("<![CDATA[")) {
                expect("<![CDATA[");
                while (!at_end() && !starts_with("]]>")) element.text.push_back(get());
                expect("]]>");
            } else if (starts_with("<?")) {
                skip_until("?>");
            } else if (peek() == '<') {
                element.children.push_back(parse_element());
            } else if (peek() == '&') {
                element.text += parse_reference();
            } else {
                element.text.push_back(get());
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

}  // namespace

const std::string* Element::attribute(std::string_view attr_name) const {
    for (const auto& [name, value] : attributes)
        if (name == attr_name) return &value;
    return nullptr;
}

std::string_view Element::local_name() const {
    std::string_view view = name;
    auto colon = view.rfind(':');
    return colon == std::string_view::npos ? view : view.substr(colon + 1);
}

Element parse(std::string_view text) {
    Parser parser(text);
    return parser.parse_document();
}

std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c); break;
        }
    }
    return out;
}

}  // namespace mldkit::xml
