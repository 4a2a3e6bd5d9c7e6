#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mldkit {

/// Input could not be parsed. Carries the source position when one is known
/// (1-based line/column, 0 = unknown); the position is also baked into what().
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0)
        : std::runtime_error(format(message, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& message, std::size_t line, std::size_t column) {
        if (line == 0) return message;
        std::string out = "line " + std::to_string(line);
        if (column != 0) out += ", column " + std::to_string(column);
        out += ": " + message;
        return out;
    }

    std::size_t line_;
    std::size_t column_;
};

/// A dataset violates an operation's precondition or an assembly contract
/// (missing label designation, undefined metrics, dimension mismatches, ...).
class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mldkit
