#pragma once

#include <stdexcept>
#include <string>

namespace homcw {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line (and column when known).
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column = 0)
        : Error(format(what, line, column)), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, int line, int column) {
        std::string out = "line " + std::to_string(line);
        if (column > 0) out += ", column " + std::to_string(column);
        return out + ": " + what;
    }

    int line_;
    int column_;
};

/// A documented size cap (vertex count, product size, ...) was exceeded.
class CapExceeded : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace homcw
