#pragma once

#include <stdexcept>
#include <string>

namespace alge {

/// Malformed or inconsistent input data (files, tables, formats).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Parse failure with a 1-based line number.
class ParseError : public DataError {
public:
    ParseError(int line, const std::string& msg)
        : DataError("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Numerical failure: divergence, degenerate denominators, non-finite values.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace alge
