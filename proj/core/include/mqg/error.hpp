#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mqg {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates an operation's contract (bad argument, out-of-range value).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed CSV content. Row/column positions are 1-based file coordinates;
/// a column of 0 marks a row-level (structural) problem.
class CsvError : public Error {
public:
    CsvError(const std::string& message, std::size_t row, std::size_t col)
        : Error(message), row_(row), col_(col) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

/// Filesystem or OS-level failure; the message names the path and cause.
class IoError : public Error {
public:
    using Error::Error;
};

/// A requested dense materialization exceeds its hard size guard.
class CapacityError : public Error {
public:
    using Error::Error;
};

} // namespace mqg
