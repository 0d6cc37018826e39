#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace covtrend {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed file structure: bad header, unparseable date column.
class FormatError : public Error {
public:
    using Error::Error;
};

/// A single row could not be parsed.
class ParseError : public Error {
public:
    ParseError(std::size_t row, const std::string& what)
        : Error("row " + std::to_string(row) + ": " + what), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Two records claim the same (region, date) slot.
class ConflictError : public Error {
public:
    using Error::Error;
};

/// Data that would violate an output invariant (e.g. non-monotone quantiles).
class IntegrityError : public Error {
public:
    using Error::Error;
};

/// Not enough past data to produce the requested quantity.
class InsufficientHistory : public Error {
public:
    using Error::Error;
};

/// Caller violated a documented precondition.
class ContractError : public Error {
public:
    using Error::Error;
};

} // namespace covtrend
