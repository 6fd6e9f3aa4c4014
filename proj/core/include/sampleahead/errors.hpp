#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sampleahead {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated by the caller.
class ContractError : public Error {
public:
    using Error::Error;
};

/// A parameter point lies outside the domain of one of the space's axes.
class DomainError : public Error {
public:
    DomainError(std::string axis, const std::string& what)
        : Error("axis '" + axis + "': " + what), axis_(std::move(axis)) {}

    [[nodiscard]] const std::string& axis() const noexcept { return axis_; }

private:
    std::string axis_;
};

class IndexError : public Error {
public:
    using Error::Error;
};

/// Input data is missing or unusable (absent class, missing directory, ...).
class DataError : public Error {
public:
    using Error::Error;
};

/// Malformed IDX payload. The offset is the byte position of the violation.
class ParseError : public DataError {
public:
    ParseError(std::string file, std::size_t offset, const std::string& what)
        : DataError(file + " @ byte " + std::to_string(offset) + ": " + what),
          file_(std::move(file)), offset_(offset) {}

    [[nodiscard]] const std::string& file() const noexcept { return file_; }
    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::string file_;
    std::size_t offset_;
};

/// All kernel weights vanished, e.g. the indicator kernel over an empty bucket.
class EmptyBucketError : public Error {
public:
    explicit EmptyBucketError(std::size_t bucket)
        : Error("no probe carries weight for bucket " + std::to_string(bucket)),
          bucket_(bucket) {}

    [[nodiscard]] std::size_t bucket() const noexcept { return bucket_; }

private:
    std::size_t bucket_;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
public:
    explicit DivergenceError(std::size_t iteration)
        : Error("non-finite loss at iteration " + std::to_string(iteration)),
          iteration_(iteration) {}

    [[nodiscard]] std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

/// A statistic is undefined for the given input (e.g. zero variance).
class DegenerateError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace sampleahead
