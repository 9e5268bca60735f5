#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace judge {

// Bad or inconsistent input data. The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Stream-level failure while reading a dump file.
class IngestError : public DataError {
public:
    IngestError(const std::string& what, std::uint64_t byte_offset)
        : DataError(what + " (at byte offset " + std::to_string(byte_offset) + ")"),
          offset_(byte_offset) {}

    std::uint64_t byte_offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

// A schema violation at a known line of an input file.
class SchemaError : public DataError {
public:
    SchemaError(const std::string& what, std::size_t line)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Model fitting could not proceed (single class, degenerate design, ...).
class TrainingError : public DataError {
public:
    using DataError::DataError;
};

} // namespace judge
