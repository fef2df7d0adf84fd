#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shapereg {

// Base class for all toolkit failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSV input had no header or no data rows.
struct EmptyFileError : Error {
    explicit EmptyFileError(const std::string& path)
        : Error("empty input file: " + path) {}
};

// Requested response column is absent from the CSV header.
struct MissingColumnError : Error {
    std::string column;
    MissingColumnError(const std::string& path, std::string column_name)
        : Error("column '" + column_name + "' not found in " + path),
          column(std::move(column_name)) {}
};

// A CSV cell failed to parse as a finite decimal number.
// `row` is the 1-based data row (header excluded), `column` the header name.
struct NonNumericCellError : Error {
    std::size_t row;
    std::string column;
    NonNumericCellError(std::size_t row_index, std::string column_name,
                        const std::string& detail)
        : Error("non-numeric cell at row " + std::to_string(row_index) +
                ", column '" + column_name + "': " + detail),
          row(row_index),
          column(std::move(column_name)) {}
};

// Validation-set size must satisfy 0 < size < n.
struct InvalidSplitSizeError : Error {
    std::size_t n;
    std::size_t requested;
    InvalidSplitSizeError(std::size_t n_rows, std::size_t requested_size)
        : Error("invalid validation size " + std::to_string(requested_size) +
                " for " + std::to_string(n_rows) + " rows"),
          n(n_rows),
          requested(requested_size) {}
};

// NaN or Inf reached a numeric boundary that requires finite values.
struct NonFiniteInputError : Error {
    std::size_t index;
    explicit NonFiniteInputError(const std::string& what_field, std::size_t at)
        : Error("non-finite value in " + what_field + " at index " +
                std::to_string(at)),
          index(at) {}
};

// Observation weights must be strictly positive.
struct NonPositiveWeightError : Error {
    std::size_t index;
    explicit NonPositiveWeightError(std::size_t at)
        : Error("non-positive weight at index " + std::to_string(at)),
          index(at) {}
};

// Iterative solver exhausted its iteration budget before reaching tolerance.
struct SolverNotConvergedError : Error {
    std::size_t max_iters;
    double residual;
    SolverNotConvergedError(std::size_t iters, double kkt_residual)
        : Error("solver did not converge within " + std::to_string(iters) +
                " iterations (residual " + std::to_string(kkt_residual) + ")"),
          max_iters(iters),
          residual(kkt_residual) {}
};

// Inputs that must share a dimension or length do not.
struct DimensionMismatchError : Error {
    using Error::Error;
};

// Candidate grid has no entries.
struct EmptyGridError : Error {
    EmptyGridError() : Error("candidate grid is empty") {}
};

// Too few usable grid points for the requested computation.
struct InsufficientGridError : Error {
    using Error::Error;
};

// Split-robustness study needs at least two splits.
struct InsufficientSplitsError : Error {
    explicit InsufficientSplitsError(std::size_t got)
        : Error("need at least 2 splits, got " + std::to_string(got)) {}
};

// A value lies outside the domain a routine is defined on.
struct DomainError : Error {
    using Error::Error;
};

}  // namespace shapereg
