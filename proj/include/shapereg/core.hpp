#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shapereg/errors.hpp"

namespace shapereg {

// Shape constraint carried by the univariate estimators.
enum class Shape { Monotone, Convex };

std::string to_string(Shape shape);
Shape shape_from_string(const std::string& name);

// Immutable numeric table: n rows of d covariates plus one response.
// All entries are validated finite on construction.
class DataSet {
  public:
    // `x` is row-major with n*d entries; `y` has n entries.
    DataSet(std::vector<double> x, std::vector<double> y, std::size_t d);

    static DataSet univariate(std::vector<double> x, std::vector<double> y);

    std::size_t n() const { return y_.size(); }
    std::size_t d() const { return d_; }

    double x(std::size_t i, std::size_t j) const { return x_[i * d_ + j]; }
    double y(std::size_t i) const { return y_[i]; }
    std::span<const double> row(std::size_t i) const {
        return {x_.data() + i * d_, d_};
    }

    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }

    // Copy of column j across all rows.
    std::vector<double> column(std::size_t j) const;

    // New DataSet holding the given rows, in the given order.
    DataSet select_rows(const std::vector<std::size_t>& rows) const;

  private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::size_t d_;
};

// Load a CSV file with a header row.  The named column becomes the response;
// the remaining columns become covariates in file order.
DataSet load_csv(const std::string& path, const std::string& response);

// Write a DataSet as CSV with canonical header x1,...,xd,y.  Values are
// serialized with 17 significant digits so a reload reproduces them exactly.
void save_csv(const std::string& path, const DataSet& data);

// Disjoint train/validation index sets covering 0..n-1, both sorted.
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validate;
    std::uint64_t seed = 0;
};

// Default validation-set size: round(sqrt(n)), clamped to [1, n-1].
std::size_t default_validate_size(std::size_t n);

// Draw a uniformly random validation subset of the given size.
// Deterministic in (n, validate_size, seed) across platforms.
SplitIndices split(std::size_t n, std::size_t validate_size,
                   std::uint64_t seed);

// Finite list of candidate penalty vectors, all entries >= 0.
struct AlphaGrid {
    std::vector<std::vector<double>> values;
    bool refine = false;

    // Count log-spaced scalars between lo and hi (inclusive), optionally
    // with 0 prepended.  Entries are replicated to dimension d.
    static AlphaGrid log_spaced(double lo, double hi, std::size_t count,
                                bool include_zero, std::size_t d = 1);

    // Explicit scalar candidates, replicated to dimension d.
    static AlphaGrid from_scalars(const std::vector<double>& scalars,
                                  std::size_t d = 1);

    // Shared default: 16 log-spaced values on [1e-2, 1e2] plus 0.
    static AlphaGrid default_grid(std::size_t d = 1);

    std::size_t dimension() const;

    // Flat scalar view; requires dimension() == 1.
    std::vector<double> scalars() const;

    // Throws EmptyGridError / NonFiniteInputError / DomainError (negative
    // entries) / DimensionMismatchError (ragged entries).
    void validate() const;
};

}  // namespace shapereg
