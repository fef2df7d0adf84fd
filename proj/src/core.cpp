#include "shapereg/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "shapereg/rng.hpp"

namespace shapereg {

std::string to_string(Shape shape) {
    return shape == Shape::Monotone ? "monotone" : "convex";
}

Shape shape_from_string(const std::string& name) {
    if (name == "monotone") return Shape::Monotone;
    if (name == "convex") return Shape::Convex;
    throw DomainError("unknown shape '" + name +
                      "' (expected 'monotone' or 'convex')");
}

DataSet::DataSet(std::vector<double> x, std::vector<double> y, std::size_t d)
    : x_(std::move(x)), y_(std::move(y)), d_(d) {
    if (d_ == 0) throw DimensionMismatchError("DataSet requires d >= 1");
    if (y_.empty()) throw DimensionMismatchError("DataSet requires n >= 1");
    if (x_.size() != y_.size() * d_)
        throw DimensionMismatchError(
            "covariate storage has " + std::to_string(x_.size()) +
            " entries, expected " + std::to_string(y_.size() * d_));
    for (std::size_t i = 0; i < x_.size(); ++i)
        if (!std::isfinite(x_[i])) throw NonFiniteInputError("x", i);
    for (std::size_t i = 0; i < y_.size(); ++i)
        if (!std::isfinite(y_[i])) throw NonFiniteInputError("y", i);
}

DataSet DataSet::univariate(std::vector<double> x, std::vector<double> y) {
    return DataSet(std::move(x), std::move(y), 1);
}

std::vector<double> DataSet::column(std::size_t j) const {
    std::vector<double> out(n());
    for (std::size_t i = 0; i < n(); ++i) out[i] = x(i, j);
    return out;
}

DataSet DataSet::select_rows(const std::vector<std::size_t>& rows) const {
    std::vector<double> xs;
    xs.reserve(rows.size() * d_);
    std::vector<double> ys;
    ys.reserve(rows.size());
    for (std::size_t r : rows) {
        for (std::size_t j = 0; j < d_; ++j) xs.push_back(x(r, j));
        ys.push_back(y(r));
    }
    return DataSet(std::move(xs), std::move(ys), d_);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, std::size_t row,
                  const std::string& column) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    while (last != first &&
           (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r'))
        --last;
    if (first == last)
        throw NonNumericCellError(row, column, "empty cell");
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw NonNumericCellError(row, column,
                                  "'" + std::string(first, last) + "'");
    return value;
}

}  // namespace

DataSet load_csv(const std::string& path, const std::string& response) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);

    std::string header;
    if (!std::getline(in, header)) throw EmptyFileError(path);
    if (!header.empty() && header.back() == '\r') header.pop_back();

    std::vector<std::string> names = split_line(header);
    for (auto& name : names) {
        while (!name.empty() && (name.back() == ' ' || name.back() == '\r'))
            name.pop_back();
        while (!name.empty() && name.front() == ' ') name.erase(name.begin());
    }
    if (names.empty()) throw EmptyFileError(path);

    std::size_t response_col = names.size();
    for (std::size_t j = 0; j < names.size(); ++j)
        if (names[j] == response) response_col = j;
    if (response_col == names.size())
        throw MissingColumnError(path, response);
    if (names.size() < 2)
        throw MissingColumnError(path, "at least one covariate");

    const std::size_t d = names.size() - 1;
    std::vector<double> xs;
    std::vector<double> ys;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        std::vector<std::string> cells = split_line(line);
        if (cells.size() != names.size())
            throw NonNumericCellError(
                row, names[std::min(cells.size(), names.size() - 1)],
                "row has " + std::to_string(cells.size()) +
                    " cells, expected " + std::to_string(names.size()));
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const double v = parse_cell(cells[j], row, names[j]);
            if (j == response_col)
                ys.push_back(v);
            else
                xs.push_back(v);
        }
    }
    if (row == 0) throw EmptyFileError(path);
    return DataSet(std::move(xs), std::move(ys), d);
}

void save_csv(const std::string& path, const DataSet& data) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    for (std::size_t j = 0; j < data.d(); ++j)
        out << "x" << (j + 1) << ",";
    out << "y\n";
    char buf[64];
    for (std::size_t i = 0; i < data.n(); ++i) {
        for (std::size_t j = 0; j < data.d(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", data.x(i, j));
            out << buf << ",";
        }
        std::snprintf(buf, sizeof buf, "%.17g", data.y(i));
        out << buf << "\n";
    }
    if (!out) throw Error("failed writing " + path);
}

std::size_t default_validate_size(std::size_t n) {
    if (n < 2) throw InvalidSplitSizeError(n, 1);
    auto k = static_cast<std::size_t>(
        std::llround(std::sqrt(static_cast<double>(n))));
    k = std::max<std::size_t>(k, 1);
    k = std::min(k, n - 1);
    return k;
}

SplitIndices split(std::size_t n, std::size_t validate_size,
                   std::uint64_t seed) {
    if (validate_size == 0 || validate_size >= n)
        throw InvalidSplitSizeError(n, validate_size);

    // Partial Fisher-Yates: the first validate_size slots end up holding a
    // uniformly random subset of {0, ..., n-1}.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = 0; i < validate_size; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(perm[i], perm[j]);
    }

    SplitIndices out;
    out.seed = seed;
    out.validate.assign(perm.begin(),
                        perm.begin() + static_cast<std::ptrdiff_t>(validate_size));
    out.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(validate_size),
                     perm.end());
    std::sort(out.validate.begin(), out.validate.end());
    std::sort(out.train.begin(), out.train.end());
    return out;
}

AlphaGrid AlphaGrid::log_spaced(double lo, double hi, std::size_t count,
                                bool include_zero, std::size_t d) {
    if (count == 0 || (count == 1 && lo != hi))
        throw DomainError("log-spaced grid needs count >= 2 (or lo == hi)");
    if (!(lo > 0.0) || !(hi > 0.0) || !(lo <= hi))
        throw DomainError("log-spaced grid needs 0 < lo <= hi");
    std::vector<double> scalars;
    if (include_zero) scalars.push_back(0.0);
    const double llo = std::log10(lo);
    const double lhi = std::log10(hi);
    for (std::size_t i = 0; i < count; ++i) {
        const double t =
            count == 1 ? 0.0
                       : static_cast<double>(i) / static_cast<double>(count - 1);
        scalars.push_back(std::pow(10.0, llo + t * (lhi - llo)));
    }
    return from_scalars(scalars, d);
}

AlphaGrid AlphaGrid::from_scalars(const std::vector<double>& scalars,
                                  std::size_t d) {
    if (d == 0) throw DimensionMismatchError("grid dimension must be >= 1");
    AlphaGrid grid;
    grid.values.reserve(scalars.size());
    for (double s : scalars)
        grid.values.emplace_back(std::vector<double>(d, s));
    grid.validate();
    return grid;
}

AlphaGrid AlphaGrid::default_grid(std::size_t d) {
    return log_spaced(1e-2, 1e2, 16, /*include_zero=*/true, d);
}

std::size_t AlphaGrid::dimension() const {
    if (values.empty()) throw EmptyGridError();
    return values.front().size();
}

std::vector<double> AlphaGrid::scalars() const {
    if (dimension() != 1)
        throw DimensionMismatchError("grid is not one-dimensional");
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(v.front());
    return out;
}

void AlphaGrid::validate() const {
    if (values.empty()) throw EmptyGridError();
    const std::size_t d = values.front().size();
    if (d == 0) throw DimensionMismatchError("grid entries must be non-empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].size() != d)
            throw DimensionMismatchError("grid entries have mixed dimensions");
        for (double v : values[i]) {
            if (!std::isfinite(v)) throw NonFiniteInputError("alpha grid", i);
            if (v < 0.0)
                throw DomainError("alpha grid entries must be >= 0");
        }
    }
}

}  // namespace shapereg
