#include "shapereg/additive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace shapereg {

namespace {

void check_alpha_vector(const DataSet& data, const std::vector<double>& alpha) {
    if (alpha.size() != data.d())
        throw DimensionMismatchError(
            "alpha has " + std::to_string(alpha.size()) +
            " entries but the data has " + std::to_string(data.d()) +
            " covariates");
    for (double a : alpha)
        if (!std::isfinite(a) || a < 0.0)
            throw DomainError("alpha entries must be finite and >= 0");
}

// Sorted tie-group structure of one covariate column: rows listed in
// (value, row index) order, group offsets into that listing, and the distinct
// knot values with their multiplicities.
struct ColumnGroups {
    std::vector<std::size_t> order;
    std::vector<std::size_t> group_start;  // size = knots.size() + 1
    std::vector<double> knots;
    std::vector<double> weights;
};

ColumnGroups group_column(const std::vector<double>& col) {
    const std::size_t n = col.size();
    ColumnGroups g;
    g.order.resize(n);
    std::iota(g.order.begin(), g.order.end(), std::size_t{0});
    std::sort(g.order.begin(), g.order.end(),
              [&](std::size_t a, std::size_t b) {
                  if (col[a] != col[b]) return col[a] < col[b];
                  return a < b;
              });
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && col[g.order[j]] == col[g.order[i]]) ++j;
        g.group_start.push_back(i);
        g.knots.push_back(col[g.order[i]]);
        g.weights.push_back(static_cast<double>(j - i));
        i = j;
    }
    g.group_start.push_back(n);
    return g;
}

}  // namespace

AdditiveFit backfit(const DataSet& train, const std::vector<double>& alpha,
                    std::size_t max_iters, double tol) {
    check_alpha_vector(train, alpha);
    if (max_iters < 1) throw DomainError("max_iters must be >= 1");
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw DomainError("tol must be a positive finite real");

    const std::size_t n = train.n();
    const std::size_t d = train.d();

    // Augmented responses z_i = y_i + alpha' x_i.
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        double zi = train.y(i);
        for (std::size_t j = 0; j < d; ++j) zi += alpha[j] * train.x(i, j);
        z[i] = zi;
    }

    std::vector<std::vector<double>> cols(d);
    std::vector<ColumnGroups> groups(d);
    for (std::size_t j = 0; j < d; ++j) {
        cols[j] = train.column(j);
        groups[j] = group_column(cols[j]);
    }

    AdditiveFit fit;
    fit.alpha = alpha;
    fit.components.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        fit.components[j].knots = groups[j].knots;
        fit.components[j].values.assign(groups[j].knots.size(), 0.0);
        fit.components[j].weights = groups[j].weights;
    }
    fit.intercept = std::accumulate(z.begin(), z.end(), 0.0) /
                    static_cast<double>(n);

    // comp_val[j][i]: component j evaluated at x_ij (always a knot of j).
    // fitted_sum[i]: sum over j of comp_val[j][i].
    std::vector<std::vector<double>> comp_val(d, std::vector<double>(n, 0.0));
    std::vector<double> fitted_sum(n, 0.0);

    const auto risk = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = z[i] - fit.intercept - fitted_sum[i];
            s += r * r;
        }
        return s;
    };

    fit.risk_trace.push_back(risk());

    std::vector<double> partial(n), pooled;
    double prev_sweep_risk = fit.risk_trace.front();
    fit.converged = false;
    for (std::size_t sweep = 0; sweep < max_iters; ++sweep) {
        for (std::size_t j = 0; j < d; ++j) {
            const ColumnGroups& g = groups[j];
            // Partial residuals with component j removed.
            for (std::size_t i = 0; i < n; ++i)
                partial[i] =
                    z[i] - fit.intercept - (fitted_sum[i] - comp_val[j][i]);
            // Pool within tie groups in sorted order (matching the
            // collapse_ties convention bit for bit).
            const std::size_t m = g.knots.size();
            pooled.resize(m);
            for (std::size_t k = 0; k < m; ++k) {
                double sw = 0.0, swy = 0.0;
                for (std::size_t t = g.group_start[k];
                     t < g.group_start[k + 1]; ++t) {
                    sw += 1.0;
                    swy += partial[g.order[t]];
                }
                pooled[k] = swy / sw;
            }
            StepFit updated = fit_isotonic(g.knots, pooled, g.weights);
            // Re-center: move the weighted mean into the intercept so every
            // component averages to zero over its training knots.
            double wsum = 0.0, wvsum = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                wsum += updated.weights[k];
                wvsum += updated.weights[k] * updated.values[k];
            }
            const double shift = wvsum / wsum;
            for (double& v : updated.values) v -= shift;
            fit.intercept += shift;
            // Refresh per-row values and the running fitted sums.
            for (std::size_t k = 0; k < m; ++k) {
                const double v = updated.values[k];
                for (std::size_t t = g.group_start[k];
                     t < g.group_start[k + 1]; ++t) {
                    const std::size_t i = g.order[t];
                    fitted_sum[i] += v - comp_val[j][i];
                    comp_val[j][i] = v;
                }
            }
            fit.components[j] = std::move(updated);
            fit.risk_trace.push_back(risk());
        }
        fit.iterations = sweep + 1;
        const double sweep_risk = fit.risk_trace.back();
        const double decrease = prev_sweep_risk - sweep_risk;
        if (decrease < tol * std::max(1.0, prev_sweep_risk)) {
            fit.converged = true;
            break;
        }
        prev_sweep_risk = sweep_risk;
    }
    fit.final_risk = fit.risk_trace.back();
    return fit;
}

double predict_additive(const AdditiveFit& fit, std::span<const double> x) {
    if (x.size() != fit.components.size())
        throw DimensionMismatchError(
            "query point has " + std::to_string(x.size()) +
            " entries but the fit has " +
            std::to_string(fit.components.size()) + " components");
    double value = fit.intercept;
    for (std::size_t j = 0; j < fit.components.size(); ++j)
        value += evaluate_step(fit.components[j], x[j]) - fit.alpha[j] * x[j];
    return value;
}

double validation_sse(const AdditiveFit& fit, const DataSet& data) {
    if (data.d() != fit.components.size())
        throw DimensionMismatchError(
            "validation data dimension does not match the fit");
    double sse = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
        const double r = data.y(i) - predict_additive(fit, data.row(i));
        sse += r * r;
    }
    return sse;
}

SelectedAdditiveModel select_alpha_additive(const DataSet& data,
                                            const AlphaGrid& grid,
                                            std::uint64_t seed,
                                            std::size_t validate_size) {
    grid.validate();
    if (grid.dimension() != data.d())
        throw DimensionMismatchError(
            "grid dimension " + std::to_string(grid.dimension()) +
            " does not match data dimension " + std::to_string(data.d()));

    std::vector<std::vector<double>> candidates = grid.values;
    std::sort(candidates.begin(), candidates.end());

    const std::size_t n = data.n();
    const std::size_t vsize =
        validate_size == 0 ? default_validate_size(n) : validate_size;
    const SplitIndices si = split(n, vsize, seed);
    const DataSet train = data.select_rows(si.train);
    const DataSet validate = data.select_rows(si.validate);

    SelectedAdditiveModel model;
    model.split = si;
    double best_sse = std::numeric_limits<double>::infinity();
    for (const auto& alpha : candidates) {
        AdditiveFit fit = backfit(train, alpha);
        const double sse = validation_sse(fit, validate);
        model.table.emplace_back(alpha, sse);
        if (sse < best_sse) {
            best_sse = sse;
            model.best = std::move(fit);
        }
    }
    return model;
}

}  // namespace shapereg
