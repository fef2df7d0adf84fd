#include "shapereg/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace shapereg {

double shape_penalty(Shape shape, double alpha, double x) {
    return shape == Shape::Monotone ? alpha * x : 0.5 * alpha * x * x;
}

namespace {

void check_univariate_alpha(const DataSet& data, double alpha) {
    if (data.d() != 1)
        throw DimensionMismatchError(
            "decomposition estimator requires a single covariate, got d = " +
            std::to_string(data.d()));
    if (!std::isfinite(alpha) || alpha < 0.0)
        throw DomainError("alpha must be finite and >= 0");
}

}  // namespace

std::vector<double> augment(const DataSet& data, double alpha, Shape shape) {
    check_univariate_alpha(data, alpha);
    std::vector<double> z(data.n());
    for (std::size_t i = 0; i < data.n(); ++i)
        z[i] = data.y(i) + shape_penalty(shape, alpha, data.x(i, 0));
    return z;
}

DecompFit fit_for_alpha(const DataSet& train, double alpha, Shape shape) {
    const std::vector<double> z = augment(train, alpha, shape);
    const std::vector<double> ones(train.n(), 1.0);
    const CollapsedPoints pts = collapse_ties(train.xs(), z, ones);
    DecompFit fit;
    fit.alpha = alpha;
    fit.shape = shape;
    if (shape == Shape::Monotone)
        fit.g = fit_isotonic(pts.x, pts.y, pts.w);
    else
        fit.g = fit_convex_lse(pts.x, pts.y, pts.w);
    return fit;
}

double predict(const DecompFit& fit, double q) {
    const double g = fit.shape == Shape::Monotone
                         ? evaluate_step(std::get<StepFit>(fit.g), q)
                         : evaluate_pwl(std::get<PiecewiseLinearFit>(fit.g), q);
    return g - shape_penalty(fit.shape, fit.alpha, q);
}

double predict(const SelectedModel& model, double q) {
    return predict(model.best, q);
}

double validation_sse(const DecompFit& fit, const DataSet& data) {
    if (data.d() != 1)
        throw DimensionMismatchError("validation data must have d = 1");
    double sse = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
        const double r = data.y(i) - predict(fit, data.x(i, 0));
        sse += r * r;
    }
    return sse;
}

SelectedModel select_alpha(const DataSet& data, const AlphaGrid& grid,
                           Shape shape, std::uint64_t seed,
                           std::size_t validate_size) {
    if (data.d() != 1)
        throw DimensionMismatchError(
            "select_alpha requires a single covariate");
    grid.validate();
    std::vector<double> alphas = grid.scalars();
    std::sort(alphas.begin(), alphas.end());

    const std::size_t n = data.n();
    const std::size_t vsize =
        validate_size == 0 ? default_validate_size(n) : validate_size;
    const SplitIndices si = split(n, vsize, seed);

    // Training rows in index order; the sort/group structure over x is
    // shared by every candidate alpha.
    const std::size_t nt = si.train.size();
    std::vector<double> tx(nt), ty(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        tx[i] = data.x(si.train[i], 0);
        ty[i] = data.y(si.train[i]);
    }
    std::vector<std::size_t> order(nt);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (tx[a] != tx[b]) return tx[a] < tx[b];
        return a < b;
    });
    std::vector<std::size_t> group_start;  // offsets into `order`
    std::vector<double> knots, weights;
    for (std::size_t i = 0; i < nt;) {
        std::size_t j = i;
        while (j < nt && tx[order[j]] == tx[order[i]]) ++j;
        group_start.push_back(i);
        knots.push_back(tx[order[i]]);
        weights.push_back(static_cast<double>(j - i));
        i = j;
    }
    group_start.push_back(nt);

    std::vector<double> vx(si.validate.size()), vy(si.validate.size());
    for (std::size_t i = 0; i < si.validate.size(); ++i) {
        vx[i] = data.x(si.validate[i], 0);
        vy[i] = data.y(si.validate[i]);
    }

    // One candidate evaluation: augment in training-row order, pool tied x
    // in sorted order (bit-identical to fit_for_alpha's collapse), fit the
    // shape, and score on the validation rows.
    std::vector<double> z(nt), pooled(knots.size());
    const auto eval_alpha = [&](double alpha) {
        for (std::size_t i = 0; i < nt; ++i)
            z[i] = ty[i] + shape_penalty(shape, alpha, tx[i]);
        for (std::size_t g = 0; g + 1 < group_start.size(); ++g) {
            double sw = 0.0, swy = 0.0;
            for (std::size_t t = group_start[g]; t < group_start[g + 1]; ++t) {
                sw += 1.0;
                swy += z[order[t]];
            }
            pooled[g] = swy / sw;
        }
        DecompFit fit;
        fit.alpha = alpha;
        fit.shape = shape;
        if (shape == Shape::Monotone)
            fit.g = fit_isotonic(knots, pooled, weights);
        else
            fit.g = fit_convex_lse(knots, pooled, weights);
        double sse = 0.0;
        for (std::size_t i = 0; i < vx.size(); ++i) {
            const double r = vy[i] - predict(fit, vx[i]);
            sse += r * r;
        }
        return std::make_pair(std::move(fit), sse);
    };

    SelectedModel model;
    model.split = si;
    double best_sse = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        auto [fit, sse] = eval_alpha(alphas[i]);
        model.table.emplace_back(alphas[i], sse);
        if (sse < best_sse) {
            best_sse = sse;
            best_idx = i;
            model.best = std::move(fit);
        }
    }

    if (grid.refine && alphas.size() >= 2) {
        const double lo = best_idx > 0 ? alphas[best_idx - 1] : alphas[best_idx];
        const double hi = best_idx + 1 < alphas.size() ? alphas[best_idx + 1]
                                                       : alphas[best_idx];
        if (hi > lo) {
            // Golden-section search; every evaluation lands in the table.
            constexpr double invphi = 0.6180339887498949;
            constexpr int max_evals = 30;
            double a = lo, b = hi;
            DecompFit refined_fit;
            double refined_sse = std::numeric_limits<double>::infinity();
            double refined_alpha = 0.0;
            const auto probe = [&](double alpha) {
                auto [fit, sse] = eval_alpha(alpha);
                model.table.emplace_back(alpha, sse);
                if (sse < refined_sse ||
                    (sse == refined_sse && alpha < refined_alpha)) {
                    refined_sse = sse;
                    refined_alpha = alpha;
                    refined_fit = std::move(fit);
                }
                return sse;
            };
            double c = b - invphi * (b - a);
            double d = a + invphi * (b - a);
            double fc = probe(c);
            double fd = probe(d);
            int evals = 2;
            while (evals < max_evals) {
                if (fc < fd) {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - invphi * (b - a);
                    fc = probe(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + invphi * (b - a);
                    fd = probe(d);
                }
                ++evals;
            }
            if (refined_sse < best_sse) {
                model.best = std::move(refined_fit);
                model.refined = true;
            }
        }
    }
    return model;
}

}  // namespace shapereg
