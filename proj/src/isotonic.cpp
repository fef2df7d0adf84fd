#include "shapereg/isotonic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace shapereg {

CollapsedPoints collapse_ties(const std::vector<double>& x,
                              const std::vector<double>& y,
                              const std::vector<double>& w) {
    const std::size_t n = x.size();
    if (y.size() != n || w.size() != n)
        throw DimensionMismatchError("collapse_ties: x, y, w sizes differ");
    if (n == 0) throw DimensionMismatchError("collapse_ties: empty input");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(x[i])) throw NonFiniteInputError("x", i);
        if (!std::isfinite(y[i])) throw NonFiniteInputError("y", i);
        if (!std::isfinite(w[i])) throw NonFiniteInputError("w", i);
        if (w[i] <= 0.0) throw NonPositiveWeightError(i);
    }

    // Order by (x, original index): the secondary key pins the accumulation
    // order inside duplicate groups, making pooled means bit-reproducible.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return a < b;
    });

    CollapsedPoints out;
    out.x.reserve(n);
    out.y.reserve(n);
    out.w.reserve(n);
    std::size_t i = 0;
    while (i < n) {
        const double xv = x[order[i]];
        double sw = 0.0;
        double swy = 0.0;
        std::size_t j = i;
        while (j < n && x[order[j]] == xv) {
            sw += w[order[j]];
            swy += w[order[j]] * y[order[j]];
            ++j;
        }
        out.x.push_back(xv);
        out.y.push_back(swy / sw);
        out.w.push_back(sw);
        i = j;
    }
    return out;
}

StepFit fit_isotonic(const std::vector<double>& knots,
                     const std::vector<double>& y,
                     const std::vector<double>& w) {
    const std::size_t n = knots.size();
    if (y.size() != n || w.size() != n)
        throw DimensionMismatchError("fit_isotonic: knots, y, w sizes differ");
    if (n == 0) throw DimensionMismatchError("fit_isotonic: empty input");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(knots[i])) throw NonFiniteInputError("knots", i);
        if (!std::isfinite(y[i])) throw NonFiniteInputError("y", i);
        if (!std::isfinite(w[i])) throw NonFiniteInputError("w", i);
        if (w[i] <= 0.0) throw NonPositiveWeightError(i);
        if (i + 1 < n && !(knots[i] < knots[i + 1]))
            throw DomainError("fit_isotonic: knots must be strictly increasing");
    }

    // Pool adjacent violators with a block stack.  Each input point starts
    // as its own block; merging keeps block means equal to pooled weighted
    // means.  Amortized O(n): every merge removes one block.
    struct Block {
        double swy;   // sum of w*y
        double sw;    // sum of w
        double mean;  // swy / sw
        std::size_t last;  // index of the last point in the block
    };
    std::vector<Block> stack;
    stack.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Block b{w[i] * y[i], w[i], y[i], i};
        while (!stack.empty() && stack.back().mean > b.mean) {
            b.swy += stack.back().swy;
            b.sw += stack.back().sw;
            b.mean = b.swy / b.sw;
            b.last = std::max(b.last, stack.back().last);
            stack.pop_back();
        }
        stack.push_back(b);
    }

    StepFit fit;
    fit.knots = knots;
    fit.weights = w;
    fit.values.resize(n);
    std::size_t start = 0;
    for (const Block& b : stack) {
        for (std::size_t i = start; i <= b.last; ++i) fit.values[i] = b.mean;
        start = b.last + 1;
    }
    return fit;
}

StepFit fit_isotonic_points(const std::vector<double>& x,
                            const std::vector<double>& y,
                            const std::vector<double>& w) {
    const CollapsedPoints pts = collapse_ties(x, y, w);
    return fit_isotonic(pts.x, pts.y, pts.w);
}

double evaluate_step(const StepFit& fit, double q) {
    const std::vector<double>& k = fit.knots;
    const std::vector<double>& v = fit.values;
    if (k.empty()) throw DimensionMismatchError("evaluate_step: empty fit");
    if (q <= k.front()) return v.front();
    if (q >= k.back()) return v.back();
    // Last knot <= q; exact fitted value when q is a knot.
    const auto it = std::upper_bound(k.begin(), k.end(), q);
    const std::size_t i = static_cast<std::size_t>(it - k.begin()) - 1;
    if (k[i] == q) return v[i];
    const double t = (q - k[i]) / (k[i + 1] - k[i]);
    return v[i] + t * (v[i + 1] - v[i]);
}

}  // namespace shapereg
