#include "shapereg/convexreg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace shapereg {

namespace {

// Secant slopes non-decreasing.  The comparison leaves room for value
// round-off (~1e-10 relative, far below the solver tolerance): a fitted
// sequence whose slopes wobble by an ulp after unscaling must still count
// as feasible, which is what makes the fit exactly idempotent.
bool is_convex_sequence(const std::vector<double>& k,
                        const std::vector<double>& v) {
    for (std::size_t i = 0; i + 2 < k.size(); ++i) {
        const double s0 = (v[i + 1] - v[i]) / (k[i + 1] - k[i]);
        const double s1 = (v[i + 2] - v[i + 1]) / (k[i + 2] - k[i + 1]);
        const double slack =
            1e-10 * std::max({1.0, std::fabs(s0), std::fabs(s1)});
        if (s0 > s1 + slack) return false;
    }
    return true;
}

// Dense symmetric solve by Gaussian elimination with partial pivoting.
// Sizes stay small: 2 + (number of active hinges).
bool solve_dense(std::vector<double> a, std::vector<double> b,
                 std::size_t p, std::vector<double>& out) {
    for (std::size_t col = 0; col < p; ++col) {
        std::size_t pivot = col;
        double best = std::fabs(a[col * p + col]);
        for (std::size_t r = col + 1; r < p; ++r) {
            const double mag = std::fabs(a[r * p + col]);
            if (mag > best) {
                best = mag;
                pivot = r;
            }
        }
        if (best == 0.0) return false;
        if (pivot != col) {
            for (std::size_t c = 0; c < p; ++c)
                std::swap(a[col * p + c], a[pivot * p + c]);
            std::swap(b[col], b[pivot]);
        }
        const double inv = 1.0 / a[col * p + col];
        for (std::size_t r = col + 1; r < p; ++r) {
            const double f = a[r * p + col] * inv;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < p; ++c)
                a[r * p + c] -= f * a[col * p + c];
            b[r] -= f * b[col];
        }
    }
    out.assign(p, 0.0);
    for (std::size_t ri = p; ri-- > 0;) {
        double s = b[ri];
        for (std::size_t c = ri + 1; c < p; ++c)
            s -= a[ri * p + c] * out[c];
        out[ri] = s / a[ri * p + ri];
    }
    return true;
}

}  // namespace

PiecewiseLinearFit fit_convex_lse(const std::vector<double>& knots,
                                  const std::vector<double>& y,
                                  const std::vector<double>& w,
                                  std::size_t max_iters, double tol) {
    const std::size_t n = knots.size();
    if (y.size() != n || w.size() != n)
        throw DimensionMismatchError("fit_convex_lse: knots, y, w sizes differ");
    if (n == 0) throw DimensionMismatchError("fit_convex_lse: empty input");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(knots[i])) throw NonFiniteInputError("knots", i);
        if (!std::isfinite(y[i])) throw NonFiniteInputError("y", i);
        if (!std::isfinite(w[i])) throw NonFiniteInputError("w", i);
        if (w[i] <= 0.0) throw NonPositiveWeightError(i);
        if (i + 1 < n && !(knots[i] < knots[i + 1]))
            throw DomainError(
                "fit_convex_lse: knots must be strictly increasing");
    }

    // Any sequence over <= 2 knots is convex, as is already-feasible input.
    if (n <= 2 || is_convex_sequence(knots, y))
        return PiecewiseLinearFit{knots, y};

    // Standardize for conditioning; the cone is invariant under affine maps
    // of the knots and affine maps of the values, so the projection can be
    // computed in standardized coordinates and mapped back exactly.
    double km = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        km += knots[i];
        ym += y[i];
    }
    km /= static_cast<double>(n);
    ym /= static_cast<double>(n);
    double kv = 0.0, yv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        kv += (knots[i] - km) * (knots[i] - km);
        yv += (y[i] - ym) * (y[i] - ym);
    }
    const double ks = std::sqrt(kv / static_cast<double>(n));
    const double ysd0 = std::sqrt(yv / static_cast<double>(n));
    const double ys = ysd0 > 0.0 ? ysd0 : 1.0;

    std::vector<double> k(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
        k[i] = (knots[i] - km) / ks;
        z[i] = (y[i] - ym) / ys;
    }

    // Static suffix sums over the standardized problem.  For a hinge at
    // interior knot j (basis  h_j(x) = max(0, x - k_j), j = 1..n-2) every
    // inner product reduces to suffix sums starting at j+1:
    //   <h_j, 1>   = S1[j+1] - k_j S0[j+1]
    //   <h_j, x>   = S2[j+1] - k_j S1[j+1]
    //   <h_j, h_l> = S2[l+1] - (k_j + k_l) S1[l+1] + k_j k_l S0[l+1], j <= l
    //   <h_j, z>   = T1[j+1] - k_j T0[j+1]
    std::vector<double> S0(n + 1, 0.0), S1(n + 1, 0.0), S2(n + 1, 0.0);
    std::vector<double> T0(n + 1, 0.0), T1(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        S0[i] = S0[i + 1] + w[i];
        S1[i] = S1[i + 1] + w[i] * k[i];
        S2[i] = S2[i + 1] + w[i] * k[i] * k[i];
        T0[i] = T0[i + 1] + w[i] * z[i];
        T1[i] = T1[i + 1] + w[i] * z[i] * k[i];
    }
    const double total_w = S0[0];

    std::vector<std::size_t> active;   // interior knot indices, sorted
    std::vector<double> coef;          // hinge coefficients, >= 0
    double a = 0.0, b = 0.0;           // free affine part
    std::vector<double> theta(n), resid(n);
    std::vector<double> r0(n + 1), r1(n + 1);  // residual suffix sums

    const auto rebuild_theta = [&] {
        // theta is piecewise linear: accumulate slope increments coef[j] at
        // each active hinge knot while scanning left to right.
        double slope = b;
        std::size_t next = 0;
        theta[0] = a + b * k[0];
        for (std::size_t i = 1; i < n; ++i) {
            while (next < active.size() && active[next] < i) {
                slope += coef[next];
                ++next;
            }
            theta[i] = theta[i - 1] + slope * (k[i] - k[i - 1]);
        }
        for (std::size_t i = 0; i < n; ++i) resid[i] = z[i] - theta[i];
        for (std::size_t i = n; i-- > 0;) {
            r0[i] = r0[i + 1] + w[i] * resid[i];
            r1[i] = r1[i + 1] + w[i] * resid[i] * k[i];
        }
    };
    r0[n] = r1[n] = 0.0;

    // Weighted LS on [1, x, active hinges] via normal equations.
    std::vector<double> gram, rhs, sol;
    const auto solve_subproblem = [&](bool& ok) {
        const std::size_t p = 2 + active.size();
        gram.assign(p * p, 0.0);
        rhs.assign(p, 0.0);
        gram[0] = S0[0];
        gram[1] = S1[0];
        gram[p] = S1[0];
        gram[p + 1] = S2[0];
        rhs[0] = T0[0];
        rhs[1] = T1[0];
        for (std::size_t c = 0; c < active.size(); ++c) {
            const std::size_t j = active[c];
            const double kj = k[j];
            const double h1 = S1[j + 1] - kj * S0[j + 1];
            const double hx = S2[j + 1] - kj * S1[j + 1];
            gram[0 * p + 2 + c] = h1;
            gram[(2 + c) * p + 0] = h1;
            gram[1 * p + 2 + c] = hx;
            gram[(2 + c) * p + 1] = hx;
            rhs[2 + c] = T1[j + 1] - kj * T0[j + 1];
            for (std::size_t c2 = c; c2 < active.size(); ++c2) {
                const std::size_t l = active[c2];
                const double kl = k[l];
                const double hh =
                    S2[l + 1] - (kj + kl) * S1[l + 1] + kj * kl * S0[l + 1];
                gram[(2 + c) * p + 2 + c2] = hh;
                gram[(2 + c2) * p + 2 + c] = hh;
            }
        }
        ok = solve_dense(gram, rhs, p, sol);
    };

    std::size_t solves = 0;
    double dual = 0.0;
    {
        // Start from the affine-only least-squares fit so the free part of
        // the cone is stationary before any hinge enters.
        bool ok = false;
        solve_subproblem(ok);
        if (!ok) throw SolverNotConvergedError(max_iters, dual);
        ++solves;
        a = sol[0];
        b = sol[1];
    }
    while (true) {
        rebuild_theta();

        // Dual feasibility: gradients of inactive hinges, normalized by the
        // total weight of the standardized problem.
        double best = 0.0;
        std::size_t best_j = n;
        std::size_t next = 0;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            while (next < active.size() && active[next] < j) ++next;
            if (next < active.size() && active[next] == j) continue;
            const double g = r1[j + 1] - k[j] * r0[j + 1];
            if (g > best) {
                best = g;
                best_j = j;
            }
        }
        dual = best / std::max(1.0, total_w);
        if (best_j == n || dual <= tol) break;

        // Bring the most violated hinge into the active set.
        const auto pos = std::lower_bound(active.begin(), active.end(), best_j);
        coef.insert(coef.begin() + (pos - active.begin()), 0.0);
        active.insert(pos, best_j);

        // Inner Lawson-Hanson loop: step toward the unconstrained solution
        // on the active set, dropping hinges whose coefficients hit zero.
        while (true) {
            if (++solves > max_iters)
                throw SolverNotConvergedError(max_iters, dual);
            bool ok = false;
            solve_subproblem(ok);
            if (!ok) throw SolverNotConvergedError(max_iters, dual);
            // Tiny negatives are clamped rather than stepped on; a strict
            // zero test here could cycle on the entering hinge.
            bool feasible = true;
            for (std::size_t c = 0; c < active.size(); ++c)
                if (sol[2 + c] <= -1e-12) feasible = false;
            if (feasible) {
                a = sol[0];
                b = sol[1];
                coef.assign(sol.begin() + 2, sol.end());
                for (double& cj : coef) cj = std::max(cj, 0.0);
                break;
            }
            double step = 1.0;
            for (std::size_t c = 0; c < active.size(); ++c) {
                const double cj = coef[c];
                const double nj = sol[2 + c];
                if (nj <= 0.0 && cj > nj)
                    step = std::min(step, cj / (cj - nj));
            }
            a += step * (sol[0] - a);
            b += step * (sol[1] - b);
            for (std::size_t c = 0; c < active.size(); ++c)
                coef[c] += step * (sol[2 + c] - coef[c]);
            for (std::size_t c = active.size(); c-- > 0;) {
                if (coef[c] <= 1e-14) {
                    active.erase(active.begin() +
                                 static_cast<std::ptrdiff_t>(c));
                    coef.erase(coef.begin() + static_cast<std::ptrdiff_t>(c));
                }
            }
        }
    }

    PiecewiseLinearFit fit;
    fit.knots = knots;
    fit.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        fit.values[i] = ym + ys * theta[i];
    return fit;
}

double evaluate_pwl(const PiecewiseLinearFit& fit, double q) {
    const std::vector<double>& k = fit.knots;
    const std::vector<double>& v = fit.values;
    if (k.empty()) throw DimensionMismatchError("evaluate_pwl: empty fit");
    if (k.size() == 1) return v.front();
    if (q <= k.front()) {
        const double s = (v[1] - v[0]) / (k[1] - k[0]);
        return v[0] + s * (q - k[0]);
    }
    if (q >= k.back()) {
        const std::size_t m = k.size();
        const double s = (v[m - 1] - v[m - 2]) / (k[m - 1] - k[m - 2]);
        return v[m - 1] + s * (q - k[m - 1]);
    }
    const auto it = std::upper_bound(k.begin(), k.end(), q);
    const std::size_t i = static_cast<std::size_t>(it - k.begin()) - 1;
    if (k[i] == q) return v[i];
    const double t = (q - k[i]) / (k[i + 1] - k[i]);
    return v[i] + t * (v[i + 1] - v[i]);
}

}  // namespace shapereg
