// Scalar numerics: principal-branch Lambert W, bracketed root finding and
// grid-then-refine interval maximization.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace attcc {

struct SearchOptions {
    int grid_points = 2000;
    double refine_tol = 1e-10;  // relative interval width
    int max_iter = 200;
};

// Principal branch W0: returns w >= -1 with w e^w = x, for x >= -1/e
// (1e-15 slack at the branch point). Throws std::domain_error below that.
double lambert_w0(double x);

// Deterministic bisection on a bracketing interval. Requires f(lo) f(hi) <= 0.
// The returned value always lies inside [lo, hi].
template <class F>
double find_root(F&& f, double lo, double hi, double tol) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    double fhi = f(hi);
    if (fhi == 0.0) return hi;
    if (!(lo < hi) || (flo < 0.0) == (fhi < 0.0)) {
        throw std::invalid_argument("find_root: endpoints do not bracket a sign change");
    }
    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        mid = 0.5 * (lo + hi);
        if (hi - lo <= tol * std::max(1.0, std::fabs(mid))) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return mid;
}

struct MaximizeResult {
    double arg;
    double value;
};

// Uniform grid scan followed by golden-section refinement around the best
// grid cell. The result is never below the best raw grid value; exact ties
// resolve to the smallest argument.
template <class F>
MaximizeResult maximize_on_interval(F&& f, double lo, double hi,
                                    const SearchOptions& opts = {}) {
    if (!(lo < hi)) return {lo, f(lo)};
    const int n = std::max(3, opts.grid_points);
    double best_x = lo;
    double best_v = -std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < n; ++i) {
        const double x = (i == n - 1) ? hi : lo + (hi - lo) * i / (n - 1);
        const double v = f(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
            best_i = i;
        }
    }

    double a = (best_i == 0) ? lo : lo + (hi - lo) * (best_i - 1) / (n - 1);
    double b = (best_i >= n - 2) ? hi : lo + (hi - lo) * (best_i + 1) / (n - 1);
    const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = b - invphi * (b - a);
    double c2 = a + invphi * (b - a);
    double v1 = f(c1);
    double v2 = f(c2);
    for (int it = 0;
         it < opts.max_iter && (b - a) > opts.refine_tol * std::max(1.0, std::fabs(b));
         ++it) {
        if (v1 > v2) {
            b = c2;
            c2 = c1;
            v2 = v1;
            c1 = b - invphi * (b - a);
            v1 = f(c1);
        } else {
            a = c1;
            c1 = c2;
            v1 = v2;
            c2 = a + invphi * (b - a);
            v2 = f(c2);
        }
    }
    // Strict improvement only, so flat regions keep the smallest grid argmax.
    if (v1 > best_v) {
        best_v = v1;
        best_x = c1;
    }
    if (v2 > best_v) {
        best_v = v2;
        best_x = c2;
    }
    return {best_x, best_v};
}

}  // namespace attcc
