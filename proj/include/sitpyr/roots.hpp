#pragma once

#include <cmath>
#include <cstdlib>

#include "sitpyr/errors.hpp"

namespace sitpyr {

struct RootResult {
    double x = 0.0;
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Root of f on a bracketing interval [lo, hi] (f(lo) and f(hi) of opposite
/// sign, either may be zero). Secant steps while they behave, bisection
/// otherwise, so progress is never worse than halving.
template <class F>
RootResult find_root(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
    RootResult r;
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return {lo, 0.0, 0, true};
    if (fhi == 0.0) return {hi, 0.0, 0, true};
    if ((flo > 0.0) == (fhi > 0.0))
        throw numerical_error("find_root: interval does not bracket a sign change", lo);

    double a = lo, b = hi, fa = flo, fb = fhi;
    for (int it = 0; it < max_iter; ++it) {
        double mid = 0.5 * (a + b);
        double x = mid;
        // Alternating with plain bisection keeps the halving guarantee.
        if (it % 2 == 0 && fb != fa) {
            double s = b - fb * (b - a) / (fb - fa);
            if (s > std::min(a, b) && s < std::max(a, b)) x = s;
        }
        double width = std::abs(b - a);
        if (std::abs(x - mid) > 0.45 * width) x = mid;
        double fx = f(x);
        r.iterations = it + 1;
        if (fx == 0.0 || width <= xtol) {
            r.x = x;
            r.f = fx;
            r.converged = true;
            return r;
        }
        if ((fx > 0.0) == (fa > 0.0)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    r.x = 0.5 * (a + b);
    r.f = f(r.x);
    r.converged = std::abs(b - a) <= 4.0 * xtol;
    return r;
}

} // namespace sitpyr
