#pragma once

#include <cmath>

namespace sectomo {

namespace detail {

template <class F>
double adsimp_rec(F& f, double a, double b, double fa, double fm, double fb,
                  double whole, double tol, int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth >= max_depth || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adsimp_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth)
         + adsimp_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

} // namespace detail

// Adaptive Simpson with absolute tolerance.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-10, int max_depth = 40) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adsimp_rec(f, a, b, fa, fm, fb, whole, tol, 0, max_depth);
}

} // namespace sectomo
