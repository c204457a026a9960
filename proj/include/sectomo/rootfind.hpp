#pragma once

#include <cmath>
#include <functional>

#include "sectomo/errors.hpp"

namespace sectomo {

// Bisection on a bracketing interval [a, b] with f(a) * f(b) <= 0.
template <class F>
double bisect(F&& f, double a, double b, double xtol = 1e-12, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw NoRoot("bisect: no sign change on bracket");
    for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if (fa * fm < 0.0) { b = m; fb = fm; } else { a = m; fa = fm; }
    }
    return 0.5 * (a + b);
}

// Bisection to localize, then secant polishing. Falls back to the bisection
// result if the secant iteration leaves the bracket or stalls.
template <class F>
double bisect_secant(F&& f, double a, double b, double xtol = 1e-10) {
    double x = bisect(f, a, b, 1e3 * xtol);
    double x0 = x - 1e3 * xtol, x1 = x + 1e3 * xtol;
    double f0 = f(x0), f1 = f(x1);
    for (int it = 0; it < 60; ++it) {
        if (f1 == f0) break;
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!(x2 >= a && x2 <= b)) break;
        x0 = x1; f0 = f1;
        x1 = x2; f1 = f(x1);
        if (std::fabs(x1 - x0) < xtol) return x1;
    }
    return std::fabs(f1) < std::fabs(f(x)) ? x1 : x;
}

} // namespace sectomo
