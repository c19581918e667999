#pragma once

#include <cmath>
#include <functional>

#include "schottky/common.hpp"

namespace schottky {

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // accumulated local error estimates
};

namespace detail {

template <class F>
void adapt_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth, QuadResult& out) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        out.value += left + right + delta / 15.0;
        out.error += std::abs(delta) / 15.0;
        return;
    }
    adapt_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
    adapt_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

} // namespace detail

// Adaptive Simpson on [a, b]; `tol` is the absolute error target.
template <class F>
QuadResult integrate(const F& f, double a, double b, double tol = 1e-12, int max_depth = 40) {
    QuadResult out;
    if (a == b) return out;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    detail::adapt_simpson(f, a, b, fa, fm, fb, whole, tol, max_depth, out);
    return out;
}

} // namespace schottky
