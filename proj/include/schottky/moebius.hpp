#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <utility>

#include "schottky/common.hpp"

namespace schottky {

enum class Model { half_plane, disk };

inline const char* model_name(Model m) { return m == Model::half_plane ? "half_plane" : "disk"; }

// Real 2x2 matrix of determinant one acting on the upper half-plane by
// z -> (az+b)/(cz+d). Lifts are normalized to det 1 and, for hyperbolic
// elements, to positive trace.
struct MoebiusMap {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static MoebiusMap identity() { return {}; }

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }

    bool is_hyperbolic() const { return std::abs(trace()) > 2.0; }

    MoebiusMap inverse() const { return {d, -b, -c, a}; }

    cplx apply(cplx z) const { return (a * z + b) / (c * z + d); }

    // action on the boundary R u {inf}
    double apply_boundary(double x) const {
        if (std::isinf(x)) return c == 0.0 ? x : a / c;
        const double den = c * x + d;
        if (den == 0.0) return std::numeric_limits<double>::infinity();
        return (a * x + b) / den;
    }

    double deriv_boundary(double x) const {
        const double den = c * x + d;
        return 1.0 / (den * den);
    }

    // Scale to det 1 (input must have det > 0) and flip sign to trace > 0
    // when hyperbolic.
    void normalize() {
        const double dt = det();
        if (!(dt > 0.0)) throw validation_error("MoebiusMap: determinant must be positive");
        const double s = std::sqrt(dt);
        a /= s; b /= s; c /= s; d /= s;
        if (std::abs(trace()) > 2.0 && trace() < 0.0) { a = -a; b = -b; c = -c; d = -d; }
    }

    bool operator==(const MoebiusMap&) const = default;
};

// Products accumulate in extended precision: entries of an n-letter word grow
// like exp(l*n/2), and doubles lose the trace for long words.
inline MoebiusMap compose(const MoebiusMap& f, const MoebiusMap& g) {
    const long double a = (long double)f.a * g.a + (long double)f.b * g.c;
    const long double b = (long double)f.a * g.b + (long double)f.b * g.d;
    const long double c = (long double)f.c * g.a + (long double)f.d * g.c;
    const long double d = (long double)f.c * g.b + (long double)f.d * g.d;
    const long double dt = a * d - b * c;
    const long double s = sqrtl(dt);
    MoebiusMap out{double(a / s), double(b / s), double(c / s), double(d / s)};
    if (std::abs(out.trace()) > 2.0 && out.trace() < 0.0) {
        out.a = -out.a; out.b = -out.b; out.c = -out.c; out.d = -out.d;
    }
    return out;
}

// Product of a letter sequence. Runs entirely in extended precision; words
// past ~30 letters would otherwise drift at the renormalization steps.
inline MoebiusMap word_product(std::span<const MoebiusMap> factors) {
    long double a = 1, b = 0, c = 0, d = 1;
    for (const auto& m : factors) {
        const long double na = a * m.a + b * m.c;
        const long double nb = a * m.b + b * m.d;
        const long double nc = c * m.a + d * m.c;
        const long double nd = c * m.b + d * m.d;
        a = na; b = nb; c = nc; d = nd;
    }
    const long double s = sqrtl(a * d - b * c);
    MoebiusMap out{double(a / s), double(b / s), double(c / s), double(d / s)};
    if (std::abs(out.trace()) > 2.0 && out.trace() < 0.0) {
        out.a = -out.a; out.b = -out.b; out.c = -out.c; out.d = -out.d;
    }
    return out;
}

// Translation length of a hyperbolic element, l = 2 acosh(|tr|/2).
inline double translation_length(const MoebiusMap& g) {
    const double t = std::abs(g.trace()) / 2.0;
    if (!(t > 1.0))
        throw route_error("translation_length: element is not hyperbolic (|trace| <= 2)");
    return 2.0 * std::acosh(t);
}

// acosh(|tr|/2) straight from the long-double trace of a letter sequence;
// avoids the double rounding of word_product for very long words.
inline double word_translation_length(std::span<const MoebiusMap> factors) {
    long double a = 1, b = 0, c = 0, d = 1;
    for (const auto& m : factors) {
        const long double na = a * m.a + b * m.c;
        const long double nb = a * m.b + b * m.d;
        const long double nc = c * m.a + d * m.c;
        const long double nd = c * m.b + d * m.d;
        a = na; b = nb; c = nc; d = nd;
    }
    const long double t = fabsl(a + d) / (2.0L * sqrtl(a * d - b * c));
    if (!(t > 1.0L))
        throw route_error("word_translation_length: word is not hyperbolic");
    return double(2.0L * acoshl(t));
}

// Fixed points on the boundary; first = attracting, second = repelling.
inline std::array<double, 2> axis_endpoints(const MoebiusMap& g) {
    if (!g.is_hyperbolic()) throw route_error("axis_endpoints: element is not hyperbolic");
    if (g.c == 0.0) {
        // fixes inf; finite fixed point at b/(d-a)
        const double p = g.b / (g.d - g.a);
        const double inf = std::numeric_limits<double>::infinity();
        return std::abs(g.a) > std::abs(g.d) ? std::array<double, 2>{inf, p}
                                             : std::array<double, 2>{p, inf};
    }
    const double disc = std::sqrt(g.trace() * g.trace() - 4.0);
    const double x1 = (g.a - g.d + disc) / (2.0 * g.c);
    const double x2 = (g.a - g.d - disc) / (2.0 * g.c);
    // attracting <=> |g'| < 1 <=> |c x + d| > 1
    if (std::abs(g.c * x1 + g.d) > 1.0) return {x1, x2};
    return {x2, x1};
}

inline double dist_half_plane(cplx z, cplx w) {
    const double q = 1.0 + std::norm(z - w) / (2.0 * z.imag() * w.imag());
    return std::acosh(std::max(1.0, q));
}

inline double dist_disk(cplx z, cplx w) {
    const double q =
        1.0 + 2.0 * std::norm(z - w) / ((1.0 - std::norm(z)) * (1.0 - std::norm(w)));
    return std::acosh(std::max(1.0, q));
}

// Cayley transform C(z) = (z - i)/(z + i), an isometry H -> D with C(i) = 0.
inline cplx half_plane_to_disk(cplx z) { return (z - cplx(0, 1)) / (z + cplx(0, 1)); }
inline cplx disk_to_half_plane(cplx w) { return cplx(0, 1) * (1.0 + w) / (1.0 - w); }

inline double hyperbolic_distance(Model m, cplx z, cplx w) {
    return m == Model::half_plane ? dist_half_plane(z, w) : dist_disk(z, w);
}

// Base point used for Poincare series and similar: the disk center, i.e. i in
// the half-plane.
inline cplx model_center(Model m) { return m == Model::half_plane ? cplx(0, 1) : cplx(0, 0); }

// Disk-model isometries are complex matrices [[p, q], [conj q, conj p]] with
// |p|^2 - |q|^2 = 1. Conjugating by the Cayley matrix K = [[1, -i], [1, i]]
// gives the real SL(2,R) form
//   a = Re p + Re q,  b = Im p - Im q,  c = -Im p - Im q,  d = Re p - Re q.
inline MoebiusMap disk_matrix_to_half_plane(cplx p, cplx q) {
    MoebiusMap g{p.real() + q.real(), p.imag() - q.imag(), -p.imag() - q.imag(),
                 p.real() - q.real()};
    if (std::abs(g.det() - 1.0) > 1e-9)
        throw validation_error("disk-model matrix does not satisfy |p|^2 - |q|^2 = 1");
    g.normalize();
    return g;
}

inline std::pair<cplx, cplx> half_plane_to_disk_matrix(const MoebiusMap& g) {
    const cplx p(0.5 * (g.a + g.d), 0.5 * (g.b - g.c));
    const cplx q(0.5 * (g.a - g.d), -0.5 * (g.b + g.c));
    return {p, q};
}

// Accepts a raw complex 2x2 (row major) that preserves the unit disk, scales
// it to determinant one, and converts.
inline MoebiusMap disk_matrix_to_half_plane(const std::array<cplx, 4>& m) {
    const cplx dt = m[0] * m[3] - m[1] * m[2];
    const cplx s = std::sqrt(dt);
    const cplx p = m[0] / s, q = m[1] / s;
    const double scale = std::abs(p) + std::abs(q);
    if (std::abs(m[2] / s - std::conj(q)) > 1e-8 * scale ||
        std::abs(m[3] / s - std::conj(p)) > 1e-8 * scale)
        throw validation_error("disk-model matrix is not of the form [[p,q],[conj q, conj p]]");
    return disk_matrix_to_half_plane(p, q);
}

} // namespace schottky
