#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "schottky/surface.hpp"

namespace schottky {

struct DimensionEstimate {
    double delta = 0.0;
    enum class Method { poincare_exponent, refinement_eigenvalue } method =
        Method::refinement_eigenvalue;
    double uncertainty = 0.0;
    std::vector<double> per_depth; // refinement: delta per depth; poincare: growth at grid
    std::string note;
};

namespace detail {

// Transition data for the refined disk cover at one depth: for every reduced
// word u of length depth+1, the dense indices of shift(u) and drop_last(u)
// among depth-length words, and log of the radius contraction r(u)/r(parent).
// Words are indexed by (first letter, then offsets among the 2r-1 admissible
// continuations), so drop_last(u) = u / (2r-1).
struct RefinementTransitions {
    int depth = 0;
    std::size_t states = 0;            // number of depth-length words
    std::vector<std::uint32_t> tail;   // per leaf: index of shift(u)
    std::vector<double> log_ratio;     // per leaf: log(r(u) / r(drop_last(u)))

    RefinementTransitions(const SchottkySurface& s, int d) : depth(d) {
        const int n = 2 * s.rank();
        const int branch = n - 1;
        states = static_cast<std::size_t>(n);
        for (int k = 1; k < d; ++k) states *= branch;
        const std::size_t leaves = states * branch;
        tail.assign(leaves, 0);
        log_ratio.assign(leaves, 0.0);

        struct Frame {
            MoebiusMap prefix; // product of all letters except the last
            double radius;
        };
        std::vector<Frame> stack(d + 2);
        Word w;
        std::vector<std::uint32_t> tail_digits(d + 2, 0);

        // DFS over reduced words of length depth+1. The interval of w is
        // prefix(D_last); descending appends the last letter to the prefix.
        auto rec = [&](auto&& self, std::size_t idx) -> void {
            const int len = static_cast<int>(w.size());
            if (len == d + 1) {
                tail[idx] = tail_index(s, w);
                log_ratio[idx] = std::log(stack[len].radius / stack[len - 1].radius);
                return;
            }
            int off = 0;
            for (int code = 0; code < n; ++code) {
                const Letter l = code_letter(code);
                if (!w.empty() && l == -w.back()) continue;
                const MoebiusMap& pre = stack[len].prefix;
                const auto& dl = s.letter_disk(l);
                const double e0 = pre.apply_boundary(dl.left());
                const double e1 = pre.apply_boundary(dl.right());
                stack[len + 1].prefix =
                    w.empty() ? s.letter_map(l) : compose(pre, s.letter_map(l));
                stack[len + 1].radius = 0.5 * std::abs(e1 - e0);
                w.push_back(l);
                self(self, w.size() == 1 ? static_cast<std::size_t>(code)
                                         : idx * branch + off);
                w.pop_back();
                if (!w.empty()) ++off; else off = 0;
            }
        };
        stack[0] = {MoebiusMap::identity(), 0.0};
        rec(rec, 0);
    }

    static std::size_t tail_index(const SchottkySurface& s, const Word& w) {
        const int branch = 2 * s.rank() - 1;
        std::size_t idx = letter_code(w[1]);
        for (std::size_t k = 2; k < w.size(); ++k) {
            int off = 0;
            for (int code = 0; code < letter_code(w[k]); ++code)
                if (code_letter(code) != -w[k - 1]) ++off;
            idx = idx * branch + off;
        }
        return idx;
    }

    // Perron eigenvalue of the transition matrix with weights ratio^delta.
    double eigenvalue(double delta) const {
        std::vector<double> weight(log_ratio.size());
        for (std::size_t i = 0; i < weight.size(); ++i)
            weight[i] = std::exp(delta * log_ratio[i]);
        std::vector<double> x(states, 1.0), nx(states);
        const std::size_t branch = log_ratio.size() / states;
        double lambda = 0.0;
        for (int it = 0; it < 400; ++it) {
            std::fill(nx.begin(), nx.end(), 0.0);
            for (std::size_t u = 0; u < weight.size(); ++u)
                nx[tail[u]] += weight[u] * x[u / branch];
            double s = 0.0;
            for (double v : nx) s += v;
            const double nl = s / states;
            for (std::size_t i = 0; i < states; ++i) x[i] = nx[i] / nl;
            if (it > 4 && std::abs(std::log(nl / lambda)) < 1e-13) { lambda = nl; break; }
            lambda = nl;
        }
        return lambda;
    }

    // delta with eigenvalue 1, by bisection (the eigenvalue is strictly
    // decreasing in delta).
    double solve_delta(double tol) const {
        double lo = 0.0, hi = 1.0;
        if (eigenvalue(0.0) <= 1.0) return 0.0;
        while (eigenvalue(hi) > 1.0 && hi < 8.0) hi *= 2.0;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            (eigenvalue(mid) > 1.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
};

} // namespace detail

// Dimension of the limit set from the disk-refinement eigenvalue method:
// delta makes the radius-ratio^delta transition matrix have Perron
// eigenvalue one; extrapolated geometrically across depths.
inline DimensionEstimate delta_refinement(const SchottkySurface& surf, int depth = 12,
                                          double bisect_tol = 1e-6) {
    if (surf.rank() < 2)
        throw route_error("delta_refinement: needs rank >= 2 (use delta_poincare)");
    if (surf.min_wall_gap() <= 0)
        throw validation_error("delta_refinement: surface failed disk disjointness");
    depth = std::max(depth, 3);
    // cap the state count; deep tables on high-rank surfaces are pointless
    while (depth > 3) {
        double states = 2.0 * surf.rank();
        for (int k = 1; k < depth; ++k) states *= 2 * surf.rank() - 1;
        if (states <= 4e6) break;
        --depth;
    }

    DimensionEstimate est;
    est.method = DimensionEstimate::Method::refinement_eigenvalue;
    std::vector<double> deltas;
    for (int d = std::max(2, depth - 2); d <= depth; ++d) {
        detail::RefinementTransitions table(surf, d);
        deltas.push_back(table.solve_delta(bisect_tol));
    }
    est.per_depth = deltas;
    const std::size_t n = deltas.size();
    double value = deltas.back();
    if (n >= 3) {
        // Aitken extrapolation of the geometric tail
        const double d0 = deltas[n - 3], d1 = deltas[n - 2], d2 = deltas[n - 1];
        const double den = (d2 - d1) - (d1 - d0);
        if (std::abs(den) > 1e-15) value = d2 - sqr(d2 - d1) / den;
    }
    est.delta = std::clamp(value, 0.0, 1.0);
    est.uncertainty =
        std::max({2.0 * std::abs(deltas.back() - value), bisect_tol, 1e-9});
    if (n >= 2)
        est.uncertainty =
            std::max(est.uncertainty, 0.5 * std::abs(deltas[n - 1] - deltas[n - 2]));
    return est;
}

// quick low-depth variant for budget gates
inline double delta_refinement_quick(const SchottkySurface& surf, int depth) {
    detail::RefinementTransitions table(surf, depth);
    return table.solve_delta(1e-4);
}

namespace detail {

// Orbit distances d(m, w m) for all reduced words up to a cutoff length,
// grouped by word length; evaluated lazily into Poincare partial sums.
struct PoincareOrbit {
    std::vector<std::vector<double>> level_dist;

    PoincareOrbit(const SchottkySurface& s, int max_len, cplx base) {
        level_dist.assign(max_len + 1, {});
        double states = 2.0 * s.rank();
        for (int k = 1; k < max_len; ++k) states *= 2 * s.rank() - 1;
        if (states > 4e7)
            throw resource_error("delta_poincare: word cutoff exceeds the orbit budget");
        for (int k = 1; k <= max_len; ++k)
            level_dist[k].reserve(static_cast<std::size_t>(
                std::min(states, 2.0 * s.rank() * std::pow(2 * s.rank() - 1.0, k - 1))));
        Word w;
        std::vector<MoebiusMap> stack(max_len + 1);
        stack[0] = MoebiusMap::identity();
        auto rec = [&](auto&& self) -> void {
            const int len = static_cast<int>(w.size());
            if (len > 0)
                level_dist[len].push_back(
                    dist_half_plane(base, stack[len].apply(base)));
            if (len == max_len) return;
            for (int code = 0; code < 2 * s.rank(); ++code) {
                const Letter l = code_letter(code);
                if (!w.empty() && l == -w.back()) continue;
                stack[len + 1] = compose(stack[len], s.letter_map(l));
                w.push_back(l);
                self(self);
                w.pop_back();
            }
        };
        rec(rec);
    }

    // growth rate of the level sums at exponent s: log of the ratio of the
    // last two levels (power-iteration estimate of the pressure).
    double growth(double s) const {
        const auto level_sum = [&](const std::vector<double>& v) {
            double acc = 0.0;
            for (double d : v) acc += std::exp(-s * d);
            return acc;
        };
        const std::size_t n = level_dist.size() - 1;
        const double a = level_sum(level_dist[n - 1]);
        const double b = level_sum(level_dist[n]);
        if (!(a > 0.0) || !(b > 0.0))
            throw numeric_error("delta_poincare: level sums underflowed");
        return std::log(b / a);
    }

    std::vector<double> partial_sums(double s) const {
        std::vector<double> out;
        double acc = 1.0; // identity term
        for (std::size_t k = 1; k < level_dist.size(); ++k) {
            for (double d : level_dist[k]) acc += std::exp(-s * d);
            out.push_back(acc);
        }
        return out;
    }
};

} // namespace detail

// Exponent of convergence of the Poincare series: the abscissa where the
// level-sum growth rate changes sign, bisected inside the bracketing grid
// interval. The base point is immaterial (checked against a second one).
inline DimensionEstimate delta_poincare(const SchottkySurface& surf, int word_cutoff,
                                        std::vector<double> s_grid) {
    if (word_cutoff < 8) throw error("delta_poincare: word_cutoff must be >= 8");
    if (s_grid.size() < 2) throw error("delta_poincare: need a grid of at least 2 points");
    std::sort(s_grid.begin(), s_grid.end());
    if (s_grid.front() < 0.0) throw error("delta_poincare: grid must be nonnegative");

    const detail::PoincareOrbit orbit(surf, word_cutoff, model_center(Model::half_plane));

    DimensionEstimate est;
    est.method = DimensionEstimate::Method::poincare_exponent;
    std::vector<double> rates;
    rates.reserve(s_grid.size());
    for (double s : s_grid) rates.push_back(orbit.growth(s));
    est.per_depth = rates;

    // locate the sign change
    std::size_t bracket = s_grid.size();
    for (std::size_t i = 0; i + 1 < s_grid.size(); ++i)
        if (rates[i] > 0.0 && rates[i + 1] <= 0.0) { bracket = i; break; }

    if (bracket == s_grid.size()) {
        if (rates.front() <= 0.0) {
            // series converges on the whole grid: transition below the grid
            est.delta = s_grid.front();
            est.uncertainty = std::max(s_grid.front(), s_grid[1] - s_grid[0]);
            est.note = "growth negative on entire grid; delta at or below grid start";
            if (s_grid.front() == 0.0) { est.delta = 0.0; est.uncertainty = s_grid[1]; }
            return est;
        }
        std::string detail = "growth rates:";
        for (std::size_t i = 0; i < s_grid.size(); ++i)
            detail += " g(" + fmt17(s_grid[i]) + ")=" + fmt17(rates[i]);
        throw numeric_error("delta_poincare: grid does not bracket the transition; " + detail);
    }

    double lo = s_grid[bracket], hi = s_grid[bracket + 1];
    for (int it = 0; it < 60 && hi - lo > 1e-8; ++it) {
        const double mid = 0.5 * (lo + hi);
        (orbit.growth(mid) > 0.0 ? lo : hi) = mid;
    }
    est.delta = 0.5 * (lo + hi);

    // estimator error: compare against the transition of the shorter orbit
    // and against a second base point
    const detail::PoincareOrbit orbit2(surf, word_cutoff - 1,
                                       model_center(Model::half_plane));
    double lo2 = s_grid[bracket], hi2 = s_grid[bracket + 1];
    for (int it = 0; it < 60 && hi2 - lo2 > 1e-8; ++it) {
        const double mid = 0.5 * (lo2 + hi2);
        (orbit2.growth(mid) > 0.0 ? lo2 : hi2) = mid;
    }
    const detail::PoincareOrbit orbit3(surf, word_cutoff - 1, cplx(0.25, 1.7));
    double lo3 = s_grid[bracket], hi3 = s_grid[bracket + 1];
    for (int it = 0; it < 60 && hi3 - lo3 > 1e-8; ++it) {
        const double mid = 0.5 * (lo3 + hi3);
        (orbit3.growth(mid) > 0.0 ? lo3 : hi3) = mid;
    }
    est.uncertainty = std::max({std::abs(est.delta - 0.5 * (lo2 + hi2)),
                                std::abs(0.5 * (lo3 + hi3) - 0.5 * (lo2 + hi2)), 1e-7});
    est.delta = std::clamp(est.delta, 0.0, 1.0);
    return est;
}

// partial sums of the Poincare series at exponent s, cumulative per word length
inline std::vector<double> poincare_partial_sums(const SchottkySurface& surf, double s,
                                                 int word_cutoff) {
    const detail::PoincareOrbit orbit(surf, word_cutoff, model_center(Model::half_plane));
    return orbit.partial_sums(s);
}

} // namespace schottky
