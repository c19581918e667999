#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "schottky/surface.hpp"
#include "schottky/words.hpp"

namespace schottky {

enum class Orientation { oriented, unoriented };

struct PrimitiveGeodesic {
    Word word;            // canonical class representative
    int word_length = 0;
    double trace = 0.0;   // positive-trace lift
    double length = 0.0;
    int multiplicity = 1; // oriented classes this entry stands for
};

struct LengthSpectrum {
    double cutoff = 0.0;
    Orientation mode = Orientation::unoriented;
    int word_length_bound = 0; // no class with length <= cutoff has more letters
    std::vector<PrimitiveGeodesic> entries; // sorted by (length, word)

    // counting function over oriented classes, N(R) = #{l(gamma) <= R}
    double count_oriented(double R) const {
        double n = 0;
        for (const auto& e : entries) {
            if (e.length > R) break;
            n += e.multiplicity;
        }
        return n;
    }
    double min_length() const {
        return entries.empty() ? std::numeric_limits<double>::infinity()
                               : entries.front().length;
    }
};

struct EnumerationBudget {
    std::size_t max_entries = 5'000'000;
    std::size_t max_nodes = 200'000'000;
};

namespace detail {

struct Enumerator {
    const SchottkySurface& surf;
    double cutoff;
    Orientation mode;
    const EnumerationBudget& budget;
    double gmin;
    int max_len;
    std::size_t nodes = 0;
    Word w;
    std::vector<MoebiusMap> letter_maps; // by letter_code
    std::vector<PrimitiveGeodesic> out;

    Enumerator(const SchottkySurface& s, double L, Orientation m, const EnumerationBudget& b)
        : surf(s), cutoff(L), mode(m), budget(b), gmin(s.min_wall_gap()) {
        max_len = static_cast<int>(std::floor(cutoff / gmin)) + 1;
        for (int code = 0; code < 2 * s.rank(); ++code)
            letter_maps.push_back(s.letter_map(code_letter(code)));
    }

    void emit_if_class_rep() {
        if (w.front() == -w.back() && w.size() > 1) return; // not cyclically reduced
        if (!is_primitive(w)) return;
        Word canon = min_rotation(w);
        if (canon != w) return; // one representative per cycle
        int mult = 1;
        if (mode == Orientation::unoriented) {
            Word inv = min_rotation(inverse_word(w));
            if (lex_less(inv, w)) return; // inverse class is the representative
            mult = (inv == w) ? 1 : 2;
        }
        std::vector<MoebiusMap> f;
        f.reserve(w.size());
        for (Letter l : w) f.push_back(letter_maps[letter_code(l)]);
        const MoebiusMap m = word_product(f);
        const double tr = std::abs(m.trace());
        if (!(tr > 2.0)) throw numeric_error("enumerate: reduced word is not hyperbolic");
        const double len = 2.0 * std::acosh(tr / 2.0);
        if (len <= cutoff)
            out.push_back({w, static_cast<int>(w.size()), tr, len, mult});
    }

    // DFS over reduced words; `gap_sum` accumulates the consecutive wall
    // distances, a lower bound for the length of any completion.
    void dfs(double gap_sum) {
        if (++nodes > budget.max_nodes)
            throw resource_error("enumerate: node budget exceeded");
        if (!w.empty()) {
            emit_if_class_rep();
            if (out.size() > budget.max_entries)
                throw resource_error("enumerate: entry budget exceeded");
        }
        if (static_cast<int>(w.size()) >= max_len) return;
        const Letter last = w.empty() ? 0 : w.back();
        for (int code = 0; code < 2 * surf.rank(); ++code) {
            const Letter l = code_letter(code);
            if (!w.empty() && l == -last) continue;
            const double step = w.empty() ? 0.0
                                          : surf.wall_gap_between(static_cast<Letter>(-last), l);
            if (gap_sum + step + gmin > cutoff) continue; // cannot close below cutoff
            w.push_back(l);
            dfs(gap_sum + step);
            w.pop_back();
        }
    }
};

} // namespace detail

// crude dimension guess used only for the pre-enumeration budget gate
double delta_refinement_quick(const SchottkySurface& s, int depth);

// Every primitive class with length <= L, exactly once under the chosen
// orientation convention.
inline LengthSpectrum enumerate_geodesics(const SchottkySurface& surf, double L,
                                          Orientation mode = Orientation::unoriented,
                                          const EnumerationBudget& budget = {}) {
    if (!(L > 0)) throw error("enumerate_geodesics: cutoff must be positive");
    if (surf.min_wall_gap() <= 0)
        throw validation_error("enumerate_geodesics: surface failed disk disjointness");

    if (surf.rank() >= 2) {
        const double delta_hat = delta_refinement_quick(surf, 5);
        const double predicted = std::exp(delta_hat * L);
        if (predicted > 2.0 * static_cast<double>(budget.max_entries))
            throw resource_error("enumerate_geodesics: predicted class count " +
                                 fmt17(predicted) + " exceeds budget");
    }

    detail::Enumerator e(surf, L, mode, budget);
    e.dfs(0.0);
    std::sort(e.out.begin(), e.out.end(),
              [](const PrimitiveGeodesic& x, const PrimitiveGeodesic& y) {
                  if (x.length != y.length) return x.length < y.length;
                  return lex_less(x.word, y.word);
              });
    LengthSpectrum spec;
    spec.cutoff = L;
    spec.mode = mode;
    spec.word_length_bound = e.max_len;
    spec.entries = std::move(e.out);
    return spec;
}

// Brute-force oracle: every class with at most `max_word_len` letters, by
// exhausting reduced words and deduplicating cyclic rotations (and inverses).
inline std::set<Word> enumerate_exhaustive_words(const SchottkySurface& surf, int max_word_len,
                                                 Orientation mode) {
    std::set<Word> classes;
    Word w;
    auto rec = [&](auto&& self) -> void {
        if (!w.empty() && (w.size() == 1 || w.front() != -w.back()) && is_primitive(w))
            classes.insert(canonical_cyclic(w, mode == Orientation::unoriented));
        if (static_cast<int>(w.size()) >= max_word_len) return;
        for (int code = 0; code < 2 * surf.rank(); ++code) {
            const Letter l = code_letter(code);
            if (!w.empty() && l == -w.back()) continue;
            w.push_back(l);
            self(self);
            w.pop_back();
        }
    };
    rec(rec);
    return classes;
}

struct FitResult {
    double value = 0.0;
    double stderr_ = 0.0;
};

// least-squares slope of y against x
inline FitResult fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 3) throw numeric_error("fit_slope: too few points");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw numeric_error("fit_slope: degenerate abscissae");
    const double slope = sxy / sxx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i)
        ss += sqr(y[i] - my - slope * (x[i] - mx));
    const double se = n > 2 ? std::sqrt(ss / ((n - 2) * sxx)) : 0.0;
    return {slope, se};
}

// Slope of log N(R) against R over the top half of the spectrum range; the
// growth rate of the counting function estimates the limit-set dimension.
inline FitResult counting_exponent(const LengthSpectrum& spec) {
    if (spec.entries.size() < 200)
        throw numeric_error("counting_exponent: need at least 200 classes");
    std::vector<double> R, logN;
    double n = 0;
    const double lo = spec.cutoff / 2.0;
    for (const auto& e : spec.entries) {
        n += e.multiplicity;
        if (e.length >= lo) {
            R.push_back(e.length);
            logN.push_back(std::log(n));
        }
    }
    if (R.size() < 20) throw numeric_error("counting_exponent: top half of range too sparse");
    return fit_slope(R, logN);
}

// N(R) <= C exp(delta R) model for truncation certificates; measured from the
// spectrum itself and inflated 20%, with the combinatorial bound
// log(2r-1)/min_wall_gap as fallback when the fit is unavailable.
struct CountingModel {
    double delta = 0.0;
    double C = 1.0;
    bool fitted = false;
};

inline CountingModel counting_model(const LengthSpectrum& spec, const SchottkySurface& surf) {
    CountingModel m;
    const double crude = std::log(std::max(1, 2 * surf.rank() - 1)) / surf.min_wall_gap();
    if (spec.entries.size() >= 200) {
        m.delta = std::min(crude, 1.2 * counting_exponent(spec).value);
        m.fitted = true;
    } else {
        m.delta = crude;
    }
    m.delta = std::max(m.delta, 1e-6);
    double C = 1.0, n = 0.0;
    for (const auto& e : spec.entries) {
        n += e.multiplicity;
        C = std::max(C, n / std::exp(m.delta * e.length));
    }
    m.C = 1.2 * C;
    return m;
}

} // namespace schottky
