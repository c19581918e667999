#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "schottky/common.hpp"

namespace schottky {

// Letters of the free group on r generators: +k is generator k (1-based),
// -k its inverse.
using Letter = std::int8_t;
using Word = std::vector<Letter>;

inline int letter_count(int rank) { return 2 * rank; }

// fixed total order on letters: 1 < -1 < 2 < -2 < ...
inline int letter_code(Letter l) { return (std::abs(l) - 1) * 2 + (l < 0 ? 1 : 0); }
inline Letter code_letter(int code) {
    const int k = code / 2 + 1;
    return static_cast<Letter>(code % 2 ? -k : k);
}

inline bool is_reduced(const Word& w) {
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w[i] == -w[i - 1]) return false;
    return true;
}

inline bool is_cyclically_reduced(const Word& w) {
    if (!is_reduced(w)) return false;
    return w.size() < 2 || w.front() != -w.back();
}

inline Word inverse_word(const Word& w) {
    Word out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = -w[w.size() - 1 - i];
    return out;
}

inline bool lex_less(const Word& a, const Word& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const int ca = letter_code(a[i]), cb = letter_code(b[i]);
        if (ca != cb) return ca < cb;
    }
    return a.size() < b.size();
}

// Lexicographically minimal cyclic rotation. Words are short; the quadratic
// scan is fine.
inline Word min_rotation(const Word& w) {
    if (w.size() < 2) return w;
    Word best = w, rot = w;
    for (std::size_t k = 1; k < w.size(); ++k) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (lex_less(rot, best)) best = rot;
    }
    return best;
}

// Canonical representative of the conjugacy class: minimal rotation, and in
// unoriented mode the smaller of the word and its inverse.
inline Word canonical_cyclic(const Word& w, bool unoriented) {
    Word a = min_rotation(w);
    if (!unoriented) return a;
    Word b = min_rotation(inverse_word(w));
    return lex_less(b, a) ? b : a;
}

// A word is primitive when it is not a proper power; equivalently its
// smallest cyclic period equals its length.
inline bool is_primitive(const Word& w) {
    const std::size_t n = w.size();
    for (std::size_t p = 1; p <= n / 2; ++p) {
        if (n % p != 0) continue;
        bool periodic = true;
        for (std::size_t i = p; i < n && periodic; ++i) periodic = (w[i] == w[i - p]);
        if (periodic) return false;
    }
    return true;
}

// Compact display: generators a, b, c, ...; inverses A, B, C, ...
inline std::string word_to_string(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (Letter l : w) {
        const int k = std::abs(l) - 1;
        if (k >= 26) throw error("word_to_string: rank beyond 26 not printable");
        s.push_back(static_cast<char>((l > 0 ? 'a' : 'A') + k));
    }
    return s;
}

inline Word word_from_string(const std::string& s) {
    Word w;
    w.reserve(s.size());
    for (char c : s) {
        if (c >= 'a' && c <= 'z') w.push_back(static_cast<Letter>(c - 'a' + 1));
        else if (c >= 'A' && c <= 'Z') w.push_back(static_cast<Letter>(-(c - 'A' + 1)));
        else throw error("word_from_string: bad character");
    }
    return w;
}

} // namespace schottky
