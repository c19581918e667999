#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "schottky/moebius.hpp"
#include "schottky/words.hpp"

namespace schottky {

// Euclidean disk centered on the real axis (so orthogonal to the boundary of
// the upper half-plane).
struct BoundaryDisk {
    double center = 0.0;
    double radius = 0.0;
    double left() const { return center - radius; }
    double right() const { return center + radius; }
    bool contains_boundary(double x) const { return std::abs(x - center) < radius; }
    bool contains(cplx z) const { return std::abs(z - cplx(center, 0.0)) < radius; }
};

// cosh of the hyperbolic distance between the geodesics over two disjoint
// disks equals their inversive distance.
inline double wall_gap(const BoundaryDisk& p, const BoundaryDisk& q) {
    const double inv =
        (sqr(p.center - q.center) - p.radius * p.radius - q.radius * q.radius) /
        (2.0 * p.radius * q.radius);
    return std::acosh(std::max(1.0, inv));
}

struct ValidationCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool ok() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const ValidationCheck& c) { return c.pass; });
    }
    std::string summary() const {
        std::ostringstream os;
        for (const auto& c : checks) {
            os << (c.pass ? "pass" : "FAIL") << "  " << c.name << "  margin=" << fmt17(c.margin);
            if (!c.detail.empty()) os << "  (" << c.detail << ")";
            os << "\n";
        }
        return os.str();
    }
};

// One component of the complement of the pairing disks on the boundary
// circle, together with the geodesic that closes the funnel across it.
struct FunnelGap {
    Letter left_letter = 0;  // disk immediately left of the gap
    Letter right_letter = 0;
    double gap_lo = 0.0, gap_hi = 0.0; // the Euclidean gap interval itself
    bool wrap = false;                 // gap containing the point at infinity
    Word boundary_word;                // axis of this word bounds the gap
    double geo_center = 0.0, geo_radius = 0.0; // that axis, as a half-circle
    int funnel_index = -1;
};

struct Funnel {
    Word word;       // canonical conjugacy-class representative
    double length = 0.0;
    std::vector<int> gap_ids;
};

// Convex co-compact Schottky surface: free group on `rank` hyperbolic
// generators whose isometric circles are pairwise disjoint. Immutable after
// construction; safe to share across threads.
class SchottkySurface {
  public:
    static SchottkySurface from_generators(Model model, std::vector<MoebiusMap> gens,
                                           std::vector<double> requested_funnels = {}) {
        SchottkySurface s;
        s.model_ = model;
        s.gens_ = std::move(gens);
        s.requested_funnels_ = std::move(requested_funnels);
        for (auto& g : s.gens_) g.normalize();
        s.build();
        return s;
    }

    static SchottkySurface from_disk_generators(std::vector<std::array<cplx, 4>> mats,
                                                std::vector<double> requested = {}) {
        std::vector<MoebiusMap> gens;
        gens.reserve(mats.size());
        for (const auto& m : mats) gens.push_back(disk_matrix_to_half_plane(m));
        return from_generators(Model::disk, std::move(gens), std::move(requested));
    }

    // Elementary cylinder: one hyperbolic generator, two funnels of equal
    // boundary length.
    static SchottkySurface cylinder(double l, Model model = Model::half_plane) {
        if (!(l > 0)) throw validation_error("cylinder: funnel length must be positive");
        const double a = l / 2.0;
        MoebiusMap g{std::cosh(a), std::sinh(a), std::sinh(a), std::cosh(a)};
        return from_generators(model, {g}, {l, l});
    }

    // Three-funnel surface with boundary lengths (l1, l2, l3): generators
    //   g1 = [[cosh a, sinh a], [sinh a, cosh a]],        a = l1/2,
    //   g2 = conjugate of the same form scaled to axis (-alpha, alpha),
    // with alpha < 1 picked so that tr(g1 g2^{-1}) = -2 cosh(l3/2). The third
    // funnel is then the class of g1 g2^{-1}.
    static SchottkySurface pair_of_pants(double l1, double l2, double l3,
                                         Model model = Model::half_plane) {
        if (!(l1 > 0) || !(l2 > 0) || !(l3 > 0))
            throw validation_error("pair_of_pants: funnel lengths must be positive");
        const double a = l1 / 2.0, b = l2 / 2.0;
        const double K =
            (2.0 * std::cosh(a) * std::cosh(b) + 2.0 * std::cosh(l3 / 2.0)) /
            (std::sinh(a) * std::sinh(b));
        const double alpha = (K - std::sqrt(K * K - 4.0)) / 2.0;
        MoebiusMap g1{std::cosh(a), std::sinh(a), std::sinh(a), std::cosh(a)};
        MoebiusMap g2{std::cosh(b), alpha * std::sinh(b), std::sinh(b) / alpha, std::cosh(b)};
        return from_generators(model, {g1, g2}, {l1, l2, l3});
    }

    Model model() const { return model_; }
    int rank() const { return static_cast<int>(gens_.size()); }
    int euler_characteristic() const { return 1 - rank(); }
    int genus() const { return genus_; }
    int funnel_count() const { return static_cast<int>(funnels_.size()); }
    double core_volume() const { return -2.0 * kPi * euler_characteristic(); }

    const std::vector<MoebiusMap>& generators() const { return gens_; }
    const std::vector<Funnel>& funnels() const { return funnels_; }
    const std::vector<FunnelGap>& gaps() const { return gaps_; }
    std::vector<double> funnel_lengths() const {
        std::vector<double> out;
        for (const auto& f : funnels_) out.push_back(f.length);
        return out;
    }

    MoebiusMap letter_map(Letter l) const {
        const auto& g = gens_[std::abs(l) - 1];
        return l > 0 ? g : g.inverse();
    }
    const BoundaryDisk& letter_disk(Letter l) const { return disks_[letter_code(l)]; }
    const std::vector<BoundaryDisk>& disks() const { return disks_; }

    MoebiusMap word_map(const Word& w) const {
        std::vector<MoebiusMap> f;
        f.reserve(w.size());
        for (Letter l : w) f.push_back(letter_map(l));
        return word_product(f);
    }

    double word_length_geo(const Word& w) const {
        std::vector<MoebiusMap> f;
        f.reserve(w.size());
        for (Letter l : w) f.push_back(letter_map(l));
        return word_translation_length(f);
    }

    // lower bound for the translation length of a cyclically reduced word:
    // the axis crosses the walls over D_{-w_k} and D_{w_{k+1}} in turn, so the
    // length dominates the sum of consecutive wall distances.
    double length_lower_bound(const Word& w) const {
        double sum = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            const Letter from = static_cast<Letter>(-w[k]);
            const Letter to = w[(k + 1) % w.size()];
            sum += wall_gaps_[letter_code(from)][letter_code(to)];
        }
        return sum;
    }

    double min_wall_gap() const { return min_wall_gap_; }
    double wall_gap_between(Letter a, Letter b) const {
        return wall_gaps_[letter_code(a)][letter_code(b)];
    }

    bool in_fundamental_domain(cplx z) const {
        for (const auto& d : disks_)
            if (d.contains(z)) return false;
        return true;
    }

    // Membership in the convex core for a point already reduced to the
    // fundamental domain: outside every funnel half-plane.
    bool in_core(cplx z) const {
        for (const auto& g : gaps_) {
            const double q = std::abs(z - cplx(g.geo_center, 0.0));
            if (g.wrap ? (q > g.geo_radius) : (q < g.geo_radius)) return false;
        }
        return true;
    }

    // Pulls z back into the closed fundamental domain, appending the applied
    // letters: if the return value is z', the input satisfies z = gamma(z')
    // with gamma the word built from `appended`.
    cplx reduce(cplx z, Word* appended = nullptr, int max_steps = 4096) const {
        for (int step = 0; step < max_steps; ++step) {
            bool moved = false;
            for (Letter l : all_letters_) {
                if (letter_disk(l).contains(z)) {
                    z = letter_map(static_cast<Letter>(-l)).apply(z);
                    if (appended) appended->push_back(l);
                    moved = true;
                    break;
                }
            }
            if (!moved) return z;
        }
        throw numeric_error("reduce: point did not leave the pairing disks "
                            "(starting point too close to the limit set?)");
    }

    ValidationReport validate() const {
        ValidationReport rep;
        auto add = [&](std::string name, bool pass, double margin, std::string detail = "") {
            rep.checks.push_back({std::move(name), pass, margin, std::move(detail)});
        };

        double det_dev = 0.0;
        for (const auto& g : gens_) det_dev = std::max(det_dev, std::abs(g.det() - 1.0));
        add("generator_determinant", det_dev <= 1e-12, det_dev);

        double hyp_margin = std::numeric_limits<double>::infinity();
        for (const auto& g : gens_) hyp_margin = std::min(hyp_margin, std::abs(g.trace()) - 2.0);
        add("generators_hyperbolic", hyp_margin > 0.0, hyp_margin);

        // pairwise disjointness of the 2r closed disks
        double min_sep = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < disks_.size(); ++i)
            for (std::size_t j = i + 1; j < disks_.size(); ++j) {
                const double sep = std::abs(disks_[i].center - disks_[j].center) -
                                   (disks_[i].radius + disks_[j].radius);
                min_sep = std::min(min_sep, sep);
            }
        add("disks_disjoint", min_sep > 0.0, min_sep, min_sep > 0.0 ? "" : "disks intersect");

        // pairing: each generator sends the boundary of its source disk onto
        // the boundary of its target disk (sampled)
        double pair_dev = 0.0;
        if (min_sep > 0.0) {
            for (int k = 1; k <= rank(); ++k) {
                const Letter l = static_cast<Letter>(k);
                const auto& src = letter_disk(static_cast<Letter>(-l));
                const auto& dst = letter_disk(l);
                const MoebiusMap m = letter_map(l);
                for (int j = 1; j < 16; ++j) {
                    const cplx z = cplx(src.center, 0.0) +
                                   src.radius * std::exp(cplx(0.0, kPi * j / 16.0));
                    const double dev =
                        std::abs(std::abs(m.apply(z) - cplx(dst.center, 0.0)) - dst.radius);
                    pair_dev = std::max(pair_dev, dev);
                }
            }
        }
        add("pairing_boundary_to_boundary", min_sep > 0.0 && pair_dev <= 1e-10, pair_dev);

        const bool topo_ok = genus_ >= 0 && (2 - 2 * genus_ - funnel_count()) ==
                                                euler_characteristic();
        add("funnel_topology", min_sep > 0.0 && topo_ok,
            static_cast<double>(funnel_count()),
            "genus " + std::to_string(genus_) + ", funnels " + std::to_string(funnel_count()));

        // realized funnel lengths against the requested ones, when given
        if (!requested_funnels_.empty()) {
            std::vector<double> want = requested_funnels_, got = funnel_lengths();
            std::sort(want.begin(), want.end());
            std::sort(got.begin(), got.end());
            double dev = std::numeric_limits<double>::infinity();
            if (want.size() == got.size()) {
                dev = 0.0;
                for (std::size_t i = 0; i < want.size(); ++i)
                    dev = std::max(dev, std::abs(want[i] - got[i]));
            }
            add("funnel_lengths", dev <= 1e-10, dev);
        }

        // boundary words are hyperbolic and consistent with their gaps
        double word_dev = 0.0;
        bool words_ok = true;
        for (const auto& f : funnels_) {
            try {
                word_dev = std::max(word_dev,
                                    std::abs(word_length_geo(f.word) - f.length));
            } catch (const error&) {
                words_ok = false;
            }
        }
        add("funnel_words_consistent", words_ok && word_dev <= 1e-10, word_dev);

        if (rank() >= 2)
            add("core_volume_positive", core_volume() > 0.0, core_volume());
        return rep;
    }

    // Corners and apexes of the core boundary; used to bound the core for
    // rejection sampling.
    struct CoreBox {
        double x0, x1, y0, y1;
    };

    CoreBox core_box() const {
        std::vector<cplx> pts;
        std::vector<std::pair<double, double>> circles; // (center, radius)
        for (const auto& d : disks_) circles.push_back({d.center, d.radius});
        for (const auto& g : gaps_) circles.push_back({g.geo_center, g.geo_radius});
        auto on_core_boundary = [&](cplx z) {
            const double tol = 1e-9;
            for (const auto& d : disks_)
                if (std::abs(z - cplx(d.center, 0)) < d.radius - tol) return false;
            for (const auto& g : gaps_) {
                const double q = std::abs(z - cplx(g.geo_center, 0));
                if (g.wrap ? (q > g.geo_radius + tol) : (q < g.geo_radius - tol)) return false;
            }
            return true;
        };
        for (std::size_t i = 0; i < circles.size(); ++i) {
            pts.push_back(cplx(circles[i].first, circles[i].second)); // apex
            for (std::size_t j = i + 1; j < circles.size(); ++j) {
                const auto [c1, r1] = circles[i];
                const auto [c2, r2] = circles[j];
                if (c1 == c2) continue;
                const double x = 0.5 * ((r1 * r1 - r2 * r2) / (c2 - c1) + c1 + c2);
                const double y2 = r1 * r1 - sqr(x - c1);
                if (y2 > 0) pts.push_back(cplx(x, std::sqrt(y2)));
            }
        }
        CoreBox box{1e300, -1e300, 1e300, -1e300};
        for (cplx z : pts) {
            if (!on_core_boundary(z)) continue;
            box.x0 = std::min(box.x0, z.real());
            box.x1 = std::max(box.x1, z.real());
            box.y0 = std::min(box.y0, z.imag());
            box.y1 = std::max(box.y1, z.imag());
        }
        if (box.x0 > box.x1)
            throw numeric_error("core_box: could not locate the convex core boundary");
        box.y0 *= 0.999;
        box.y1 *= 1.001;
        return box;
    }

  private:
    void build() {
        if (gens_.empty()) throw validation_error("surface needs at least one generator");
        for (const auto& g : gens_)
            if (!g.is_hyperbolic())
                throw validation_error("surface generators must be hyperbolic (|trace| > 2)");

        // isometric circles need c != 0; conjugate the whole group by a fixed
        // rotation about i until no generator fixes infinity
        for (int attempt = 0; attempt < 8; ++attempt) {
            bool ok = true;
            for (const auto& g : gens_)
                if (std::abs(g.c) < 1e-12 * (std::abs(g.a) + std::abs(g.d))) ok = false;
            if (ok) break;
            const double phi = 0.35;
            const MoebiusMap rot{std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi)};
            for (auto& g : gens_) g = compose(rot, compose(g, rot.inverse()));
        }

        all_letters_.clear();
        for (int k = 1; k <= rank(); ++k) {
            all_letters_.push_back(static_cast<Letter>(k));
            all_letters_.push_back(static_cast<Letter>(-k));
        }

        disks_.assign(2 * rank(), {});
        for (int k = 1; k <= rank(); ++k) {
            const MoebiusMap& g = gens_[k - 1];
            if (std::abs(g.c) < 1e-14)
                throw validation_error("generator fixes infinity; cannot form pairing disks");
            // source disk D_{-k} = isometric circle of g, target D_{+k} of g^{-1}
            disks_[letter_code(static_cast<Letter>(-k))] = {-g.d / g.c, 1.0 / std::abs(g.c)};
            disks_[letter_code(static_cast<Letter>(k))] = {g.a / g.c, 1.0 / std::abs(g.c)};
        }

        wall_gaps_.assign(2 * rank(), std::vector<double>(2 * rank(), 0.0));
        min_wall_gap_ = std::numeric_limits<double>::infinity();
        bool disjoint = true;
        for (Letter a : all_letters_)
            for (Letter b : all_letters_) {
                if (a == b) continue;
                const double w = wall_gap(letter_disk(a), letter_disk(b));
                wall_gaps_[letter_code(a)][letter_code(b)] = w;
                if (w <= 0.0) disjoint = false;
                min_wall_gap_ = std::min(min_wall_gap_, w);
            }

        if (disjoint) build_funnels();
        // if disks overlap, leave funnels empty; validate() reports the failure
    }

    // Walk the gaps between consecutive disks on the boundary circle. From a
    // gap whose left disk is D_i, the expanding map sends its endpoint into
    // the gap left of D_{-i}; the cycles of this walk are the funnels and the
    // accumulated letters spell the funnel boundary words.
    void build_funnels() {
        const int n = 2 * rank();
        std::vector<Letter> order(all_letters_);
        std::sort(order.begin(), order.end(), [&](Letter x, Letter y) {
            return letter_disk(x).center < letter_disk(y).center;
        });
        std::vector<int> pos(n, 0); // letter_code -> position in sorted order
        for (int i = 0; i < n; ++i) pos[letter_code(order[i])] = i;

        gaps_.assign(n, {});
        for (int i = 0; i < n; ++i) {
            FunnelGap g;
            g.left_letter = order[i];
            g.right_letter = order[(i + 1) % n];
            g.wrap = (i == n - 1);
            g.gap_lo = letter_disk(g.left_letter).right();
            g.gap_hi = letter_disk(g.right_letter).left();
            gaps_[i] = g;
        }
        auto successor = [&](int gap_idx) {
            const Letter i = gaps_[gap_idx].left_letter;
            const int p = pos[letter_code(static_cast<Letter>(-i))];
            return (p - 1 + n) % n;
        };

        funnels_.clear();
        std::vector<int> cycle_of(n, -1);
        for (int start = 0; start < n; ++start) {
            if (cycle_of[start] >= 0) continue;
            std::vector<int> cycle;
            Word letters;
            int g = start;
            do {
                cycle.push_back(g);
                cycle_of[g] = static_cast<int>(funnels_.size());
                letters.push_back(gaps_[g].left_letter);
                g = successor(g);
            } while (g != start);

            Funnel f;
            f.word = canonical_cyclic(letters, true);
            f.length = word_length_geo(letters);
            f.gap_ids = cycle;
            // each visited gap is bounded by the axis of the corresponding
            // rotation of the boundary word
            for (std::size_t k = 0; k < cycle.size(); ++k) {
                Word rot(letters.begin() + k, letters.end());
                rot.insert(rot.end(), letters.begin(), letters.begin() + k);
                const auto fix = axis_endpoints(word_map(rot));
                auto& gap = gaps_[cycle[k]];
                gap.boundary_word = rot;
                const double u = std::min(fix[0], fix[1]);
                const double v = std::max(fix[0], fix[1]);
                gap.geo_center = 0.5 * (u + v);
                gap.geo_radius = 0.5 * (v - u);
                gap.funnel_index = static_cast<int>(funnels_.size());
            }
            funnels_.push_back(std::move(f));
        }
        genus_ = (1 + rank() - funnel_count());
        if (genus_ % 2 != 0) genus_ = -1; // flagged by validate()
        else genus_ /= 2;
    }

    Model model_ = Model::half_plane;
    std::vector<MoebiusMap> gens_;
    std::vector<BoundaryDisk> disks_; // indexed by letter_code
    std::vector<Letter> all_letters_;
    std::vector<std::vector<double>> wall_gaps_;
    double min_wall_gap_ = 0.0;
    std::vector<FunnelGap> gaps_;
    std::vector<Funnel> funnels_;
    std::vector<double> requested_funnels_;
    int genus_ = 0;
};

} // namespace schottky
