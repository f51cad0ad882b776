#pragma once

// Checkers for every witness type produced by the searchers. These are kept
// deliberately independent: each one re-reads the definition straight off the
// data structures instead of calling into search code, so a bug in a searcher
// cannot hide behind the same bug in its checker.

#include <set>
#include <vector>

#include "colouring.hpp"
#include "ramsey.hpp"

namespace szlab {

inline bool verify_mono_ap(const Colouring& c, const MonoAp& w, long long k) {
    if (k < 1) return false;
    if (w.a < 1 || w.a > c.n) return false;
    if (k == 1) return w.r == 0 && c.at(w.a) == w.colour;
    if (w.r < 1) return false;
    if (w.a + (k - 1) * w.r > c.n) return false;
    for (long long j = 0; j < k; ++j)
        if (c.at(w.a + j * w.r) != w.colour) return false;
    return true;
}

inline bool verify_fan(const Colouring& c, const Fan& f, long long k) {
    const long long d = static_cast<long long>(f.increments.size());
    if (static_cast<long long>(f.spoke_colours.size()) != d) return false;
    if (f.a < 1 || f.a > c.n) return false;
    if (c.at(f.a) != f.base_colour) return false;
    std::set<int> colours{f.base_colour};
    long long prev = 0;
    for (long long i = 0; i < d; ++i) {
        const long long r = f.increments[static_cast<std::size_t>(i)];
        const int col = f.spoke_colours[static_cast<std::size_t>(i)];
        if (r <= prev) return false;  // strictly increasing, >= 1
        prev = r;
        if (f.a + (k - 1) * r > c.n) return false;
        for (long long j = 1; j < k; ++j)
            if (c.at(f.a + j * r) != col) return false;
        if (!colours.insert(col).second) return false;  // pairwise distinct incl. base
    }
    return true;
}

// No monochromatic length-k progression anywhere: the avoiding certificate
// property, verified by full enumeration.
inline bool verify_avoiding(const Colouring& c, long long k) {
    if (k == 1) return c.n == 0;
    for (long long a = 1; a <= c.n; ++a)
        for (long long r = 1; a + (k - 1) * r <= c.n; ++r) {
            bool mono = true;
            for (long long j = 1; j < k; ++j)
                if (c.at(a + j * r) != c.at(a)) {
                    mono = false;
                    break;
                }
            if (mono) return false;
        }
    return true;
}

inline bool verify_schur(const Colouring& c, const SchurWitness& w) {
    if (w.x < 1 || w.y < 1) return false;
    if (w.x + w.y > c.n) return false;
    if (c.at(w.x) != w.colour || c.at(w.y) != w.colour || c.at(w.x + w.y) != w.colour) return false;
    // Triangle bookkeeping must agree with the triple.
    if (!(w.va >= 1 && w.va < w.vb && w.vb < w.vc && w.vc <= c.n + 1)) return false;
    return w.vb - w.va == w.x && w.vc - w.vb == w.y;
}

inline bool verify_subcube_shape(const CubeColouring& cc, const Subcube& sc) {
    if (static_cast<long long>(sc.fixed.size()) != cc.d) return false;
    std::vector<int> seen(static_cast<std::size_t>(cc.d), 0);
    for (const auto& g : sc.groups) {
        if (g.empty()) return false;
        for (long long coord : g) {
            if (coord < 0 || coord >= cc.d) return false;
            if (sc.fixed[static_cast<std::size_t>(coord)] != -1) return false;
            if (seen[static_cast<std::size_t>(coord)]++) return false;
        }
    }
    for (long long i = 0; i < cc.d; ++i) {
        const long long v = sc.fixed[static_cast<std::size_t>(i)];
        if (v == -1) {
            if (!seen[static_cast<std::size_t>(i)]) return false;  // wildcard not in any group
        } else if (v < 0 || v >= cc.ppa()) {
            return false;
        }
    }
    return true;
}

inline bool verify_subcube(const CubeColouring& cc, const SubcubeWitness& w) {
    if (!verify_subcube_shape(cc, w.subcube)) return false;
    const long long j = w.subcube.dimension();
    const long long ppa = cc.ppa();
    // Walk every point of the subcube by an explicit odometer over wildcard
    // values; evaluate colours directly from coordinates.
    std::vector<long long> t(static_cast<std::size_t>(j), 0);
    auto point_colour = [&](const std::vector<long long>& tv) {
        std::vector<long long> coords(w.subcube.fixed.begin(), w.subcube.fixed.end());
        for (std::size_t g = 0; g < w.subcube.groups.size(); ++g)
            for (long long coord : w.subcube.groups[g])
                coords[static_cast<std::size_t>(coord)] = tv[g];
        return cc.at(coords);
    };
    std::vector<long long> zeros(static_cast<std::size_t>(j), 0);
    if (w.colour != point_colour(zeros)) return false;
    while (true) {
        if (w.kind == SubcubeKind::Monochromatic) {
            if (point_colour(t) != w.colour) return false;
        } else {
            for (long long g = 0; g < j; ++g) {
                if (t[static_cast<std::size_t>(g)] != cc.k - 1) continue;
                std::vector<long long> t2 = t;
                t2[static_cast<std::size_t>(g)] = cc.k;
                if (point_colour(t) != point_colour(t2)) return false;
            }
        }
        long long pos = 0;
        while (pos < j && ++t[static_cast<std::size_t>(pos)] == ppa) {
            t[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == j) break;
    }
    return true;
}

}  // namespace szlab
