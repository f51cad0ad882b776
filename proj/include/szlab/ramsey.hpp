#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "colouring.hpp"
#include "errors.hpp"
#include "rational.hpp"

namespace szlab {

// ---------------------------------------------------------------------------
// Monochromatic arithmetic progressions
// ---------------------------------------------------------------------------

struct MonoAp {
    long long a = 0;  // first term
    long long r = 0;  // common difference (>= 1 for length >= 2)
    int colour = 0;
};

// Smallest witness in (a, r) lexicographic order. Length-1 progressions are a
// single cell; by convention the witness is (1, 0).
inline std::optional<MonoAp> find_mono_ap(const Colouring& c, long long k) {
    if (k < 1) throw InvalidArgument("find_mono_ap: length must be >= 1");
    if (c.n < 1) return std::nullopt;
    if (k == 1) return MonoAp{1, 0, c.at(1)};
    for (long long a = 1; a <= c.n; ++a) {
        const long long rmax = (c.n - a) / (k - 1);
        for (long long r = 1; r <= rmax; ++r) {
            const int col = c.at(a);
            bool mono = true;
            for (long long j = 1; j < k; ++j) {
                if (c.at(a + j * r) != col) {
                    mono = false;
                    break;
                }
            }
            if (mono) return MonoAp{a, r, col};
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Polychromatic fans
// ---------------------------------------------------------------------------

// Base point a plus d spokes {a + j*r_i : 1 <= j <= k-1}. Each spoke is
// monochromatic in its own colour, the d spoke colours are pairwise distinct,
// and none of them equals the colour of the base point.
struct Fan {
    long long a = 0;
    std::vector<long long> increments;  // strictly increasing r_1 < ... < r_d
    int base_colour = 0;
    std::vector<int> spoke_colours;
};

namespace detail {

inline bool fan_extend(const Colouring& c, long long k, long long d, long long a, Fan& fan,
                       std::vector<bool>& used_colour) {
    if (static_cast<long long>(fan.increments.size()) == d) return true;
    const long long lo = fan.increments.empty() ? 1 : fan.increments.back() + 1;
    for (long long r = lo; a + (k - 1) * r <= c.n; ++r) {
        const int col = c.at(a + r);
        if (used_colour[static_cast<std::size_t>(col)]) continue;
        bool mono = true;
        for (long long j = 2; j < k; ++j) {
            if (c.at(a + j * r) != col) {
                mono = false;
                break;
            }
        }
        if (!mono) continue;
        fan.increments.push_back(r);
        fan.spoke_colours.push_back(col);
        used_colour[static_cast<std::size_t>(col)] = true;
        if (fan_extend(c, k, d, a, fan, used_colour)) return true;
        used_colour[static_cast<std::size_t>(col)] = false;
        fan.spoke_colours.pop_back();
        fan.increments.pop_back();
    }
    return false;
}

}  // namespace detail

// Least witness in (a, r_1, ..., r_d) lexicographic order. A polychromatic
// fan needs d+1 pairwise distinct colours, so degree m is still a legal query
// but always comes back not-found; degree > m is rejected. Spokes carry
// k-1 >= 1 cells, so k >= 2 whenever there is a spoke.
inline std::optional<Fan> find_fan(const Colouring& c, long long k, long long d) {
    if (d < 0) throw InvalidArgument("find_fan: degree must be >= 0");
    if (d > c.m) throw InvalidArgument("find_fan: degree must be <= m");
    if (d >= 1 && k < 2) throw InvalidArgument("find_fan: spokes need length >= 2");
    if (c.n < 1) return std::nullopt;
    for (long long a = 1; a <= c.n; ++a) {
        Fan fan;
        fan.a = a;
        fan.base_colour = c.at(a);
        std::vector<bool> used(static_cast<std::size_t>(c.m) + 1, false);
        used[static_cast<std::size_t>(fan.base_colour)] = true;
        if (detail::fan_extend(c, k, d, a, fan, used)) return fan;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Van der Waerden numbers by exhaustive search
// ---------------------------------------------------------------------------

struct VdwResult {
    bool exact = false;      // true: w is the exact threshold
    long long w = 0;         // exact threshold, or (search limit + 1) as a lower bound
    Colouring certificate;   // avoiding colouring of [1, w-1] (empty when w == 1)
    unsigned long long nodes = 0;
};

namespace detail {

// True iff some length-k progression ending at cell `last` is monochromatic.
inline bool mono_ap_ending_at(const std::vector<int>& col, long long k, long long last) {
    const int c = col[static_cast<std::size_t>(last - 1)];
    for (long long r = 1; last - (k - 1) * r >= 1; ++r) {
        bool mono = true;
        for (long long j = 1; j < k; ++j) {
            if (col[static_cast<std::size_t>(last - j * r - 1)] != c) {
                mono = false;
                break;
            }
        }
        if (mono) return true;
    }
    return false;
}

// Depth-first search for an avoiding m-colouring of [1,n] with cell 1 pinned
// to colour 1 (colour-permutation symmetry). Colours are tried in increasing
// order, so the first completed colouring is the lexicographically least
// avoiding one with that pinning.
inline bool find_avoiding(long long n, long long k, int m, std::vector<int>& col,
                          unsigned long long& nodes, unsigned long long node_guard) {
    const long long depth = static_cast<long long>(col.size()) + 1;
    if (depth > n) return true;
    const int top = (depth == 1) ? 1 : m;
    for (int c = 1; c <= top; ++c) {
        if (++nodes > node_guard) throw ResourceLimit("vdw_number: node guard exceeded");
        col.push_back(c);
        if (k == 1 || !mono_ap_ending_at(col, k, depth)) {
            if (find_avoiding(n, k, m, col, nodes, node_guard)) return true;
        }
        col.pop_back();
    }
    return false;
}

}  // namespace detail

// Least N such that every m-colouring of [1,N] contains a monochromatic
// length-k progression, found by growing N until the avoider search fails.
// Progressions have difference >= 1 except for k == 1, where any single cell
// qualifies and the threshold is 1.
inline VdwResult vdw_number(long long k, int m, long long n_limit = 64,
                            unsigned long long node_guard = 100000000ULL) {
    if (k < 1) throw InvalidArgument("vdw_number: length must be >= 1");
    if (m < 1) throw InvalidArgument("vdw_number: palette must be >= 1");
    if (n_limit < 1) throw InvalidArgument("vdw_number: search limit must be >= 1");
    VdwResult res;
    if (k == 1) {
        res.exact = true;
        res.w = 1;
        res.certificate = Colouring{0, m, {}};
        return res;
    }
    Colouring last_avoider{0, m, {}};
    for (long long n = 1; n <= n_limit; ++n) {
        std::vector<int> col;
        col.reserve(static_cast<std::size_t>(n));
        if (detail::find_avoiding(n, k, m, col, res.nodes, node_guard)) {
            last_avoider = Colouring{n, m, std::move(col)};
        } else {
            res.exact = true;
            res.w = n;
            res.certificate = std::move(last_avoider);
            return res;
        }
    }
    res.exact = false;
    res.w = n_limit + 1;
    res.certificate = std::move(last_avoider);
    return res;
}

// ---------------------------------------------------------------------------
// Schur triples from triangle colourings
// ---------------------------------------------------------------------------

// Complete graph on {1..N+1} with edge {u,v} coloured by the colour of |v-u|
// under a colouring of [1,N]. A monochromatic triangle a < b < c yields the
// triple x = b-a, y = c-b, x+y = c-a, all of one colour.
struct SchurWitness {
    long long x = 0;
    long long y = 0;
    int colour = 0;
    long long va = 0, vb = 0, vc = 0;  // triangle vertices, a < b < c
};

inline std::optional<SchurWitness> schur_witness(const Colouring& c) {
    const long long nv = c.n + 1;
    for (long long a = 1; a <= nv; ++a)
        for (long long b = a + 1; b <= nv; ++b) {
            const int cab = c.at(b - a);
            for (long long v = b + 1; v <= nv; ++v)
                if (c.at(v - b) == cab && c.at(v - a) == cab)
                    return SchurWitness{b - a, v - b, cab, a, b, v};
        }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Combinatorial subcubes of the digit grid
// ---------------------------------------------------------------------------

// A j-dimensional combinatorial subcube: every original coordinate is either
// pinned to a digit or assigned to one of j wildcard groups; all coordinates
// in a group move together through the digit range. Groups are kept in order
// of their smallest member and every group is nonempty.
struct Subcube {
    std::vector<long long> fixed;               // per coordinate: digit, or -1 if wildcard
    std::vector<std::vector<long long>> groups;  // wildcard coordinates, grouped

    long long dimension() const { return static_cast<long long>(groups.size()); }

    // Point of the subcube at wildcard values t (one per group).
    std::vector<long long> point(const std::vector<long long>& t) const {
        std::vector<long long> coords(fixed.begin(), fixed.end());
        for (std::size_t g = 0; g < groups.size(); ++g)
            for (long long coord : groups[g]) coords[static_cast<std::size_t>(coord)] = t[g];
        return coords;
    }
};

enum class SubcubeKind { Monochromatic, WeaklyMonochromatic };

struct SubcubeWitness {
    Subcube subcube;
    SubcubeKind kind = SubcubeKind::Monochromatic;
    int colour = 0;  // colour of the subcube point at all-zero wildcards
};

namespace detail {

inline bool subcube_is_mono(const CubeColouring& cc, const Subcube& sc, int& colour_out) {
    const long long j = sc.dimension();
    const long long ppa = cc.ppa();
    std::vector<long long> t(static_cast<std::size_t>(j), 0);
    int colour = cc.at(sc.point(t));
    while (true) {
        if (cc.at(sc.point(t)) != colour) return false;
        long long pos = 0;
        while (pos < j && ++t[static_cast<std::size_t>(pos)] == ppa) {
            t[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == j) break;
    }
    colour_out = colour;
    return true;
}

// Restricted-growth labellings of d coordinates: value 0 marks a pinned
// coordinate, values 1..j name wildcard groups, and each group label may only
// appear after all smaller ones (canonicalizing group order away). Visits
// labellings in lexicographic order; stops early when visit returns true.
template <typename F>
inline bool rg_labellings(std::vector<int>& label, long long pos, long long d, long long j,
                          int maxseen, F&& visit) {
    if (maxseen + (d - pos) < j) return false;
    if (pos == d) return visit(label);
    const int cap = static_cast<int>(std::min<long long>(j, maxseen + 1));
    for (int l = 0; l <= cap; ++l) {
        label[static_cast<std::size_t>(pos)] = l;
        if (rg_labellings(label, pos + 1, d, j, std::max(maxseen, l), visit)) return true;
    }
    return false;
}

// Weak monochromaticity: the colour is unchanged whenever a single wildcard
// value is swapped between the two top digits k-1 and k. Needs the endpoint
// convention so that both digits exist.
inline bool subcube_is_weakly_mono(const CubeColouring& cc, const Subcube& sc) {
    const long long j = sc.dimension();
    const long long ppa = cc.ppa();
    std::vector<long long> t(static_cast<std::size_t>(j), 0);
    while (true) {
        for (long long g = 0; g < j; ++g) {
            if (t[static_cast<std::size_t>(g)] != cc.k - 1) continue;
            std::vector<long long> t2 = t;
            t2[static_cast<std::size_t>(g)] = cc.k;
            if (cc.at(sc.point(t)) != cc.at(sc.point(t2))) return false;
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

}  // namespace detail

// Scan all j-dimensional subcubes in a canonical order (coordinate labelling
// first, then pinned digits, both lexicographic) and return the first
// monochromatic one; if none exists, the first weakly-monochromatic one.
// The weak scan requires the endpoint convention and is skipped otherwise.
inline std::optional<SubcubeWitness> hj_subcube_search(const CubeColouring& cc, long long j,
                                                       unsigned long long eval_guard = 100000000ULL) {
    if (j < 1 || j > cc.d) throw InvalidArgument("hj_subcube_search: dimension out of range");
    const long long ppa = cc.ppa();
    unsigned long long evals = 0;

    auto scan_labelling = [&](const std::vector<int>& label, bool weak_pass,
                              std::optional<SubcubeWitness>& out) -> bool {
        Subcube base;
        base.fixed.assign(static_cast<std::size_t>(cc.d), -1);
        base.groups.assign(static_cast<std::size_t>(j), {});
        std::vector<long long> pinned;
        for (long long i = 0; i < cc.d; ++i) {
            const int l = label[static_cast<std::size_t>(i)];
            if (l == 0)
                pinned.push_back(i);
            else
                base.groups[static_cast<std::size_t>(l - 1)].push_back(i);
        }
        // Pinned digit values in lexicographic order, first coordinate slowest.
        std::vector<long long> digits(pinned.size(), 0);
        while (true) {
            for (std::size_t q = 0; q < pinned.size(); ++q)
                base.fixed[static_cast<std::size_t>(pinned[q])] = digits[q];
            if (++evals > eval_guard) throw ResourceLimit("hj_subcube_search: evaluation guard exceeded");
            if (!weak_pass) {
                int colour = 0;
                if (detail::subcube_is_mono(cc, base, colour)) {
                    out = SubcubeWitness{base, SubcubeKind::Monochromatic, colour};
                    return true;
                }
            } else if (detail::subcube_is_weakly_mono(cc, base)) {
                std::vector<long long> zeros(static_cast<std::size_t>(j), 0);
                out = SubcubeWitness{base, SubcubeKind::WeaklyMonochromatic, cc.at(base.point(zeros))};
                return true;
            }
            std::size_t pos = pinned.size();
            while (pos > 0 && ++digits[pos - 1] == ppa) {
                digits[pos - 1] = 0;
                --pos;
            }
            if (pos == 0) break;
        }
        return false;
    };

    std::vector<int> label(static_cast<std::size_t>(cc.d), 0);
    for (int pass = 0; pass < 2; ++pass) {
        const bool weak_pass = pass == 1;
        if (weak_pass && !cc.include_endpoint) break;
        std::optional<SubcubeWitness> out;
        detail::rg_labellings(label, 0, cc.d, j, 0,
                              [&](const std::vector<int>& l) { return scan_labelling(l, weak_pass, out); });
        if (out) return out;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Staircase pigeonhole step
// ---------------------------------------------------------------------------

// Among the m+1 staircase points (first s generators at digit k-1, generators
// s+1..m+1 at digit k, the rest at 0) two share a colour; merging the
// generators strictly between them yields a line whose two top points agree,
// i.e. a weakly-monochromatic 1-dimensional subcube. Needs d >= m+1
// generators and the endpoint convention.
struct StaircaseStep {
    SubcubeWitness witness;
    long long s = 0;        // the two staircase levels that collide
    long long s_prime = 0;  // s < s_prime
};

inline StaircaseStep shelah_step(const CubeColouring& cc) {
    if (!cc.include_endpoint)
        throw InvalidArgument("shelah_step: needs the endpoint digit convention");
    if (cc.d < cc.m + 1) throw InvalidArgument("shelah_step: needs dimension >= m+1");
    const long long m = cc.m;
    auto staircase_point = [&](long long s) {
        std::vector<long long> coords(static_cast<std::size_t>(cc.d), 0);
        for (long long i = 0; i < s; ++i) coords[static_cast<std::size_t>(i)] = cc.k - 1;
        for (long long i = s; i < m + 1; ++i) coords[static_cast<std::size_t>(i)] = cc.k;
        return coords;
    };
    for (long long s = 0; s <= m; ++s) {
        const int col = cc.at(staircase_point(s));
        for (long long s0 = 0; s0 < s; ++s0) {
            if (cc.at(staircase_point(s0)) != col) continue;
            Subcube sc;
            sc.fixed.assign(static_cast<std::size_t>(cc.d), 0);
            sc.groups.assign(1, {});
            for (long long i = 0; i < s0; ++i) sc.fixed[static_cast<std::size_t>(i)] = cc.k - 1;
            for (long long i = s0; i < s; ++i) {
                sc.fixed[static_cast<std::size_t>(i)] = -1;
                sc.groups[0].push_back(i);
            }
            for (long long i = s; i < m + 1; ++i) sc.fixed[static_cast<std::size_t>(i)] = cc.k;
            std::vector<long long> zeros(1, 0);
            StaircaseStep step;
            step.witness = SubcubeWitness{sc, SubcubeKind::WeaklyMonochromatic, cc.at(sc.point(zeros))};
            step.s = s0;
            step.s_prime = s;
            // The construction guarantees agreement only at the swap pair
            // (k-1, k); that is exactly what weak monochromaticity asks of a
            // line, so the witness is sound by construction.
            return step;
        }
    }
    throw PreconditionViolated("shelah_step: pigeonhole failed on m+1 staircase points");
}

// ---------------------------------------------------------------------------
// Bound recursion trace
// ---------------------------------------------------------------------------

// Tree of the double recursion behind the finite bounds: the threshold for
// length k reduces to degree-m fans (Claim), a degree-d fan bound multiplies
// a degree-(d-1) fan bound by a length-(k-1) threshold on a rebased palette,
// and the numbers explode accordingly. Numeric values are filled in only
// where they stay tractable; elsewhere nodes stay symbolic.
struct TraceNode {
    std::string kind;  // "theorem" | "claim" | "closed-form" | "symbolic"
    long long k = 0;
    Int m = 0;  // palette size (may be astronomically large in inner nodes)
    long long d = -1;  // fan degree for claim nodes, -1 otherwise
    std::optional<Int> value;
    std::string formula;
    std::vector<TraceNode> children;
};

namespace detail {

constexpr long long kTracePaletteCap = 1 << 20;
constexpr long long kTraceDegreeCap = 64;

inline TraceNode trace_theorem(long long k, const Int& m, int depth);

inline TraceNode trace_claim(long long k, const Int& m, long long d, int depth) {
    TraceNode node;
    node.kind = "claim";
    node.k = k;
    node.m = m;
    node.d = d;
    if (d == 0) {
        node.kind = "closed-form";
        node.value = Int(1);
        node.formula = "degree-0 fan: a single cell suffices";
        return node;
    }
    if (m > kTracePaletteCap || d > kTraceDegreeCap) {
        node.kind = "symbolic";
        node.formula = "N(k,d) = 4k * N(k,d-1) * W(k-1, m^d * N(k,d-1)^d)";
        return node;
    }
    node.formula = "N(k,d) = 4k * N1 * N2, N1 = N(k,d-1), N2 = W(k-1, m^d * N1^d)";
    TraceNode inner = trace_claim(k, m, d - 1, depth);
    if (inner.value) {
        const Int n1 = *inner.value;
        Int palette = 1;
        for (long long i = 0; i < d; ++i) palette *= m * n1;
        TraceNode outer = trace_theorem(k - 1, palette, depth - 1);
        if (outer.value) node.value = Int(4) * k * n1 * *outer.value;
        node.children.push_back(std::move(inner));
        node.children.push_back(std::move(outer));
    } else {
        node.children.push_back(std::move(inner));
    }
    if (!node.value) node.kind = "symbolic";
    return node;
}

inline TraceNode trace_theorem(long long k, const Int& m, int depth) {
    TraceNode node;
    node.kind = "theorem";
    node.k = k;
    node.m = m;
    if (k == 1) {
        node.kind = "closed-form";
        node.value = Int(1);
        node.formula = "W(1,m) = 1";
        return node;
    }
    if (k == 2) {
        node.kind = "closed-form";
        node.value = m + 1;
        node.formula = "W(2,m) = m + 1 (pigeonhole)";
        return node;
    }
    if (depth <= 0 || m > kTracePaletteCap) {
        node.kind = "symbolic";
        node.formula = "W(k,m) = N(k,m): a degree-m fan forces a monochromatic progression";
        return node;
    }
    node.formula = "W(k,m) <= N(k,m)";
    TraceNode claim = trace_claim(k, m, m.convert_to<long long>(), depth);
    node.value = claim.value;
    node.children.push_back(std::move(claim));
    if (!node.value) node.kind = "symbolic";
    return node;
}

}  // namespace detail

inline TraceNode vdw_trace(long long k, long long m, int depth = 2) {
    if (k < 1 || m < 1) throw InvalidArgument("vdw_trace: need k,m >= 1");
    return detail::trace_theorem(k, Int(m), depth);
}

}  // namespace szlab
