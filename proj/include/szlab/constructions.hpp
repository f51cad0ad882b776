#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "core.hpp"
#include "errors.hpp"
#include "rational.hpp"
#include "residue_set.hpp"

namespace szlab {

struct BehrendParams {
    long long n = 0;  // target interval length
    long long d = 0;  // dimension
    long long m = 0;  // base
    long long r = 0;  // chosen squared radius, 0 <= r <= d*m^2
};

namespace detail {

// First d base-M digits of v (least significant first), or nullopt when any of
// them leaves the constrained alphabet {0..floor(M/10)}.
inline std::optional<std::vector<long long>> constrained_digits(long long v, long long d, long long m) {
    const long long cap = m / 10;
    std::vector<long long> digs(static_cast<std::size_t>(d));
    for (long long i = 0; i < d; ++i) {
        const long long dig = v % m;
        if (dig > cap) return std::nullopt;
        digs[static_cast<std::size_t>(i)] = dig;
        v /= m;
    }
    return digs;
}

inline long long sum_sq(const std::vector<long long>& digs) {
    long long s = 0;
    for (long long x : digs) s += x * x;
    return s;
}

}  // namespace detail

// Sphere-shell digit construction: elements of [1,N] whose first d base-M digits
// lie in {0..floor(M/10)} and have squared length exactly R; higher digits free.
// Small digits never carry when two elements are added, which is what confines
// nontrivial 3-term progressions to steps r = 0 mod M^d (tested exhaustively).
// R unset: deterministic argmax of |A_R| over 0..d*M^2, smallest R on ties.
inline std::pair<ResidueSet, BehrendParams> behrend_set(long long n, long long d, long long m,
                                                        std::optional<long long> radius = std::nullopt) {
    if (m < 10) throw InvalidArgument("behrend_set: base M < 10 degenerates the digit alphabet");
    if (d < 1) throw InvalidArgument("behrend_set: dimension d must be >= 1");
    long long md = 1;
    for (long long i = 0; i < d; ++i) {
        md *= m;
        if (md > n) throw InvalidArgument("behrend_set: M^d exceeds N");
    }
    if (radius && (*radius < 0 || *radius > d * m * m))
        throw InvalidArgument("behrend_set: R outside [0, d*M^2]");

    const long long rmax = d * (m / 10) * (m / 10);
    std::vector<long long> shell_count(static_cast<std::size_t>(rmax + 1), 0);
    // census of digit vectors per shell (alphabet is tiny, d is tiny: direct product scan)
    {
        std::vector<long long> digs(static_cast<std::size_t>(d), 0);
        const long long cap = m / 10;
        while (true) {
            shell_count[static_cast<std::size_t>(detail::sum_sq(digs))]++;
            long long i = 0;
            while (i < d && digs[static_cast<std::size_t>(i)] == cap) {
                digs[static_cast<std::size_t>(i)] = 0;
                ++i;
            }
            if (i == d) break;
            ++digs[static_cast<std::size_t>(i)];
        }
    }

    auto collect = [&](long long rr) {
        std::vector<long long> out;
        for (long long v = 1; v <= n; ++v) {
            auto digs = detail::constrained_digits(v, d, m);
            if (digs && detail::sum_sq(*digs) == rr) out.push_back(v);
        }
        return out;
    };

    long long chosen;
    if (radius) {
        chosen = *radius;
    } else {
        // |A_R| = shell_count[R] * #\{admissible high parts\}; the high-part count is
        // the same for every vector up to boundary effects near N, so pick by exact count.
        long long best_r = 0, best_sz = -1;
        for (long long rr = 0; rr <= rmax; ++rr) {
            if (shell_count[static_cast<std::size_t>(rr)] == 0) continue;
            const long long sz = static_cast<long long>(collect(rr).size());
            if (sz > best_sz) {
                best_sz = sz;
                best_r = rr;
            }
        }
        chosen = best_r;
    }
    ResidueSet a{0, n, collect(chosen)};
    return {std::move(a), BehrendParams{n, d, m, chosen}};
}

struct BehrendAutoConfig {
    double c = 0.21714724095162588;  // 1/(2 ln 10); keeps M >= 10 feasible at desk scale
};

// Dimension/base recipe d = ceil(c ln(1/delta)), M = max(10, ceil(delta^{-c})),
// then argmax-R delegation.
inline std::pair<ResidueSet, BehrendParams> behrend_auto(long long n, double delta,
                                                         BehrendAutoConfig cfg = {}) {
    if (!(delta > 0.0) || delta >= 1.0) throw InvalidArgument("behrend_auto: delta must be in (0,1)");
    const double l = std::log(1.0 / delta);
    long long d = static_cast<long long>(std::ceil(cfg.c * l));
    if (d < 1) d = 1;
    long long m = static_cast<long long>(std::ceil(std::exp(cfg.c * l)));
    if (m < 10) m = 10;
    long long md = 1;
    for (long long i = 0; i < d; ++i) {
        md *= m;
        if (md > n)
            throw InvalidArgument("behrend_auto: M^d > N for delta=" + std::to_string(delta));
    }
    return behrend_set(n, d, m);
}

// {n in [1,N] : ||n*alpha||_{R/Z} <= theta}, exact rational arithmetic.
inline ResidueSet bohr_set(const Rat& alpha, const Rat& theta, long long n) {
    if (!(theta > 0) || theta > Rat(1, 2)) throw InvalidArgument("bohr_set: theta outside (0, 1/2]");
    std::vector<long long> e;
    for (long long v = 1; v <= n; ++v) {
        Rat x = alpha * v;
        // reduce to [0,1)
        Int fl = rat_num(x) / rat_den(x);
        if (Rat(fl) > x) fl -= 1;
        Rat frac = x - Rat(fl);
        Rat dist = frac <= Rat(1, 2) ? frac : Rat(1) - frac;
        if (dist <= theta) e.push_back(v);
    }
    return ResidueSet{0, n, std::move(e)};
}

// Float variant for irrational alpha. Memberships within `band` of the theta
// boundary are indeterminate at double precision: reported separately, excluded
// from the set, and skipped by invariant checks.
struct BohrResult {
    ResidueSet set;
    std::vector<long long> boundary;
};

inline BohrResult bohr_set(double alpha, double theta, long long n, double band = 1e-12) {
    if (!(theta > 0.0) || theta > 0.5) throw InvalidArgument("bohr_set: theta outside (0, 1/2]");
    std::vector<long long> e, boundary;
    for (long long v = 1; v <= n; ++v) {
        const double x = alpha * static_cast<double>(v);
        const double frac = x - std::floor(x);
        const double dist = frac <= 0.5 ? frac : 1.0 - frac;
        if (std::fabs(dist - theta) <= band)
            boundary.push_back(v);
        else if (dist <= theta)
            e.push_back(v);
    }
    return BohrResult{ResidueSet{0, n, std::move(e)}, std::move(boundary)};
}

// Smallest r in [1, r_max] with ||alpha r^2|| < eps, or nullopt. The guarantee
// is existence for *some* r, with no bound, so r_max policy belongs to the caller.
inline std::optional<long long> quadratic_recurrence_search(double alpha, double eps, long long r_max) {
    if (!(eps > 0.0)) throw InvalidArgument("quadratic_recurrence_search: eps must be > 0");
    for (long long r = 1; r <= r_max; ++r) {
        const double x = alpha * static_cast<double>(r) * static_cast<double>(r);
        const double frac = x - std::floor(x);
        const double dist = frac <= 0.5 ? frac : 1.0 - frac;
        if (dist < eps) return r;
    }
    return std::nullopt;
}

inline std::optional<long long> quadratic_recurrence_search(const Rat& alpha, const Rat& eps, long long r_max) {
    if (!(eps > 0)) throw InvalidArgument("quadratic_recurrence_search: eps must be > 0");
    for (long long r = 1; r <= r_max; ++r) {
        Rat x = alpha * r * r;
        Int fl = rat_num(x) / rat_den(x);
        if (Rat(fl) > x) fl -= 1;
        Rat frac = x - Rat(fl);
        Rat dist = frac <= Rat(1, 2) ? frac : Rat(1) - frac;
        if (dist < eps) return r;
    }
    return std::nullopt;
}

// Second-difference identity behind the search: for any n,
// alpha n^2/2 - 2 alpha (n+r)^2/2 + alpha (n+2r)^2/2 = alpha r^2. Exact.
inline bool quadratic_seconddiff_identity(const Rat& alpha, long long n, long long r) {
    const Rat half(1, 2);
    Rat lhs = alpha * n * n * half - 2 * (alpha * (n + r) * (n + r) * half) +
              alpha * (n + 2 * r) * (n + 2 * r) * half;
    return lhs == alpha * r * r;
}

}  // namespace szlab
