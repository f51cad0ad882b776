#pragma once

// Test-side oracles and instance builders. Oracles deliberately share no code
// with the library: different data structures, different loop shapes.

#include <szlab/core.hpp>
#include <szlab/rational.hpp>
#include <szlab/residue_set.hpp>
#include <szlab/rng.hpp>

#include <set>
#include <vector>

namespace testutil {

// Nested-loop progression counter over a std::set, recomputing every term from
// scratch by explicit modular reduction.
inline szlab::APCount oracle_count_progressions(const szlab::ResidueSet& a, long long k) {
    std::set<long long> mem(a.elements.begin(), a.elements.end());
    szlab::APCount out{k, 0, 0};
    const long long n = a.universe();
    if (n <= 0) return out;
    if (a.interval_mode()) {
        for (long long s = 1; s <= n; ++s)
            for (long long r = -(n - 1); r <= n - 1; ++r) {
                if (k == 1 && r != 0) continue;
                bool ok = true;
                for (long long j = 0; j < k && ok; ++j) {
                    const long long v = s + j * r;
                    ok = v >= 1 && v <= n && mem.count(v) > 0;
                }
                if (ok) {
                    ++out.total_ordered;
                    if (r == 0) ++out.trivial;
                }
            }
    } else {
        for (long long s = 0; s < n; ++s)
            for (long long r = 0; r < n; ++r) {
                bool ok = true;
                for (long long j = 0; j < k && ok; ++j)
                    ok = mem.count((((s + j * r) % n) + n) % n) > 0;
                if (ok) {
                    ++out.total_ordered;
                    if (r == 0) ++out.trivial;
                }
            }
    }
    return out;
}

inline szlab::Rat oracle_varnavides(const szlab::ResidueSet& a, long long m_window, long long lambda,
                                    long long k = 3) {
    std::set<long long> mem(a.elements.begin(), a.elements.end());
    const long long n = a.modulus;
    long long hits = 0;
    for (long long base = 0; base < n; ++base)
        for (long long m = 1; m <= m_window; ++m)
            for (long long r = 1; r <= m_window; ++r) {
                bool ok = true;
                for (long long j = 0; j < k && ok; ++j)
                    ok = mem.count((((base + m + j * lambda * r) % n) + n) % n) > 0;
                if (ok) ++hits;
            }
    return szlab::Rat(hits) / szlab::Rat(n * m_window * m_window);
}

inline bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace testutil
