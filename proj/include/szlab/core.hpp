#pragma once

#include <map>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "residue_set.hpp"

namespace szlab {

// Ordered (n,r)-pair counts of k-term progressions, r = 0 included.
struct APCount {
    long long k = 0;
    long long total_ordered = 0;
    long long trivial = 0;  // r = 0 contributions; equals |A| exactly
    long long nontrivial() const { return total_ordered - trivial; }
};

namespace detail {
inline long long mod_reduce(long long v, long long n) {
    long long r = v % n;
    return r < 0 ? r + n : r;
}
}  // namespace detail

// Exact ordered count of (n, r) with n, n+r, ..., n+(k-1)r all in A.
// Cyclic mode: (n, r) ranges over all of (Z/NZ)^2, wraparound arithmetic.
// Interval mode: n in [1,len], r any signed integer keeping the whole
// progression inside [1,len]; for k = 1 that constraint is vacuous, so r
// ranges over {0} alone by convention and total = |A| = trivial.
inline APCount count_progressions(const ResidueSet& a, long long k) {
    if (k < 1) throw InvalidArgument("count_progressions: k must be >= 1");
    const long long n = a.universe();
    APCount out{k, 0, 0};
    if (a.elements.empty() || n <= 0) return out;
    if (k == 1) {
        // every n in A works; cyclic mode pairs it with every r, interval mode
        // with r = 0 only (see header comment).
        out.trivial = a.size();
        out.total_ordered = a.interval_mode() ? a.size() : a.size() * n;
        return out;
    }
    std::vector<char> in(static_cast<std::size_t>(n + 1), 0);
    for (long long e : a.elements) in[static_cast<std::size_t>(e)] = 1;

    if (a.interval_mode()) {
        const long long len = a.length;
        for (long long s = 1; s <= len; ++s) {
            if (!in[static_cast<std::size_t>(s)]) continue;
            for (long long r = -(len - 1); r <= len - 1; ++r) {
                const long long last = s + (k - 1) * r;
                if (last < 1 || last > len) continue;
                bool ok = true;
                long long v = s;
                for (long long j = 1; j < k && ok; ++j) {
                    v += r;
                    ok = in[static_cast<std::size_t>(v)];
                }
                if (ok) {
                    ++out.total_ordered;
                    if (r == 0) ++out.trivial;
                }
            }
        }
    } else {
        for (long long s = 0; s < n; ++s) {
            if (!in[static_cast<std::size_t>(s)]) continue;
            for (long long r = 0; r < n; ++r) {
                bool ok = true;
                long long v = s;
                for (long long j = 1; j < k && ok; ++j) {
                    v = detail::mod_reduce(v + r, n);
                    ok = in[static_cast<std::size_t>(v)];
                }
                if (ok) {
                    ++out.total_ordered;
                    if (r == 0) ++out.trivial;
                }
            }
        }
    }
    return out;
}

// {x, x+a, x+b, x+a+b} with a, b != 0, all four in the witnessing set.
struct Parallelogram {
    long long x = 0, a = 0, b = 0;
};

// Difference-bucket pigeonhole: two distinct pairs with the same positive
// difference d at base points y < y' give the witness {y, y+d, y', y'+d},
// i.e. x=y, a=d, b=y'-y. Each 4-set is emitted once, from its representative
// with a <= b. a = b (three distinct values) counts: the invariant only needs
// the four sums to lie in the set. Works on the element list as plain integers,
// so any translated interval ([-N,N] included) behaves identically.
inline std::vector<Parallelogram> find_parallelograms(const ResidueSet& a) {
    std::map<long long, std::vector<long long>> buckets;  // d -> base points y (ascending)
    const auto& e = a.elements;
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j)
            buckets[e[j] - e[i]].push_back(e[i]);
    std::vector<Parallelogram> out;
    for (const auto& [d, bases] : buckets) {
        for (std::size_t i = 0; i < bases.size(); ++i)
            for (std::size_t j = i + 1; j < bases.size(); ++j) {
                const long long b = bases[j] - bases[i];
                if (d <= b) out.push_back({bases[i], d, b});
            }
    }
    return out;
}

// Minimum of total_ordered/N^2 over all A subset of Z/NZ with |A| >= delta*N.
// Monotonicity of total_ordered under inclusion puts the minimum at
// |A| = ceil(delta*N), so only that size is enumerated.
inline Rat min_density_count(long long n, const Rat& delta, long long k, long long guard = 18) {
    if (n > guard)
        throw ResourceLimit("min_density_count: N=" + std::to_string(n) +
                            " exceeds exhaustive-enumeration guard " + std::to_string(guard));
    if (k < 1) throw InvalidArgument("min_density_count: k must be >= 1");
    if (n < 1) throw InvalidArgument("min_density_count: N must be >= 1");
    // m = ceil(delta * n), clamped to [0, n]
    const Rat dn = delta * n;
    Int m_int = rat_num(dn) / rat_den(dn);
    if (Rat(m_int) < dn) m_int += 1;
    long long m = static_cast<long long>(m_int);
    if (m < 0) m = 0;
    if (m > n) throw InvalidArgument("min_density_count: delta*N exceeds N");
    if (m == 0) return Rat(0);

    std::vector<long long> pick(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) pick[static_cast<std::size_t>(i)] = i;
    long long best = -1;
    while (true) {
        ResidueSet a{n, 0, pick};
        const long long total = count_progressions(a, k).total_ordered;
        if (best < 0 || total < best) best = total;
        // next combination
        long long i = m - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - m + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (long long j = i + 1; j < m; ++j)
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    return Rat(best) / Rat(n * n);
}

// E_{n in Z/NZ} E_{1<=m,r<=M} [n+m, n+m+lambda*r, ..., n+m+(k-1)*lambda*r all in A].
inline Rat varnavides_count(const ResidueSet& a, long long m_window, long long lambda, long long k = 3) {
    if (a.interval_mode()) throw InvalidArgument("varnavides_count: cyclic sets only");
    const long long n = a.modulus;
    if (m_window < 1 || m_window >= n) throw InvalidArgument("varnavides_count: need 1 <= M < N");
    if (k < 1) throw InvalidArgument("varnavides_count: k must be >= 1");
    lambda = detail::mod_reduce(lambda, n);
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    for (long long e : a.elements) in[static_cast<std::size_t>(e)] = 1;
    long long hits = 0;
    for (long long base = 0; base < n; ++base)
        for (long long m = 1; m <= m_window; ++m)
            for (long long r = 1; r <= m_window; ++r) {
                const long long step = detail::mod_reduce(lambda * r, n);
                long long v = detail::mod_reduce(base + m, n);
                bool ok = true;
                for (long long j = 0; j < k && ok; ++j) {
                    ok = in[static_cast<std::size_t>(v)];
                    v = detail::mod_reduce(v + step, n);
                }
                if (ok) ++hits;
            }
    return Rat(hits) / Rat(n * m_window * m_window);
}

}  // namespace szlab
