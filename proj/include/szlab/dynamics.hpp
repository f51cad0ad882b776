#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"
#include "finite_system.hpp"
#include "numeric.hpp"

namespace szlab {

// ---------------------------------------------------------------------------
// Conditional expectation onto a partition
// ---------------------------------------------------------------------------

// Weighted atom averages, constant per atom. On atoms of measure zero the
// projection is not pinned down by the measure; it is set to zero there.
template <class S>
std::vector<S> cond_exp(const std::vector<S>& f, const Factor& B, const FiniteSystem& sys) {
    using ST = ScalarTraits<S>;
    if (static_cast<long long>(f.size()) != sys.n)
        throw InvalidArgument("cond_exp: one value per state required");
    if (static_cast<long long>(B.atom_label.size()) != sys.n)
        throw InvalidArgument("cond_exp: factor does not match the system");
    std::vector<S> num(static_cast<std::size_t>(B.num_atoms), ST::from_int(0));
    std::vector<Rat> den(static_cast<std::size_t>(B.num_atoms), Rat(0));
    for (long long x = 0; x < sys.n; ++x) {
        const auto a = static_cast<std::size_t>(B.atom_label[static_cast<std::size_t>(x)]);
        num[a] = num[a] + ST::from_rat(sys.mu[static_cast<std::size_t>(x)]) * f[static_cast<std::size_t>(x)];
        den[a] += sys.mu[static_cast<std::size_t>(x)];
    }
    std::vector<S> atom_value(static_cast<std::size_t>(B.num_atoms), ST::from_int(0));
    for (std::size_t a = 0; a < atom_value.size(); ++a)
        if (den[a] != 0) atom_value[a] = num[a] * ST::from_rat(Rat(1) / den[a]);
    std::vector<S> out(static_cast<std::size_t>(sys.n));
    for (long long x = 0; x < sys.n; ++x)
        out[static_cast<std::size_t>(x)] = atom_value[static_cast<std::size_t>(B.atom_label[static_cast<std::size_t>(x)])];
    return out;
}

template <class S>
S integral(const std::vector<S>& f, const FiniteSystem& sys) {
    using ST = ScalarTraits<S>;
    std::vector<S> terms;
    terms.reserve(f.size());
    for (long long x = 0; x < sys.n; ++x)
        terms.push_back(ST::from_rat(sys.mu[static_cast<std::size_t>(x)]) * f[static_cast<std::size_t>(x)]);
    return ST::reduce(std::move(terms));
}

template <class S>
S l2_norm_sq(const std::vector<S>& f, const FiniteSystem& sys) {
    using ST = ScalarTraits<S>;
    std::vector<S> terms;
    terms.reserve(f.size());
    for (long long x = 0; x < sys.n; ++x) {
        const S v = f[static_cast<std::size_t>(x)];
        terms.push_back(ST::from_rat(sys.mu[static_cast<std::size_t>(x)]) * v * v);
    }
    return ST::reduce(std::move(terms));
}

// ---------------------------------------------------------------------------
// Ergodic averages
// ---------------------------------------------------------------------------

namespace detail {

struct OrbitIndex {
    std::vector<std::vector<long long>> orbs;   // orbit id -> states in cycle order
    std::vector<long long> orbit_of;            // state -> orbit id
    std::vector<long long> pos_in_orbit;        // state -> position inside its orbit
};

inline OrbitIndex orbit_index(const FiniteSystem& sys) {
    OrbitIndex oi;
    oi.orbs = orbits(sys);
    oi.orbit_of.assign(static_cast<std::size_t>(sys.n), -1);
    oi.pos_in_orbit.assign(static_cast<std::size_t>(sys.n), -1);
    for (std::size_t id = 0; id < oi.orbs.size(); ++id)
        for (std::size_t p = 0; p < oi.orbs[id].size(); ++p) {
            oi.orbit_of[static_cast<std::size_t>(oi.orbs[id][p])] = static_cast<long long>(id);
            oi.pos_in_orbit[static_cast<std::size_t>(oi.orbs[id][p])] = static_cast<long long>(p);
        }
    return oi;
}

}  // namespace detail

// E_{1<=r<=N} (T^r f)(x) with (T^r f)(x) = f(T^r x). Exact for any N, however
// large: along the orbit of x the summand is periodic with the orbit length,
// so the sum splits into whole cycles plus a short remainder.
template <class S>
std::vector<S> ergodic_average(const std::vector<S>& f, const FiniteSystem& sys, const Int& N) {
    using ST = ScalarTraits<S>;
    if (N < 1) throw InvalidArgument("ergodic_average: N must be >= 1");
    if (static_cast<long long>(f.size()) != sys.n)
        throw InvalidArgument("ergodic_average: one value per state required");
    const auto oi = detail::orbit_index(sys);
    std::vector<S> out(static_cast<std::size_t>(sys.n), ST::from_int(0));
    for (const auto& orb : oi.orbs) {
        const long long L = static_cast<long long>(orb.size());
        const Int q = N / L;
        const long long rem = static_cast<long long>(N % L);
        const S c_cycle = ST::from_rat(Rat(q, N));      // weight of one full cycle pass
        const S c_tail = ST::from_rat(Rat(Int(1), N));  // weight of one remainder term
        S cycle_sum = ST::from_int(0);
        for (long long p = 0; p < L; ++p) cycle_sum = cycle_sum + f[static_cast<std::size_t>(orb[static_cast<std::size_t>(p)])];
        for (long long p = 0; p < L; ++p) {
            S tail = ST::from_int(0);
            for (long long r = 1; r <= rem; ++r)
                tail = tail + f[static_cast<std::size_t>(orb[static_cast<std::size_t>((p + r) % L)])];
            out[static_cast<std::size_t>(orb[static_cast<std::size_t>(p)])] = cycle_sum * c_cycle + tail * c_tail;
        }
    }
    return out;
}

// E_{1<=r<=N} integral of f * T^r f * ... * T^{(k-1)r} f. The integrand at a
// state x depends on r only modulo the orbit length of x, so the r-average
// reduces per orbit exactly as in ergodic_average.
template <class S>
S multi_recurrence_average(const std::vector<S>& f, const FiniteSystem& sys, long long k,
                           const Int& N) {
    using ST = ScalarTraits<S>;
    if (k < 1) throw InvalidArgument("multi_recurrence_average: k must be >= 1");
    if (N < 1) throw InvalidArgument("multi_recurrence_average: N must be >= 1");
    if (static_cast<long long>(f.size()) != sys.n)
        throw InvalidArgument("multi_recurrence_average: one value per state required");
    const auto oi = detail::orbit_index(sys);
    std::vector<S> state_terms;
    state_terms.reserve(static_cast<std::size_t>(sys.n));
    for (long long x = 0; x < sys.n; ++x) {
        const auto& orb = oi.orbs[static_cast<std::size_t>(oi.orbit_of[static_cast<std::size_t>(x)])];
        const long long L = static_cast<long long>(orb.size());
        const long long p = oi.pos_in_orbit[static_cast<std::size_t>(x)];
        const Int q = N / L;
        const long long rem = static_cast<long long>(N % L);
        auto integrand = [&](long long r) {
            S prod = ST::from_int(1);
            for (long long j = 0; j < k; ++j)
                prod = prod * f[static_cast<std::size_t>(orb[static_cast<std::size_t>((p + j * r) % L)])];
            return prod;
        };
        S cycle_sum = ST::from_int(0);
        for (long long r = 1; r <= L; ++r) cycle_sum = cycle_sum + integrand(r);
        S tail = ST::from_int(0);
        for (long long r = 1; r <= rem; ++r) tail = tail + integrand(r);
        const S avg = cycle_sum * ST::from_rat(Rat(q, N)) + tail * ST::from_rat(Rat(Int(1), N));
        state_terms.push_back(ST::from_rat(sys.mu[static_cast<std::size_t>(x)]) * avg);
    }
    return ST::reduce(std::move(state_terms));
}

// Sequence variant with one complex function per shift slot:
// E_{1<=r<=N} integral of f_0 * T^r f_1 * ... * T^{(len-1)r} f_{len-1}.
// Plain ascending accumulation; this path is float-only diagnostics.
inline std::complex<double> multi_recurrence_average_seq(
    const std::vector<std::vector<std::complex<double>>>& fs, const FiniteSystem& sys,
    const Int& N) {
    if (fs.empty()) throw InvalidArgument("multi_recurrence_average_seq: need at least one function");
    if (N < 1) throw InvalidArgument("multi_recurrence_average_seq: N must be >= 1");
    for (const auto& f : fs)
        if (static_cast<long long>(f.size()) != sys.n)
            throw InvalidArgument("multi_recurrence_average_seq: one value per state required");
    const auto oi = detail::orbit_index(sys);
    const long long k = static_cast<long long>(fs.size());
    std::complex<double> total = 0.0;
    for (long long x = 0; x < sys.n; ++x) {
        const auto& orb = oi.orbs[static_cast<std::size_t>(oi.orbit_of[static_cast<std::size_t>(x)])];
        const long long L = static_cast<long long>(orb.size());
        const long long p = oi.pos_in_orbit[static_cast<std::size_t>(x)];
        const Int q = N / L;
        const long long rem = static_cast<long long>(N % L);
        auto integrand = [&](long long r) {
            std::complex<double> prod = 1.0;
            for (long long j = 0; j < k; ++j)
                prod *= fs[static_cast<std::size_t>(j)]
                          [static_cast<std::size_t>(orb[static_cast<std::size_t>((p + j * r) % L)])];
            return prod;
        };
        std::complex<double> cycle_sum = 0.0;
        for (long long r = 1; r <= L; ++r) cycle_sum += integrand(r);
        std::complex<double> tail = 0.0;
        for (long long r = 1; r <= rem; ++r) tail += integrand(r);
        const double cq = static_cast<double>(Rat(q, N));
        const double ct = static_cast<double>(Rat(Int(1), N));
        total += static_cast<double>(sys.mu[static_cast<std::size_t>(x)]) * (cycle_sum * cq + tail * ct);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Orbit-based classification of observables
// ---------------------------------------------------------------------------

enum class ObservableKind { Invariant, Eigenfunction, Periodic, Quasiperiodic, Generic };

struct ObservableClass {
    ObservableKind kind = ObservableKind::Generic;
    Int period = 1;     // least p >= 1 with T^p f = f (within tolerance)
    double theta = 0.0; // eigenfunction phase in [0,1): T f = e^{2 pi i theta} f
    long long dim = 0;  // dimension of span{T^j f}
};

namespace detail {

// Least q dividing L such that rotating the pattern by q reproduces it.
template <class EqF>
long long pattern_period(long long L, EqF&& eq_rotated) {
    for (long long q = 1; q <= L; ++q) {
        if (L % q != 0) continue;
        if (eq_rotated(q)) return q;
    }
    return L;
}

}  // namespace detail

// Classification by the linear algebra of the orbit {T^j f}. Precedence:
// a singleton orbit is invariant; a one-dimensional orbit span is an
// eigenfunction; an orbit that repeats before the permutation itself does is
// periodic; otherwise the span dimension decides quasiperiodic (proper
// subspace) versus generic (full span).
inline ObservableClass classify_function(const std::vector<std::complex<double>>& f,
                                         const FiniteSystem& sys, double tol = 1e-9) {
    if (static_cast<long long>(f.size()) != sys.n)
        throw InvalidArgument("classify_function: one value per state required");
    if (tol <= 0) throw InvalidArgument("classify_function: tolerance must be positive");
    double scale = 0.0;
    for (const auto& v : f) scale = std::max(scale, std::abs(v));
    const double thr = tol * std::max(scale, 1e-300);

    ObservableClass out;
    // Per-orbit pattern periods, combined by lcm.
    const auto oi = detail::orbit_index(sys);
    Int period = 1;
    for (const auto& orb : oi.orbs) {
        const long long L = static_cast<long long>(orb.size());
        const long long q = detail::pattern_period(L, [&](long long shift) {
            for (long long p = 0; p < L; ++p)
                if (std::abs(f[static_cast<std::size_t>(orb[static_cast<std::size_t>((p + shift) % L)])] -
                             f[static_cast<std::size_t>(orb[static_cast<std::size_t>(p)])]) > thr)
                    return false;
            return true;
        });
        const Int qi(q);
        period = period / boost::multiprecision::gcd(period, qi) * qi;
    }
    out.period = period;

    // Krylov rank with complex Gaussian elimination.
    std::vector<std::vector<std::complex<double>>> basis;   // reduced rows
    std::vector<std::size_t> pivot;                         // pivot column per row
    std::vector<std::complex<double>> cur = f;
    long long rank = 0;
    for (long long step = 0; step <= sys.n; ++step) {
        std::vector<std::complex<double>> v = cur;
        for (std::size_t b = 0; b < basis.size(); ++b) {
            const std::complex<double> coef = v[pivot[b]] / basis[b][pivot[b]];
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= coef * basis[b][i];
        }
        std::size_t piv = v.size();
        double best = thr;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (std::abs(v[i]) > best) {
                best = std::abs(v[i]);
                piv = i;
            }
        if (piv == v.size()) break;  // orbit span stabilized
        basis.push_back(std::move(v));
        pivot.push_back(piv);
        ++rank;
        std::vector<std::complex<double>> next(cur.size());
        for (long long x = 0; x < sys.n; ++x)
            next[static_cast<std::size_t>(x)] = cur[static_cast<std::size_t>(sys.shift[static_cast<std::size_t>(x)])];
        cur = std::move(next);
    }
    out.dim = rank;

    if (out.period == 1 || rank == 0) {
        out.kind = ObservableKind::Invariant;
        return out;
    }
    if (rank == 1) {
        // T f = lambda f: read the ratio off the largest component.
        std::size_t arg = 0;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (std::abs(f[i]) > std::abs(f[arg])) arg = i;
        const std::complex<double> lam =
            f[static_cast<std::size_t>(sys.shift[arg])] / f[arg];
        double theta = std::arg(lam) / (2 * 3.141592653589793238462643383279502884);
        if (theta < 0) theta += 1.0;
        out.kind = ObservableKind::Eigenfunction;
        out.theta = theta;
        return out;
    }
    if (out.period < global_period(sys)) {
        out.kind = ObservableKind::Periodic;
        return out;
    }
    out.kind = rank < sys.n ? ObservableKind::Quasiperiodic : ObservableKind::Generic;
    return out;
}

struct ObservableClassExact {
    ObservableKind kind = ObservableKind::Generic;
    Int period = 1;
    Rat theta = 0;  // 0 or 1/2: real eigenfunctions have ratio +-1
    long long dim = 0;
};

// Exact-rational classification for real-valued observables.
inline ObservableClassExact classify_function_exact(const std::vector<Rat>& f,
                                                    const FiniteSystem& sys) {
    if (static_cast<long long>(f.size()) != sys.n)
        throw InvalidArgument("classify_function_exact: one value per state required");
    ObservableClassExact out;
    const auto oi = detail::orbit_index(sys);
    Int period = 1;
    for (const auto& orb : oi.orbs) {
        const long long L = static_cast<long long>(orb.size());
        const long long q = detail::pattern_period(L, [&](long long shift) {
            for (long long p = 0; p < L; ++p)
                if (f[static_cast<std::size_t>(orb[static_cast<std::size_t>((p + shift) % L)])] !=
                    f[static_cast<std::size_t>(orb[static_cast<std::size_t>(p)])])
                    return false;
            return true;
        });
        const Int qi(q);
        period = period / boost::multiprecision::gcd(period, qi) * qi;
    }
    out.period = period;

    std::vector<std::vector<Rat>> basis;
    std::vector<std::size_t> pivot;
    std::vector<Rat> cur = f;
    long long rank = 0;
    for (long long step = 0; step <= sys.n; ++step) {
        std::vector<Rat> v = cur;
        for (std::size_t b = 0; b < basis.size(); ++b) {
            const Rat coef = v[pivot[b]] / basis[b][pivot[b]];
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= coef * basis[b][i];
        }
        std::size_t piv = v.size();
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) {
                piv = i;
                break;
            }
        if (piv == v.size()) break;
        basis.push_back(std::move(v));
        pivot.push_back(piv);
        ++rank;
        std::vector<Rat> next(cur.size());
        for (long long x = 0; x < sys.n; ++x)
            next[static_cast<std::size_t>(x)] = cur[static_cast<std::size_t>(sys.shift[static_cast<std::size_t>(x)])];
        cur = std::move(next);
    }
    out.dim = rank;

    if (out.period == 1 || rank == 0) {
        out.kind = ObservableKind::Invariant;
        return out;
    }
    if (rank == 1) {
        out.kind = ObservableKind::Eigenfunction;
        out.theta = Rat(1, 2);  // non-invariant real rank-1 orbit means T f = -f
        return out;
    }
    if (out.period < global_period(sys)) {
        out.kind = ObservableKind::Periodic;
        return out;
    }
    out.kind = rank < sys.n ? ObservableKind::Quasiperiodic : ObservableKind::Generic;
    return out;
}

// ---------------------------------------------------------------------------
// Weak-mixing defect
// ---------------------------------------------------------------------------

// E_{-N<=n<=N} of the squared L2 norm of E(T^n f * f | invariant factor),
// with the inclusive 2N+1 normalization.
template <class S>
S weak_mixing_defect(const std::vector<S>& f, const FiniteSystem& sys, long long N) {
    using ST = ScalarTraits<S>;
    if (N < 0) throw InvalidArgument("weak_mixing_defect: N must be >= 0");
    if (static_cast<long long>(f.size()) != sys.n)
        throw InvalidArgument("weak_mixing_defect: one value per state required");
    const Factor y0 = invariant_factor(sys);
    std::vector<long long> inverse(static_cast<std::size_t>(sys.n));
    for (long long x = 0; x < sys.n; ++x)
        inverse[static_cast<std::size_t>(sys.shift[static_cast<std::size_t>(x)])] = x;

    // shifted[x] = f(T^n x), maintained incrementally from n = -N upward.
    std::vector<S> shifted(static_cast<std::size_t>(sys.n));
    for (long long x = 0; x < sys.n; ++x) {
        long long y = x;
        for (long long i = 0; i < N; ++i) y = inverse[static_cast<std::size_t>(y)];
        shifted[static_cast<std::size_t>(x)] = f[static_cast<std::size_t>(y)];
    }
    std::vector<S> terms;
    terms.reserve(static_cast<std::size_t>(2 * N + 1));
    for (long long n = -N; n <= N; ++n) {
        std::vector<S> g(static_cast<std::size_t>(sys.n));
        for (long long x = 0; x < sys.n; ++x)
            g[static_cast<std::size_t>(x)] =
                shifted[static_cast<std::size_t>(x)] * f[static_cast<std::size_t>(x)];
        terms.push_back(l2_norm_sq(cond_exp(g, y0, sys), sys));
        if (n < N) {
            std::vector<S> next(static_cast<std::size_t>(sys.n));
            for (long long x = 0; x < sys.n; ++x)
                next[static_cast<std::size_t>(x)] =
                    shifted[static_cast<std::size_t>(sys.shift[static_cast<std::size_t>(x)])];
            shifted = std::move(next);
        }
    }
    return ST::reduce(std::move(terms)) * ST::from_ratio(1, 2 * N + 1);
}

}  // namespace szlab
