#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "boxnorms.hpp"
#include "core.hpp"
#include "factor.hpp"

namespace szlab {

namespace detail {

template <class S>
void require_range(const Kernel2<S>& f, long long lo, long long hi, const char* who) {
    using ST = ScalarTraits<S>;
    const S l = ST::from_int(lo), h = ST::from_int(hi);
    for (const auto& v : f.v)
        if (v < l || v > h) throw InvalidArgument(std::string(who) + ": kernel value out of range");
}

// Threshold level sets of a finite-valued function: for each distinct positive
// value a the set {u >= a}, for each distinct negative value a the set
// {u <= a}, enumerated in ascending value order. Together these realise every
// piece of the sign-split layer-cake representation of u.
template <class S>
std::vector<std::vector<char>> threshold_sets(const std::vector<S>& u) {
    using ST = ScalarTraits<S>;
    std::vector<S> vals = u;
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    const S zero = ST::from_int(0);
    std::vector<std::vector<char>> out;
    for (const auto& a : vals) {
        if (a == zero) continue;
        std::vector<char> member(u.size(), 0);
        for (std::size_t i = 0; i < u.size(); ++i)
            member[i] = a > zero ? (u[i] >= a ? 1 : 0) : (u[i] <= a ? 1 : 0);
        out.push_back(std::move(member));
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Correlation extraction: a kernel with large box norm correlates with a
// product set. Witness scans are lexicographic, so results are deterministic.
// ---------------------------------------------------------------------------

template <class S>
struct StructureWitness {
    std::vector<char> row_set;  // subset of X
    std::vector<char> col_set;  // subset of Y
    S corr;                     // signed correlation of 1_A(x) 1_B(y) with f
    long long x_pivot = -1, y_pivot = -1;
};

template <class S>
StructureWitness<S> correlate_with_structure(const Kernel2<S>& f, const S& eta) {
    using ST = ScalarTraits<S>;
    detail::require_range(f, -1, 1, "correlate_with_structure");
    if (eta < ST::from_int(0)) throw InvalidArgument("correlate_with_structure: eta must be >= 0");
    const long long nx = f.X.size, ny = f.Y.size;
    const S eta4 = eta * eta * eta * eta;

    std::vector<S> wyv(static_cast<std::size_t>(ny)), wxv(static_cast<std::size_t>(nx));
    for (long long y = 0; y < ny; ++y)
        wyv[static_cast<std::size_t>(y)] = ST::from_rat(f.Y.weights[static_cast<std::size_t>(y)]);
    for (long long x = 0; x < nx; ++x)
        wxv[static_cast<std::size_t>(x)] = ST::from_rat(f.X.weights[static_cast<std::size_t>(x)]);

    // P(y, yp) = sum_x w_x f(x,y) f(x,yp) collapses the pivot scan to O(n^3).
    std::vector<S> P(static_cast<std::size_t>(ny * ny), ST::from_int(0));
    for (long long x = 0; x < nx; ++x) {
        const S& wx = wxv[static_cast<std::size_t>(x)];
        for (long long y = 0; y < ny; ++y)
            for (long long yp = 0; yp < ny; ++yp)
                P[static_cast<std::size_t>(y * ny + yp)] =
                    P[static_cast<std::size_t>(y * ny + yp)] + wx * f.at(x, y) * f.at(x, yp);
    }
    long long xp = -1, yp = -1;
    for (long long cx = 0; cx < nx && xp < 0; ++cx)
        for (long long cy = 0; cy < ny; ++cy) {
            S val = ST::from_int(0);
            for (long long y = 0; y < ny; ++y)
                val = val + wyv[static_cast<std::size_t>(y)] * f.at(cx, y) *
                              P[static_cast<std::size_t>(y * ny + cy)];
            const S a = val < ST::from_int(0) ? S(ST::from_int(0) - val) : val;
            // The strict-positivity clause only matters when eta == 0: a pivot
            // with a vanishing triple sum carries no usable level sets.
            if (a >= eta4 && a > ST::from_int(0)) {
                xp = cx;
                yp = cy;
                break;
            }
        }
    if (xp < 0)
        throw PreconditionViolated(
            "correlate_with_structure: no pivot reaches eta^4; the box norm is below eta");

    std::vector<S> u(static_cast<std::size_t>(nx)), v(static_cast<std::size_t>(ny));
    for (long long x = 0; x < nx; ++x) u[static_cast<std::size_t>(x)] = f.at(x, yp);
    for (long long y = 0; y < ny; ++y) v[static_cast<std::size_t>(y)] = f.at(xp, y);
    const auto cand_a = detail::threshold_sets(u);
    const auto cand_b = detail::threshold_sets(v);
    const S bound = eta4 * ST::from_ratio(1, 4);
    for (const auto& A : cand_a) {
        // g_A(y) = sum_{x in A} w_x f(x,y)
        std::vector<S> gA(static_cast<std::size_t>(ny), ST::from_int(0));
        for (long long x = 0; x < nx; ++x)
            if (A[static_cast<std::size_t>(x)])
                for (long long y = 0; y < ny; ++y)
                    gA[static_cast<std::size_t>(y)] =
                        gA[static_cast<std::size_t>(y)] +
                        wxv[static_cast<std::size_t>(x)] * f.at(x, y);
        for (const auto& B : cand_b) {
            S corr = ST::from_int(0);
            for (long long y = 0; y < ny; ++y)
                if (B[static_cast<std::size_t>(y)])
                    corr = corr + wyv[static_cast<std::size_t>(y)] * gA[static_cast<std::size_t>(y)];
            const S a = corr < ST::from_int(0) ? S(ST::from_int(0) - corr) : corr;
            if (a >= bound) return StructureWitness<S>{A, B, corr, xp, yp};
        }
    }
    throw PreconditionViolated(
        "correlate_with_structure: level-set pigeonhole failed below eta^4/4");
}

// One energy-increment step: extract structure from the conditional-expectation
// defect and refine both coordinate partitions with it.
template <class S>
ProductFactor energy_increment_step(const Kernel2<S>& f, const ProductFactor& B, const S& eta) {
    detail::require_range(f, 0, 1, "energy_increment_step");
    const auto d = kernel_sub(f, cond_exp_kernel(f, B));
    const auto w = correlate_with_structure(d, eta);
    return ProductFactor{refine_with_set(B.px, w.row_set), refine_with_set(B.py, w.col_set)};
}

// Iterate energy increments until the defect drops below eta in the box norm.
// Termination: every genuine step splits at least one coordinate atom, so the
// step count never exceeds the point count; a step that fails to split is a
// float-rounding anomaly and is reported as a resource limit.
template <class S>
ProductFactor kvn_decompose(const Kernel2<S>& f, const S& eta, ProductFactor B) {
    using ST = ScalarTraits<S>;
    detail::require_range(f, 0, 1, "kvn_decompose");
    const S eta4 = eta * eta * eta * eta;
    const long long guard = f.X.size + f.Y.size + 2;
    for (long long iter = 0; iter < guard; ++iter) {
        const auto d = kernel_sub(f, cond_exp_kernel(f, B));
        const S pow4 = box2_pow4(d);
        if (pow4 < eta4 || !(pow4 > ST::from_int(0))) return B;
        const auto w = correlate_with_structure(d, eta);
        ProductFactor next{refine_with_set(B.px, w.row_set), refine_with_set(B.py, w.col_set)};
        if (next.px.num_atoms == B.px.num_atoms && next.py.num_atoms == B.py.num_atoms)
            throw IterationLimit("kvn_decompose: an increment step failed to split any atom");
        B = std::move(next);
    }
    throw IterationLimit("kvn_decompose: exceeded the coordinate atom budget");
}

// Growth functions take the current complexity to a positive integer.
using GrowthFn = std::function<Int(long long)>;

template <class S>
struct Decomposition {
    Kernel2<S> f1, f2, f3;
    long long M = 0;
    ProductFactor factors;  // f1 = E(f | factors), complexity <= M per coordinate
    ProductFactor fine;     // f1 + f2 = E(f | fine)
};

namespace detail {
inline Int growth_value(const GrowthFn& F, long long m) {
    Int v = F(m);
    if (v < 1) throw InvalidArgument("growth function must be >= 1");
    return v;
}
}  // namespace detail

// Double iteration: refine until one more pass through the box-norm sieve
// gains at most tau^2 energy, then split at that stage.
template <class S>
Decomposition<S> regularity_decompose(const Kernel2<S>& f, const S& tau, const GrowthFn& F) {
    using ST = ScalarTraits<S>;
    detail::require_range(f, 0, 1, "regularity_decompose");
    if (!(tau > ST::from_int(0))) throw InvalidArgument("regularity_decompose: tau must be > 0");
    const S tau2 = tau * tau;
    ProductFactor prev = trivial_product_factor(f.X, f.Y);
    S e_prev = factor_energy(f, prev);
    const long long guard = f.X.size + f.Y.size + 2;
    for (long long stage = 0; stage < guard; ++stage) {
        const long long m_prev = prev.complexity();
        const S eta = ST::from_rat(Rat(Int(1), detail::growth_value(F, m_prev)));
        ProductFactor cur = kvn_decompose(f, eta, prev);
        const S e_cur = factor_energy(f, cur);
        if (e_cur <= e_prev + tau2) {
            auto f1 = cond_exp_kernel(f, prev);
            auto fe = cond_exp_kernel(f, cur);
            return Decomposition<S>{f1, kernel_sub(fe, f1), kernel_sub(f, fe), m_prev,
                                    std::move(prev), std::move(cur)};
        }
        prev = std::move(cur);
        e_prev = e_cur;
    }
    throw IterationLimit("regularity_decompose: stage pigeonhole exceeded the atom budget");
}

// ---------------------------------------------------------------------------
// Simultaneous regularisation of a cyclic kernel triple over shared factors.
// ---------------------------------------------------------------------------

template <class S>
struct SimultaneousRegularity {
    Decomposition<S> df, dg, dh;
    long long M = 0;  // max coordinate complexity of the shared coarse factors
};

template <class S>
SimultaneousRegularity<S> simultaneous_regularity(const Kernel2<S>& f, const Kernel2<S>& g,
                                                  const Kernel2<S>& h, const S& tau,
                                                  const GrowthFn& F) {
    using ST = ScalarTraits<S>;
    if (!same_space(f.Y, g.X) || !same_space(g.Y, h.X) || !same_space(h.Y, f.X))
        throw InvalidArgument("simultaneous_regularity: cyclic space shapes do not line up");
    detail::require_range(f, 0, 1, "simultaneous_regularity");
    detail::require_range(g, 0, 1, "simultaneous_regularity");
    detail::require_range(h, 0, 1, "simultaneous_regularity");
    if (!(tau > ST::from_int(0)))
        throw InvalidArgument("simultaneous_regularity: tau must be > 0");
    const S tau2 = tau * tau;

    CoordPartition PX = trivial_partition(f.X);
    CoordPartition PY = trivial_partition(g.X);
    CoordPartition PZ = trivial_partition(h.X);
    const long long guard = f.X.size + g.X.size + h.X.size + 3;

    auto pairf = [&]() { return ProductFactor{PX, PY}; };
    auto pairg = [&]() { return ProductFactor{PY, PZ}; };
    auto pairh = [&]() { return ProductFactor{PZ, PX}; };

    for (long long stage = 0; stage < guard; ++stage) {
        CoordPartition CX = PX, CY = PY, CZ = PZ;  // stage-start snapshot
        const long long m_prev =
            std::max({CX.complexity, CY.complexity, CZ.complexity});
        const S eta = ST::from_rat(Rat(Int(1), detail::growth_value(F, m_prev)));
        const S eta4 = eta * eta * eta * eta;
        const S e_f0 = factor_energy(f, ProductFactor{CX, CY});
        const S e_g0 = factor_energy(g, ProductFactor{CY, CZ});
        const S e_h0 = factor_energy(h, ProductFactor{CZ, CX});

        for (long long step = 0; step < guard; ++step) {
            const long long atoms_before = PX.num_atoms + PY.num_atoms + PZ.num_atoms;
            bool refined = false;
            {
                const auto d = kernel_sub(f, cond_exp_kernel(f, pairf()));
                const S p4 = box2_pow4(d);
                if (p4 >= eta4 && p4 > ST::from_int(0)) {
                    const auto w = correlate_with_structure(d, eta);
                    PX = refine_with_set(PX, w.row_set);
                    PY = refine_with_set(PY, w.col_set);
                    refined = true;
                }
            }
            if (!refined) {
                const auto d = kernel_sub(g, cond_exp_kernel(g, pairg()));
                const S p4 = box2_pow4(d);
                if (p4 >= eta4 && p4 > ST::from_int(0)) {
                    const auto w = correlate_with_structure(d, eta);
                    PY = refine_with_set(PY, w.row_set);
                    PZ = refine_with_set(PZ, w.col_set);
                    refined = true;
                }
            }
            if (!refined) {
                const auto d = kernel_sub(h, cond_exp_kernel(h, pairh()));
                const S p4 = box2_pow4(d);
                if (p4 >= eta4 && p4 > ST::from_int(0)) {
                    const auto w = correlate_with_structure(d, eta);
                    PZ = refine_with_set(PZ, w.row_set);
                    PX = refine_with_set(PX, w.col_set);
                    refined = true;
                }
            }
            if (!refined) break;
            if (PX.num_atoms + PY.num_atoms + PZ.num_atoms == atoms_before)
                throw IterationLimit(
                    "simultaneous_regularity: an increment step failed to split any atom");
        }

        const S e_f1 = factor_energy(f, pairf());
        const S e_g1 = factor_energy(g, pairg());
        const S e_h1 = factor_energy(h, pairh());
        if (e_f1 <= e_f0 + tau2 && e_g1 <= e_g0 + tau2 && e_h1 <= e_h0 + tau2) {
            auto build = [](const Kernel2<S>& k, ProductFactor coarse, ProductFactor fine,
                            long long M) {
                auto k1 = cond_exp_kernel(k, coarse);
                auto ke = cond_exp_kernel(k, fine);
                return Decomposition<S>{k1, kernel_sub(ke, k1), kernel_sub(k, ke), M,
                                        std::move(coarse), std::move(fine)};
            };
            SimultaneousRegularity<S> out{
                build(f, ProductFactor{CX, CY}, ProductFactor{PX, PY}, m_prev),
                build(g, ProductFactor{CY, CZ}, ProductFactor{PY, PZ}, m_prev),
                build(h, ProductFactor{CZ, CX}, ProductFactor{PZ, PX}, m_prev), m_prev};
            return out;
        }
    }
    throw IterationLimit("simultaneous_regularity: stage pigeonhole exceeded the atom budget");
}

// ---------------------------------------------------------------------------
// Strong triangle removal.
// ---------------------------------------------------------------------------

// The slow-decay schedule: tau = (log 1/eps)^{-1/2} clamped to [eps^{1/100}, 1/4],
// floored at 1e-12, then rounded down to a multiple of 1/4096 so both arithmetic
// modes run the identical, exactly representable parameter.
inline Rat removal_tau(double eps) {
    if (!(eps > 0.0) || eps >= 1.0) throw InvalidArgument("removal_tau: eps must lie in (0,1)");
    double t = std::min(0.25, std::max(1.0 / std::sqrt(std::log(1.0 / eps)), std::pow(eps, 0.01)));
    t = std::max(t, 1e-12);
    long long q = static_cast<long long>(std::floor(t * 4096.0));
    if (q < 1) q = 1;
    return Rat(q, 4096);
}

// tau^{1/10}, rounded down to a multiple of 1/4096.
inline Rat removal_threshold(const Rat& tau) {
    const double t = std::pow(static_cast<double>(tau), 0.1);
    long long q = static_cast<long long>(std::floor(t * 4096.0));
    if (q < 1) q = 1;
    return Rat(q, 4096);
}

// F(m) = floor(2^{3m} / tau^3) + 1, computed exactly from the rational tau.
inline GrowthFn removal_growth(const Rat& tau) {
    return [tau](long long m) -> Int {
        const Int num = boost::multiprecision::numerator(tau);
        const Int den = boost::multiprecision::denominator(tau);
        const Int top = (Int(1) << static_cast<unsigned>(3 * m)) * den * den * den;
        return Int(top / (num * num * num) + 1);
    };
}

template <class S>
struct RemovalCertificate {
    CoordPartition px, py, pz;       // shared coarse factors
    std::vector<char> exy, eyz, ezx; // dense atom-pair membership matrices
    S removed_xy, removed_yz, removed_zx;
    S lambda;                        // measured triple form of the inputs
    double eps = 0;
    Rat tau, threshold;
    long long M = 0;
    bool verified = false;

    bool xy(long long i, long long j) const {
        return exy[static_cast<std::size_t>(i * py.num_atoms + j)] != 0;
    }
    bool yz(long long j, long long k) const {
        return eyz[static_cast<std::size_t>(j * pz.num_atoms + k)] != 0;
    }
    bool zx(long long k, long long i) const {
        return ezx[static_cast<std::size_t>(k * px.num_atoms + i)] != 0;
    }
};

namespace detail {

// Atom-pair membership for one role: average of the structured part at least
// thr, conditional variance of the small part at most tau, both atom measures
// at least the prune floor.
template <class S>
std::vector<char> removal_pair_sets(const Kernel2<S>& orig, const Decomposition<S>& dec,
                                    const S& thr, const S& tau, const Rat& prune) {
    const auto avg = atom_averages(orig, dec.factors);
    const auto var = atom_averages(kernel_square(dec.f2), dec.factors);
    const auto mx = atom_measures(dec.factors.px);
    const auto my = atom_measures(dec.factors.py);
    const long long na = dec.factors.px.num_atoms, nb = dec.factors.py.num_atoms;
    std::vector<char> out(static_cast<std::size_t>(na * nb), 0);
    for (long long i = 0; i < na; ++i)
        for (long long j = 0; j < nb; ++j) {
            const std::size_t c = static_cast<std::size_t>(i * nb + j);
            out[c] = (avg[c] >= thr && var[c] <= tau && mx[static_cast<std::size_t>(i)] >= prune &&
                      my[static_cast<std::size_t>(j)] >= prune)
                         ? 1
                         : 0;
        }
    return out;
}

template <class S>
S removal_outside_mass(const Kernel2<S>& orig, const ProductFactor& B,
                       const std::vector<char>& pairs) {
    using ST = ScalarTraits<S>;
    const auto wx = weight_table<S>(orig.X);
    const auto wy = weight_table<S>(orig.Y);
    std::vector<S> terms;
    for (long long x = 0; x < orig.X.size; ++x)
        for (long long y = 0; y < orig.Y.size; ++y) {
            const long long i = B.px.atom[static_cast<std::size_t>(x)];
            const long long j = B.py.atom[static_cast<std::size_t>(y)];
            if (pairs[static_cast<std::size_t>(i * B.py.num_atoms + j)]) continue;
            terms.push_back(wx[static_cast<std::size_t>(x)] * wy[static_cast<std::size_t>(y)] *
                            orig.at(x, y));
        }
    if (terms.empty()) return ST::from_int(0);
    return ST::reduce(std::move(terms));
}

}  // namespace detail

template <class S>
RemovalCertificate<S> strong_triangle_removal(const Kernel2<S>& f, const Kernel2<S>& g,
                                              const Kernel2<S>& h, double eps) {
    using ST = ScalarTraits<S>;
    if (!(eps > 0.0) || eps >= 1.0)
        throw InvalidArgument("strong_triangle_removal: eps must lie in (0,1)");
    const S lam = lambda3(f, g, h);
    // A double is a dyadic rational, so this comparison is exact in both modes.
    if (lam > ST::from_rat(Rat(eps)))
        throw PreconditionViolated("strong_triangle_removal: triple form exceeds eps");

    const Rat tau_rat = removal_tau(eps);
    const Rat thr_rat = removal_threshold(tau_rat);
    const S tau = ST::from_rat(tau_rat);
    const S thr = ST::from_rat(thr_rat);
    auto sim = simultaneous_regularity(f, g, h, tau, removal_growth(tau_rat));

    const long long M = sim.M;
    Rat prune = tau_rat;
    for (long long i = 0; i < M; ++i) prune /= 2;

    RemovalCertificate<S> cert;
    cert.px = sim.df.factors.px;
    cert.py = sim.df.factors.py;
    cert.pz = sim.dg.factors.py;
    cert.exy = detail::removal_pair_sets(f, sim.df, thr, tau, prune);
    cert.eyz = detail::removal_pair_sets(g, sim.dg, thr, tau, prune);
    cert.ezx = detail::removal_pair_sets(h, sim.dh, thr, tau, prune);
    cert.removed_xy = detail::removal_outside_mass(f, sim.df.factors, cert.exy);
    cert.removed_yz = detail::removal_outside_mass(g, sim.dg.factors, cert.eyz);
    cert.removed_zx = detail::removal_outside_mass(h, sim.dh.factors, cert.ezx);
    cert.lambda = lam;
    cert.eps = eps;
    cert.tau = tau_rat;
    cert.threshold = thr_rat;
    cert.M = M;

    // The product must vanish identically; atom granularity suffices because
    // every E set is a union of product atoms.
    for (long long i = 0; i < cert.px.num_atoms; ++i)
        for (long long j = 0; j < cert.py.num_atoms; ++j) {
            if (!cert.xy(i, j)) continue;
            for (long long k = 0; k < cert.pz.num_atoms; ++k)
                if (cert.yz(j, k) && cert.zx(k, i))
                    throw CertificateFailure(
                        "strong_triangle_removal: kept-set product does not vanish",
                        "atom triple (" + std::to_string(i) + "," + std::to_string(j) + "," +
                            std::to_string(k) +
                            ") survives all three sieves; eps is too large for the tau schedule");
        }
    cert.verified = true;
    return cert;
}

// ---------------------------------------------------------------------------
// The cyclic-group pipeline: progression counting as a triple product form.
// ---------------------------------------------------------------------------

template <class S>
struct RothInstance {
    Kernel2<S> f, g, h;
    S lambda;
    long long n = 0;
    long long ordered_count = 0;
    bool identity_holds = false;
};

// Encode membership through the three two-coordinate relations 2x+y, -y-2z,
// x-z; every ordered progression (a, a+r, a+2r) then has exactly n preimages
// (x,y,z), which pins lambda * n^2 to the ordered progression count.
template <class S>
RothInstance<S> roth_pipeline(const ResidueSet& a) {
    using ST = ScalarTraits<S>;
    if (a.interval_mode()) throw InvalidArgument("roth_pipeline: cyclic residue set required");
    const long long n = a.modulus;
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    for (long long e : a.elements) in[static_cast<std::size_t>(e)] = 1;
    auto sp = uniform_space(n);
    auto build = [&](auto&& rel) {
        std::vector<S> v(static_cast<std::size_t>(n * n));
        for (long long p = 0; p < n; ++p)
            for (long long q = 0; q < n; ++q)
                v[static_cast<std::size_t>(p * n + q)] =
                    ST::from_int(in[static_cast<std::size_t>(rel(p, q))] ? 1 : 0);
        return make_kernel2<S>(sp, sp, std::move(v), BoundedMode::Unit);
    };
    RothInstance<S> out{
        build([n](long long x, long long y) { return detail::mod_reduce(2 * x + y, n); }),
        build([n](long long y, long long z) { return detail::mod_reduce(-y - 2 * z, n); }),
        build([n](long long z, long long x) { return detail::mod_reduce(x - z, n); }),
        ST::from_int(0), n, 0, false};
    out.lambda = lambda3(out.f, out.g, out.h);
    out.ordered_count = count_progressions(a, 3).total_ordered;
    const S lhs = out.lambda * ST::from_int(n) * ST::from_int(n);
    const S rhs = ST::from_int(out.ordered_count);
    const S diff = lhs < rhs ? S(rhs - lhs) : S(lhs - rhs);
    out.identity_holds = diff <= ST::from_ratio(1, 1000000000);
    if (std::is_same<S, Rat>::value && !(lhs == rhs))
        throw CertificateFailure("roth_pipeline: progression identity failed",
                                 "lambda * n^2 differs from the ordered count");
    return out;
}

// ---------------------------------------------------------------------------
// Three-variable correlation extraction (the box-3 analogue).
// ---------------------------------------------------------------------------

template <class S>
struct Structure3Witness {
    std::vector<char> set_xy, set_yz, set_zx;  // flattened pair indicators
    S corr;
    long long x_pivot = -1, y_pivot = -1, z_pivot = -1;
};

// For a three-variable kernel with box norm at least eta, produce three
// two-coordinate sets whose triple product correlates with f at level
// eta^8/8. One pivot pigeonhole plus three sign-split threshold scans, each
// giving up a factor of two.
template <class S>
Structure3Witness<S> correlate_with_structure3(const Kernel3<S>& f, const S& eta) {
    using ST = ScalarTraits<S>;
    using K = Kernel3<S>;
    const S zero = ST::from_int(0);
    { // range check
        const S l = ST::from_int(-1), hgh = ST::from_int(1);
        for (const auto& v : f.v)
            if (v < l || v > hgh)
                throw InvalidArgument("correlate_with_structure3: kernel value out of range");
    }
    if (eta < zero) throw InvalidArgument("correlate_with_structure3: eta must be >= 0");
    const long long nx = f.X.size, ny = f.Y.size, nz = f.Z.size;
    const S eta4 = eta * eta * eta * eta;
    const S eta8 = eta4 * eta4;

    auto wx = [&](long long x) { return ST::from_rat(f.X.weights[static_cast<std::size_t>(x)]); };
    auto wy = [&](long long y) { return ST::from_rat(f.Y.weights[static_cast<std::size_t>(y)]); };
    auto wz = [&](long long z) { return ST::from_rat(f.Z.weights[static_cast<std::size_t>(z)]); };

    // Grouping around a pivot (x',y',z'): the seven companion factors collapse
    // onto the three coordinate pairs.
    auto fxy = [&](const K& k, long long xp, long long yp, long long zp, long long x,
                   long long y) {
        (void)yp;
        return k.at(x, y, zp) * k.at(xp, y, zp);
    };
    auto fyz = [&](const K& k, long long xp, long long yp, long long zp, long long y,
                   long long z) {
        (void)zp;
        return k.at(xp, y, z) * k.at(xp, yp, z);
    };
    auto fzx = [&](const K& k, long long xp, long long yp, long long zp, long long z,
                   long long x) {
        (void)xp;
        return k.at(x, yp, z) * k.at(x, yp, zp);
    };

    long long px = -1, py = -1, pz = -1;
    for (long long cx = 0; cx < nx && px < 0; ++cx)
        for (long long cy = 0; cy < ny && px < 0; ++cy)
            for (long long cz = 0; cz < nz; ++cz) {
                S t = zero;
                for (long long x = 0; x < nx; ++x)
                    for (long long y = 0; y < ny; ++y) {
                        S inner = zero;
                        for (long long z = 0; z < nz; ++z)
                            inner = inner + wz(z) * fyz(f, cx, cy, cz, y, z) *
                                                fzx(f, cx, cy, cz, z, x) * f.at(x, y, z);
                        t = t + wx(x) * wy(y) * fxy(f, cx, cy, cz, x, y) * inner;
                    }
                const S a = t < zero ? S(zero - t) : t;
                if (a >= eta8) {
                    px = cx;
                    py = cy;
                    pz = cz;
                    break;
                }
            }
    if (px < 0)
        throw PreconditionViolated(
            "correlate_with_structure3: no pivot reaches eta^8; the box norm is below eta");

    std::vector<S> Fxy(static_cast<std::size_t>(nx * ny)), Fyz(static_cast<std::size_t>(ny * nz)),
        Fzx(static_cast<std::size_t>(nz * nx));
    for (long long x = 0; x < nx; ++x)
        for (long long y = 0; y < ny; ++y)
            Fxy[static_cast<std::size_t>(x * ny + y)] = fxy(f, px, py, pz, x, y);
    for (long long y = 0; y < ny; ++y)
        for (long long z = 0; z < nz; ++z)
            Fyz[static_cast<std::size_t>(y * nz + z)] = fyz(f, px, py, pz, y, z);
    for (long long z = 0; z < nz; ++z)
        for (long long x = 0; x < nx; ++x)
            Fzx[static_cast<std::size_t>(z * nx + x)] = fzx(f, px, py, pz, z, x);

    // Stage 1: replace Fxy by a level set at eta^8/2.
    auto eval3 = [&](const std::vector<char>* Axy, const std::vector<S>* Gxy,
                     const std::vector<char>* Ayz, const std::vector<S>* Gyz,
                     const std::vector<char>* Azx, const std::vector<S>* Gzx) {
        S t = zero;
        for (long long x = 0; x < nx; ++x)
            for (long long y = 0; y < ny; ++y) {
                const std::size_t cxy = static_cast<std::size_t>(x * ny + y);
                S face = Axy ? ((*Axy)[cxy] ? ST::from_int(1) : zero) : (*Gxy)[cxy];
                if (face == zero) continue;
                S inner = zero;
                for (long long z = 0; z < nz; ++z) {
                    const std::size_t cyz = static_cast<std::size_t>(y * nz + z);
                    const std::size_t czx = static_cast<std::size_t>(z * nx + x);
                    const S a = Ayz ? ((*Ayz)[cyz] ? ST::from_int(1) : zero) : (*Gyz)[cyz];
                    const S b = Azx ? ((*Azx)[czx] ? ST::from_int(1) : zero) : (*Gzx)[czx];
                    inner = inner + wz(z) * a * b * f.at(x, y, z);
                }
                t = t + wx(x) * wy(y) * face * inner;
            }
        return t;
    };

    const std::vector<char>* picked_xy = nullptr;
    const auto cand_xy = detail::threshold_sets(Fxy);
    const S b1 = eta8 * ST::from_ratio(1, 2);
    for (const auto& A : cand_xy) {
        const S t = eval3(&A, nullptr, nullptr, &Fyz, nullptr, &Fzx);
        const S a = t < zero ? S(zero - t) : t;
        if (a >= b1) {
            picked_xy = &A;
            break;
        }
    }
    if (!picked_xy)
        throw PreconditionViolated("correlate_with_structure3: first threshold scan failed");

    const std::vector<char>* picked_yz = nullptr;
    const auto cand_yz = detail::threshold_sets(Fyz);
    const S b2 = eta8 * ST::from_ratio(1, 4);
    for (const auto& A : cand_yz) {
        const S t = eval3(picked_xy, nullptr, &A, nullptr, nullptr, &Fzx);
        const S a = t < zero ? S(zero - t) : t;
        if (a >= b2) {
            picked_yz = &A;
            break;
        }
    }
    if (!picked_yz)
        throw PreconditionViolated("correlate_with_structure3: second threshold scan failed");

    const auto cand_zx = detail::threshold_sets(Fzx);
    const S b3 = eta8 * ST::from_ratio(1, 8);
    for (const auto& A : cand_zx) {
        const S t = eval3(picked_xy, nullptr, picked_yz, nullptr, &A, nullptr);
        const S a = t < zero ? S(zero - t) : t;
        if (a >= b3)
            return Structure3Witness<S>{*picked_xy, *picked_yz, A, t, px, py, pz};
    }
    throw PreconditionViolated("correlate_with_structure3: third threshold scan failed");
}

// ---------------------------------------------------------------------------
// Graph corollary: apply a removal certificate to a symmetric graph.
// ---------------------------------------------------------------------------

inline long long triangle_count(const std::vector<char>& adj, long long n) {
    long long t = 0;
    for (long long i = 0; i < n; ++i)
        for (long long j = i + 1; j < n; ++j) {
            if (!adj[static_cast<std::size_t>(i * n + j)]) continue;
            for (long long k = j + 1; k < n; ++k)
                if (adj[static_cast<std::size_t>(i * n + k)] &&
                    adj[static_cast<std::size_t>(j * n + k)])
                    ++t;
        }
    return t;
}

template <class S>
Kernel2<S> graph_kernel(const std::vector<char>& adj, long long n) {
    using ST = ScalarTraits<S>;
    std::vector<S> v(static_cast<std::size_t>(n * n));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = ST::from_int(adj[i] ? 1 : 0);
    auto sp = uniform_space(n);
    return make_kernel2<S>(sp, sp, std::move(v), BoundedMode::Unit);
}

struct GraphRemoval {
    std::vector<char> kept;  // n x n adjacency after deletion
    long long deleted_edges = 0;
    long long triangles_before = 0;
    long long triangles_after = 0;
};

// Keep an edge only when both of its orientations lie in all three kept sets;
// a surviving triangle would then exhibit a non-vanishing atom triple, which
// the certificate verification has excluded.
template <class S>
GraphRemoval apply_certificate_to_graph(const std::vector<char>& adj, long long n,
                                        const RemovalCertificate<S>& cert) {
    if (cert.px.space.size != n || cert.py.space.size != n || cert.pz.space.size != n)
        throw InvalidArgument("apply_certificate_to_graph: certificate built on a different size");
    GraphRemoval out;
    out.kept.assign(static_cast<std::size_t>(n * n), 0);
    out.triangles_before = triangle_count(adj, n);
    auto in_all = [&](long long u, long long v) {
        const long long ix = cert.px.atom[static_cast<std::size_t>(u)];
        const long long jy = cert.py.atom[static_cast<std::size_t>(v)];
        const long long jz = cert.pz.atom[static_cast<std::size_t>(v)];
        const long long iy = cert.py.atom[static_cast<std::size_t>(u)];
        const long long iz = cert.pz.atom[static_cast<std::size_t>(u)];
        const long long jx = cert.px.atom[static_cast<std::size_t>(v)];
        return cert.xy(ix, jy) && cert.yz(iy, jz) && cert.zx(iz, jx);
    };
    for (long long u = 0; u < n; ++u)
        for (long long v = u + 1; v < n; ++v) {
            if (!adj[static_cast<std::size_t>(u * n + v)]) continue;
            if (in_all(u, v) && in_all(v, u)) {
                out.kept[static_cast<std::size_t>(u * n + v)] = 1;
                out.kept[static_cast<std::size_t>(v * n + u)] = 1;
            } else {
                ++out.deleted_edges;
            }
        }
    out.triangles_after = triangle_count(out.kept, n);
    return out;
}

// ---------------------------------------------------------------------------
// Independent certificate audit.
// ---------------------------------------------------------------------------

struct CertificateAudit {
    bool ok = true;
    std::string diagnostics;  // empty when ok; first failure otherwise
};

// Re-examines a removal certificate against the three kernels it claims to
// describe, trusting nothing but the recorded data: the tau/threshold
// schedule, partition well-formedness and shape agreement, the exhaustive
// kept-triple vanishing, the removed-mass accounting (recomputed from
// scratch), and the measured triple form. This is the consumer-side check a
// report's `verified` flag is based on, deliberately separate from the
// producer's own bookkeeping.
template <class S>
CertificateAudit audit_removal_certificate(const Kernel2<S>& f, const Kernel2<S>& g,
                                           const Kernel2<S>& h,
                                           const RemovalCertificate<S>& cert) {
    using ST = ScalarTraits<S>;
    auto fail = [](std::string why) { return CertificateAudit{false, std::move(why)}; };

    // 1. Parameter schedule: tau and threshold must be exactly what the
    //    published schedule assigns to eps.
    Rat expect_tau;
    try {
        expect_tau = removal_tau(cert.eps);
    } catch (const InvalidArgument&) {
        return fail("recorded eps lies outside (0,1)");
    }
    if (cert.tau != expect_tau) return fail("recorded tau disagrees with the schedule for eps");
    if (cert.threshold != removal_threshold(cert.tau))
        return fail("recorded threshold disagrees with the schedule for tau");
    if (cert.M < 0) return fail("negative stage counter");

    // 2. Partitions: well-formed and living on the kernels' coordinate spaces
    //    in the cyclic role pattern X x Y, Y x Z, Z x X.
    try {
        validate_partition(cert.px);
        validate_partition(cert.py);
        validate_partition(cert.pz);
    } catch (const InvalidArgument& e) {
        return fail(std::string("malformed partition: ") + e.what());
    }
    if (!same_space(cert.px.space, f.X) || !same_space(cert.py.space, f.Y))
        return fail("x/y partitions do not live on the first kernel's spaces");
    if (!same_space(cert.py.space, g.X) || !same_space(cert.pz.space, g.Y))
        return fail("y/z partitions do not live on the second kernel's spaces");
    if (!same_space(cert.pz.space, h.X) || !same_space(cert.px.space, h.Y))
        return fail("z/x partitions do not live on the third kernel's spaces");
    if (static_cast<long long>(cert.exy.size()) != cert.px.num_atoms * cert.py.num_atoms ||
        static_cast<long long>(cert.eyz.size()) != cert.py.num_atoms * cert.pz.num_atoms ||
        static_cast<long long>(cert.ezx.size()) != cert.pz.num_atoms * cert.px.num_atoms)
        return fail("kept-set matrix size disagrees with the atom counts");

    // 3. Vanishing product: no atom triple may survive all three sieves.
    for (long long i = 0; i < cert.px.num_atoms; ++i)
        for (long long j = 0; j < cert.py.num_atoms; ++j) {
            if (!cert.xy(i, j)) continue;
            for (long long k = 0; k < cert.pz.num_atoms; ++k)
                if (cert.yz(j, k) && cert.zx(k, i))
                    return fail("kept-set product does not vanish: atom triple (" +
                                std::to_string(i) + "," + std::to_string(j) + "," +
                                std::to_string(k) + ") survives all three sieves");
        }

    // 4. Mass accounting: the removed mass of each kernel, recomputed from
    //    scratch as the weighted integral over cells outside the kept pairs.
    auto outside_mass = [](const Kernel2<S>& k, const CoordPartition& pa,
                           const CoordPartition& pb, const std::vector<char>& pairs) {
        const auto wa = detail::weight_table<S>(k.X);
        const auto wb = detail::weight_table<S>(k.Y);
        std::vector<S> rows;
        for (long long x = 0; x < k.X.size; ++x) {
            std::vector<S> row;
            for (long long y = 0; y < k.Y.size; ++y) {
                const long long i = pa.atom[static_cast<std::size_t>(x)];
                const long long j = pb.atom[static_cast<std::size_t>(y)];
                if (pairs[static_cast<std::size_t>(i * pb.num_atoms + j)]) continue;
                row.push_back(wa[static_cast<std::size_t>(x)] * wb[static_cast<std::size_t>(y)] *
                              k.at(x, y));
            }
            if (!row.empty()) rows.push_back(ST::reduce(std::move(row)));
        }
        if (rows.empty()) return ST::from_int(0);
        return ST::reduce(std::move(rows));
    };
    // Rational mode demands exact agreement; float mode allows for the
    // different summation order of this recomputation.
    auto close = [](const S& a, const S& b) {
        const S d = a < b ? S(b - a) : S(a - b);
        if constexpr (std::is_same_v<S, Rat>) return d == 0;
        else return d <= 1e-9;
    };
    if (!close(outside_mass(f, cert.px, cert.py, cert.exy), cert.removed_xy))
        return fail("removed mass of the first kernel does not match the recorded value");
    if (!close(outside_mass(g, cert.py, cert.pz, cert.eyz), cert.removed_yz))
        return fail("removed mass of the second kernel does not match the recorded value");
    if (!close(outside_mass(h, cert.pz, cert.px, cert.ezx), cert.removed_zx))
        return fail("removed mass of the third kernel does not match the recorded value");

    // 5. Triple form: remeasure and compare with the recorded lambda, and
    //    confirm the eps precondition it certifies.
    const S lam = lambda3(f, g, h);
    if (!close(lam, cert.lambda))
        return fail("remeasured triple form does not match the recorded lambda");
    if (lam > ST::from_rat(Rat(cert.eps)))
        return fail("triple form exceeds eps; the certificate's precondition fails");

    return CertificateAudit{};
}

}  // namespace szlab
