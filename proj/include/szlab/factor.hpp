#pragma once

#include <utility>
#include <vector>

#include "kernel.hpp"

namespace szlab {

// ---------------------------------------------------------------------------
// Finite factors of a measured space, represented as point partitions. The
// complexity counter tracks how many generating sets built the partition, so
// num_atoms <= 2^complexity always holds.
// ---------------------------------------------------------------------------

struct CoordPartition {
    MeasuredSpace space;
    std::vector<long long> atom;  // atom[i] in [0, num_atoms)
    long long num_atoms = 1;
    long long complexity = 0;
};

inline void validate_partition(const CoordPartition& p) {
    if (static_cast<long long>(p.atom.size()) != p.space.size)
        throw InvalidArgument("CoordPartition: one atom label per point required");
    if (p.num_atoms < 1) throw InvalidArgument("CoordPartition: needs at least one atom");
    std::vector<char> seen(static_cast<std::size_t>(p.num_atoms), 0);
    for (long long a : p.atom) {
        if (a < 0 || a >= p.num_atoms)
            throw InvalidArgument("CoordPartition: atom label out of range");
        seen[static_cast<std::size_t>(a)] = 1;
    }
    for (char s : seen)
        if (!s) throw InvalidArgument("CoordPartition: unused atom label");
    if (p.complexity < 0) throw InvalidArgument("CoordPartition: negative complexity");
    // complexity m admits at most 2^m atoms
    if (p.complexity < 62 && p.num_atoms > (1LL << p.complexity))
        throw InvalidArgument("CoordPartition: more atoms than the complexity admits");
}

inline CoordPartition trivial_partition(MeasuredSpace sp) {
    CoordPartition p{std::move(sp), {}, 1, 0};
    p.atom.assign(static_cast<std::size_t>(p.space.size), 0);
    return p;
}

inline CoordPartition discrete_partition(MeasuredSpace sp, long long complexity_charge) {
    CoordPartition p{std::move(sp), {}, 0, complexity_charge};
    p.num_atoms = p.space.size;
    p.atom.resize(static_cast<std::size_t>(p.space.size));
    for (long long i = 0; i < p.space.size; ++i) p.atom[static_cast<std::size_t>(i)] = i;
    validate_partition(p);
    return p;
}

// Split every atom against a set; new labels are assigned by first appearance,
// so the result is independent of the old labelling's order.
inline CoordPartition refine_with_set(const CoordPartition& p, const std::vector<char>& member) {
    if (static_cast<long long>(member.size()) != p.space.size)
        throw InvalidArgument("refine_with_set: indicator length mismatch");
    CoordPartition out{p.space, std::vector<long long>(p.atom.size(), -1), 0, p.complexity + 1};
    std::vector<long long> relabel(static_cast<std::size_t>(p.num_atoms) * 2, -1);
    long long next = 0;
    for (std::size_t i = 0; i < p.atom.size(); ++i) {
        const std::size_t key =
            static_cast<std::size_t>(p.atom[i]) * 2 + (member[i] ? 1 : 0);
        if (relabel[key] < 0) relabel[key] = next++;
        out.atom[i] = relabel[key];
    }
    out.num_atoms = next;
    return out;
}

inline Rat atom_measure(const CoordPartition& p, long long a) {
    Rat m(0);
    for (std::size_t i = 0; i < p.atom.size(); ++i)
        if (p.atom[i] == a) m += p.space.weights[i];
    return m;
}

inline std::vector<Rat> atom_measures(const CoordPartition& p) {
    std::vector<Rat> m(static_cast<std::size_t>(p.num_atoms), Rat(0));
    for (std::size_t i = 0; i < p.atom.size(); ++i)
        m[static_cast<std::size_t>(p.atom[i])] += p.space.weights[i];
    return m;
}

// True when q assigns equal labels only where p does (q refines p).
inline bool partition_refines(const CoordPartition& q, const CoordPartition& p) {
    if (q.space.size != p.space.size) return false;
    std::vector<long long> image(static_cast<std::size_t>(q.num_atoms), -1);
    for (std::size_t i = 0; i < q.atom.size(); ++i) {
        auto& img = image[static_cast<std::size_t>(q.atom[i])];
        if (img < 0) img = p.atom[i];
        else if (img != p.atom[i]) return false;
    }
    return true;
}

struct ProductFactor {
    CoordPartition px, py;
    long long complexity() const { return px.complexity > py.complexity ? px.complexity : py.complexity; }
};

inline ProductFactor trivial_product_factor(MeasuredSpace X, MeasuredSpace Y) {
    return ProductFactor{trivial_partition(std::move(X)), trivial_partition(std::move(Y))};
}

// ---------------------------------------------------------------------------
// Kernel arithmetic used by the decomposition pipeline.
// ---------------------------------------------------------------------------

template <class S>
Kernel2<S> kernel_sub(const Kernel2<S>& a, const Kernel2<S>& b) {
    if (!same_space(a.X, b.X) || !same_space(a.Y, b.Y))
        throw InvalidArgument("kernel_sub: kernels live on different spaces");
    auto v = a.v;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = v[i] - b.v[i];
    return Kernel2<S>{a.X, a.Y, std::move(v), BoundedMode::None};
}

template <class S>
Kernel2<S> kernel_square(const Kernel2<S>& a) {
    auto v = a.v;
    for (auto& x : v) x = x * x;
    return Kernel2<S>{a.X, a.Y, std::move(v), BoundedMode::None};
}

namespace detail {
// Per-axis weight tables keep scalar conversions out of the quadratic loops.
template <class S>
std::vector<S> weight_table(const MeasuredSpace& sp) {
    using ST = ScalarTraits<S>;
    std::vector<S> w(static_cast<std::size_t>(sp.size));
    for (long long i = 0; i < sp.size; ++i)
        w[static_cast<std::size_t>(i)] = ST::from_rat(sp.weights[static_cast<std::size_t>(i)]);
    return w;
}
}  // namespace detail

template <class S>
S kernel_integral(const Kernel2<S>& f) {
    using ST = ScalarTraits<S>;
    const auto wx = detail::weight_table<S>(f.X);
    const auto wy = detail::weight_table<S>(f.Y);
    std::vector<S> terms;
    terms.reserve(f.v.size());
    for (long long x = 0; x < f.X.size; ++x)
        for (long long y = 0; y < f.Y.size; ++y)
            terms.push_back(wx[static_cast<std::size_t>(x)] * wy[static_cast<std::size_t>(y)] *
                            f.at(x, y));
    return ST::reduce(std::move(terms));
}

template <class S>
S kernel_l2_sq(const Kernel2<S>& f) {
    using ST = ScalarTraits<S>;
    const auto wx = detail::weight_table<S>(f.X);
    const auto wy = detail::weight_table<S>(f.Y);
    std::vector<S> terms;
    terms.reserve(f.v.size());
    for (long long x = 0; x < f.X.size; ++x)
        for (long long y = 0; y < f.Y.size; ++y)
            terms.push_back(wx[static_cast<std::size_t>(x)] * wy[static_cast<std::size_t>(y)] *
                            f.at(x, y) * f.at(x, y));
    return ST::reduce(std::move(terms));
}

// Per-product-atom averages of f; atoms of measure zero average to 0.
template <class S>
std::vector<S> atom_averages(const Kernel2<S>& f, const ProductFactor& B) {
    using ST = ScalarTraits<S>;
    if (!same_space(f.X, B.px.space) || !same_space(f.Y, B.py.space))
        throw InvalidArgument("atom_averages: factor spaces do not match the kernel");
    const std::size_t cells =
        static_cast<std::size_t>(B.px.num_atoms) * static_cast<std::size_t>(B.py.num_atoms);
    const auto wx = detail::weight_table<S>(f.X);
    const auto wy = detail::weight_table<S>(f.Y);
    std::vector<S> num(cells, ST::from_int(0));
    for (long long x = 0; x < f.X.size; ++x)
        for (long long y = 0; y < f.Y.size; ++y) {
            const std::size_t cell =
                static_cast<std::size_t>(B.px.atom[static_cast<std::size_t>(x)]) *
                    static_cast<std::size_t>(B.py.num_atoms) +
                static_cast<std::size_t>(B.py.atom[static_cast<std::size_t>(y)]);
            num[cell] = num[cell] +
                        wx[static_cast<std::size_t>(x)] * wy[static_cast<std::size_t>(y)] * f.at(x, y);
        }
    // The denominator of a product atom is the product of the coordinate atom
    // measures, so it never needs a quadratic accumulation.
    const auto mx = atom_measures(B.px);
    const auto my = atom_measures(B.py);
    std::vector<S> avg(cells, ST::from_int(0));
    for (long long i = 0; i < B.px.num_atoms; ++i)
        for (long long j = 0; j < B.py.num_atoms; ++j) {
            const Rat den = mx[static_cast<std::size_t>(i)] * my[static_cast<std::size_t>(j)];
            const std::size_t c = static_cast<std::size_t>(i) *
                                      static_cast<std::size_t>(B.py.num_atoms) +
                                  static_cast<std::size_t>(j);
            if (den != Rat(0)) avg[c] = num[c] * ST::from_rat(Rat(1) / den);
        }
    return avg;
}

// Conditional expectation of f on the product factor, as a kernel.
template <class S>
Kernel2<S> cond_exp_kernel(const Kernel2<S>& f, const ProductFactor& B) {
    const auto avg = atom_averages(f, B);
    std::vector<S> v(f.v.size());
    for (long long x = 0; x < f.X.size; ++x)
        for (long long y = 0; y < f.Y.size; ++y)
            v[static_cast<std::size_t>(x * f.Y.size + y)] =
                avg[static_cast<std::size_t>(B.px.atom[static_cast<std::size_t>(x)]) *
                        static_cast<std::size_t>(B.py.num_atoms) +
                    static_cast<std::size_t>(B.py.atom[static_cast<std::size_t>(y)])];
    return Kernel2<S>{f.X, f.Y, std::move(v), BoundedMode::None};
}

// Energy of a product factor with respect to f: squared L2 mass of E(f|B).
template <class S>
S factor_energy(const Kernel2<S>& f, const ProductFactor& B) {
    return kernel_l2_sq(cond_exp_kernel(f, B));
}

}  // namespace szlab
