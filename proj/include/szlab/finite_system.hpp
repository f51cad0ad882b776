#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace szlab {

// A measure-preserving transformation on finitely many states: a permutation
// T of [0,n) together with a rational probability vector that is constant
// along each T-orbit. Rational weights keep every identity below exact.
struct FiniteSystem {
    long long n = 0;
    std::vector<long long> shift;  // x -> T(x)
    std::vector<Rat> mu;

    long long apply(long long x, long long times = 1) const {
        for (long long i = 0; i < times; ++i) x = shift[static_cast<std::size_t>(x)];
        return x;
    }
};

inline void validate_system(const FiniteSystem& sys) {
    if (sys.n < 1) throw InvalidArgument("FiniteSystem: need at least one state");
    if (static_cast<long long>(sys.shift.size()) != sys.n ||
        static_cast<long long>(sys.mu.size()) != sys.n)
        throw InvalidArgument("FiniteSystem: field sizes disagree");
    std::vector<bool> hit(static_cast<std::size_t>(sys.n), false);
    for (long long x = 0; x < sys.n; ++x) {
        const long long y = sys.shift[static_cast<std::size_t>(x)];
        if (y < 0 || y >= sys.n || hit[static_cast<std::size_t>(y)])
            throw InvalidArgument("FiniteSystem: shift is not a permutation");
        hit[static_cast<std::size_t>(y)] = true;
    }
    Rat total = 0;
    for (long long x = 0; x < sys.n; ++x) {
        const Rat& w = sys.mu[static_cast<std::size_t>(x)];
        if (w < 0) throw InvalidArgument("FiniteSystem: negative weight");
        if (sys.mu[static_cast<std::size_t>(sys.shift[static_cast<std::size_t>(x)])] != w)
            throw InvalidArgument("FiniteSystem: measure not shift-invariant");
        total += w;
    }
    if (total != 1) throw InvalidArgument("FiniteSystem: weights must sum to 1");
}

inline FiniteSystem make_system(std::vector<long long> shift, std::vector<Rat> mu) {
    FiniteSystem sys{static_cast<long long>(shift.size()), std::move(shift), std::move(mu)};
    validate_system(sys);
    return sys;
}

inline FiniteSystem uniform_system(std::vector<long long> shift) {
    const long long n = static_cast<long long>(shift.size());
    if (n < 1) throw InvalidArgument("uniform_system: need at least one state");
    return make_system(std::move(shift), std::vector<Rat>(static_cast<std::size_t>(n), Rat(1, n)));
}

// Cyclic shift x -> x+1 (mod n) with uniform measure.
inline FiniteSystem rotation_system(long long n) {
    std::vector<long long> shift(static_cast<std::size_t>(n));
    for (long long x = 0; x < n; ++x) shift[static_cast<std::size_t>(x)] = (x + 1) % n;
    return uniform_system(std::move(shift));
}

// Random permutation (Fisher-Yates on the given stream) with uniform measure.
inline FiniteSystem random_system(long long n, std::uint64_t seed) {
    std::vector<long long> shift(static_cast<std::size_t>(n));
    std::iota(shift.begin(), shift.end(), 0);
    SplitMix64 rng(seed);
    for (long long i = n - 1; i > 0; --i) {
        const long long j = static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
        std::swap(shift[static_cast<std::size_t>(i)], shift[static_cast<std::size_t>(j)]);
    }
    return uniform_system(std::move(shift));
}

inline std::vector<std::vector<long long>> orbits(const FiniteSystem& sys) {
    std::vector<std::vector<long long>> out;
    std::vector<bool> seen(static_cast<std::size_t>(sys.n), false);
    for (long long x = 0; x < sys.n; ++x) {
        if (seen[static_cast<std::size_t>(x)]) continue;
        std::vector<long long> orb;
        long long y = x;
        do {
            seen[static_cast<std::size_t>(y)] = true;
            orb.push_back(y);
            y = sys.shift[static_cast<std::size_t>(y)];
        } while (y != x);
        out.push_back(std::move(orb));
    }
    return out;
}

// lcm of the orbit lengths; the least p >= 1 with T^p = identity. Grows like
// exp(sqrt(n log n)) in the worst case, hence an arbitrary-precision result.
inline Int global_period(const FiniteSystem& sys) {
    Int p = 1;
    for (const auto& orb : orbits(sys)) {
        const Int len(static_cast<long long>(orb.size()));
        p = p / boost::multiprecision::gcd(p, len) * len;
    }
    return p;
}

// A partition of the state space. Complexity tracks how many generating sets
// produced the partition (for partitions given directly: the atom count).
struct Factor {
    std::vector<long long> atom_label;  // state -> atom id in [0, num_atoms)
    long long num_atoms = 0;
    long long complexity = 0;
};

inline Factor make_factor(const FiniteSystem& sys, std::vector<long long> labels) {
    if (static_cast<long long>(labels.size()) != sys.n)
        throw InvalidArgument("make_factor: one label per state required");
    // normalize ids to 0..A-1 in order of first appearance
    std::vector<long long> remap;
    for (auto& l : labels) {
        auto it = std::find(remap.begin(), remap.end(), l);
        if (it == remap.end()) {
            remap.push_back(l);
            l = static_cast<long long>(remap.size()) - 1;
        } else {
            l = it - remap.begin();
        }
    }
    Factor f;
    f.atom_label = std::move(labels);
    f.num_atoms = static_cast<long long>(remap.size());
    f.complexity = f.num_atoms;
    return f;
}

// Atoms = orbits of T; the coarsest partition whose atoms are unions of
// orbits refines into this one, so it represents the shift-invariant sets.
inline Factor invariant_factor(const FiniteSystem& sys) {
    Factor f;
    f.atom_label.assign(static_cast<std::size_t>(sys.n), -1);
    long long id = 0;
    for (const auto& orb : orbits(sys)) {
        for (long long x : orb) f.atom_label[static_cast<std::size_t>(x)] = id;
        ++id;
    }
    f.num_atoms = id;
    f.complexity = id;
    return f;
}

// One component per orbit: the same shift with the uniform measure on that
// orbit. The original measure is the weight-ed recombination of the
// components because shift-invariance forces it to be constant per orbit.
struct ErgodicDecomposition {
    std::vector<FiniteSystem> components;
    std::vector<Rat> weights;                  // weight_i = mu(orbit_i)
    std::vector<std::vector<long long>> orbit_states;
};

inline ErgodicDecomposition ergodic_decomposition(const FiniteSystem& sys) {
    ErgodicDecomposition dec;
    for (const auto& orb : orbits(sys)) {
        FiniteSystem comp;
        comp.n = sys.n;
        comp.shift = sys.shift;
        comp.mu.assign(static_cast<std::size_t>(sys.n), Rat(0));
        const Rat unif(1, static_cast<long long>(orb.size()));
        Rat weight = 0;
        for (long long x : orb) {
            comp.mu[static_cast<std::size_t>(x)] = unif;
            weight += sys.mu[static_cast<std::size_t>(x)];
        }
        validate_system(comp);
        dec.components.push_back(std::move(comp));
        dec.weights.push_back(weight);
        dec.orbit_states.push_back(orb);
    }
    return dec;
}

}  // namespace szlab
