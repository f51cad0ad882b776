#pragma once

#include <algorithm>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace szlab {

// A subset of Z/NZ (cyclic mode, elements in [0,N)) or of the interval [1,length]
// (interval mode, modulus == 0). The universal arithmetic object.
struct ResidueSet {
    long long modulus = 0;                // 0 => interval mode
    long long length = 0;                 // used iff interval mode
    std::vector<long long> elements;      // strictly increasing

    bool interval_mode() const { return modulus == 0; }
    long long universe() const { return interval_mode() ? length : modulus; }
    long long size() const { return static_cast<long long>(elements.size()); }

    bool contains(long long v) const {
        return std::binary_search(elements.begin(), elements.end(), v);
    }

    Rat density() const {
        if (universe() <= 0) return Rat(0);
        return Rat(size(), universe());
    }
};

inline void validate(const ResidueSet& a) {
    if (a.modulus < 0) throw InvalidArgument("ResidueSet: negative modulus");
    if (a.interval_mode() && a.length <= 0 && !a.elements.empty())
        throw InvalidArgument("ResidueSet: interval mode needs positive length");
    long long prev = -1;
    bool first = true;
    for (long long e : a.elements) {
        if (!first && e <= prev) throw InvalidArgument("ResidueSet: elements not strictly increasing");
        if (a.interval_mode()) {
            if (e < 1 || e > a.length) throw InvalidArgument("ResidueSet: element outside [1,length]");
        } else {
            if (e < 0 || e >= a.modulus) throw InvalidArgument("ResidueSet: element outside [0,N)");
        }
        prev = e;
        first = false;
    }
}

inline ResidueSet make_cyclic(long long modulus, std::vector<long long> elements) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    ResidueSet a{modulus, 0, std::move(elements)};
    validate(a);
    return a;
}

inline ResidueSet make_interval(long long length, std::vector<long long> elements) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    ResidueSet a{0, length, std::move(elements)};
    validate(a);
    return a;
}

inline ResidueSet full_cyclic(long long modulus) {
    std::vector<long long> e(static_cast<std::size_t>(modulus));
    for (long long i = 0; i < modulus; ++i) e[static_cast<std::size_t>(i)] = i;
    return ResidueSet{modulus, 0, std::move(e)};
}

// Independent Bernoulli(density) membership per residue, reproducible from seed.
inline ResidueSet random_set(long long n, double density, std::uint64_t seed) {
    if (density < 0.0 || density > 1.0) throw InvalidArgument("random_set: density outside [0,1]");
    SplitMix64 rng(seed);
    std::vector<long long> e;
    for (long long i = 0; i < n; ++i)
        if (rng.next_unit() < density) e.push_back(i);
    return ResidueSet{n, 0, std::move(e)};
}

}  // namespace szlab
