#pragma once

#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace szlab {

// A finite probability space. Weights are kept rational regardless of the
// arithmetic mode of the kernels on top, so the measure never drifts; float
// computations convert weights on the fly.
struct MeasuredSpace {
    long long size = 0;
    std::vector<Rat> weights;
};

inline void validate_space(const MeasuredSpace& sp) {
    if (sp.size < 1) throw InvalidArgument("MeasuredSpace: need at least one point");
    if (static_cast<long long>(sp.weights.size()) != sp.size)
        throw InvalidArgument("MeasuredSpace: one weight per point required");
    Rat total = 0;
    for (const auto& w : sp.weights) {
        if (w < 0) throw InvalidArgument("MeasuredSpace: negative weight");
        total += w;
    }
    if (total != 1) throw InvalidArgument("MeasuredSpace: weights must sum to 1");
}

inline MeasuredSpace uniform_space(long long n) {
    if (n < 1) throw InvalidArgument("uniform_space: need at least one point");
    return MeasuredSpace{n, std::vector<Rat>(static_cast<std::size_t>(n), Rat(1, n))};
}

inline MeasuredSpace weighted_space(std::vector<Rat> weights) {
    MeasuredSpace sp{static_cast<long long>(weights.size()), std::move(weights)};
    validate_space(sp);
    return sp;
}

inline bool same_space(const MeasuredSpace& a, const MeasuredSpace& b) {
    return a.size == b.size && a.weights == b.weights;
}

}  // namespace szlab
