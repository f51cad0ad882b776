#pragma once

#include <cstdint>
#include <vector>

#include "rational.hpp"

namespace szlab {

// Deterministic balanced pairwise reduction. This is the one documented float
// summation order for every outer aggregation in the library: pair adjacent
// elements, halve, repeat. Inner (small) contractions are ascending-index left
// folds. Together these make float-mode results bit-identical across runs.
inline double pairwise_sum(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::size_t n = v.size();
    while (n > 1) {
        const std::size_t half = n / 2;
        for (std::size_t i = 0; i < half; ++i) v[i] = v[2 * i] + v[2 * i + 1];
        if (n % 2) v[half] = v[n - 1];
        n = half + n % 2;
    }
    return v[0];
}

// Scalar abstraction for the two arithmetic modes. Exact mode: Rat. Float mode:
// double with the reduction contract above.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static double from_int(long long v) { return static_cast<double>(v); }
    static double from_ratio(long long p, long long q) { return static_cast<double>(p) / static_cast<double>(q); }
    static double from_rat(const Rat& v) { return static_cast<double>(v); }
    static double to_double(double v) { return v; }
    static double reduce(std::vector<double> terms) { return pairwise_sum(std::move(terms)); }
};

template <>
struct ScalarTraits<Rat> {
    static constexpr bool exact = true;
    static Rat from_int(long long v) { return Rat(v); }
    static Rat from_ratio(long long p, long long q) { return Rat(p, q); }
    static Rat from_rat(const Rat& v) { return v; }
    static double to_double(const Rat& v) { return static_cast<double>(v); }
    static Rat reduce(std::vector<Rat> terms) {
        Rat acc = 0;
        for (auto& t : terms) acc += t;
        return acc;
    }
};

template <class S>
inline S scalar_abs(const S& v) { return v < S(0) ? S(-v) : v; }

// Fixed-size bitset over machine words; adjacency rows and membership masks.
struct Bitset {
    std::size_t nbits = 0;
    std::vector<std::uint64_t> w;

    Bitset() = default;
    explicit Bitset(std::size_t n) : nbits(n), w((n + 63) / 64, 0) {}

    void set(std::size_t i) { w[i >> 6] |= 1ull << (i & 63); }
    void reset(std::size_t i) { w[i >> 6] &= ~(1ull << (i & 63)); }
    bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w) c += static_cast<std::size_t>(__builtin_popcountll(x));
        return c;
    }

    static std::size_t and_count(const Bitset& a, const Bitset& b) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < a.w.size(); ++i)
            c += static_cast<std::size_t>(__builtin_popcountll(a.w[i] & b.w[i]));
        return c;
    }

    // popcount of (a & b) restricted to indices >= from (strict lower cut).
    static std::size_t and_count_from(const Bitset& a, const Bitset& b, std::size_t from) {
        std::size_t c = 0;
        const std::size_t w0 = from >> 6;
        for (std::size_t i = w0; i < a.w.size(); ++i) {
            std::uint64_t word = a.w[i] & b.w[i];
            if (i == w0 && (from & 63)) word &= ~0ull << (from & 63);
            c += static_cast<std::size_t>(__builtin_popcountll(word));
        }
        return c;
    }
};

}  // namespace szlab
