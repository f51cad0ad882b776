#pragma once

#include <algorithm>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace szlab {

// A finite map {1..N} -> {1..m}.
struct Colouring {
    long long n = 0;
    int m = 1;
    std::vector<int> colour;  // colour[i-1] is the colour of cell i

    int at(long long cell) const { return colour[static_cast<std::size_t>(cell - 1)]; }
};

inline Colouring make_colouring(long long n, int m, std::vector<int> colour) {
    if (m < 1) throw InvalidArgument("Colouring: m must be >= 1");
    if (static_cast<long long>(colour.size()) != n) throw InvalidArgument("Colouring: wrong size");
    for (int c : colour)
        if (c < 1 || c > m) throw InvalidArgument("Colouring: colour outside [1,m]");
    return Colouring{n, m, std::move(colour)};
}

inline Colouring constant_colouring(long long n, int m, int c) {
    return make_colouring(n, m, std::vector<int>(static_cast<std::size_t>(n), c));
}

inline Colouring random_colouring(long long n, int m, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<int> col(static_cast<std::size_t>(n));
    for (auto& c : col) c = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m)));
    return Colouring{n, m, std::move(col)};
}

// Arithmetic cube embedded in the integers: base plus nonnegative digit
// combinations of the generators. The endpoint flag selects digits 0..k-1 or
// 0..k per axis (both conventions are in live use; see CubeColouring).
struct Cube {
    long long a = 1;
    long long k = 1;
    bool include_endpoint = true;
    std::vector<long long> generators;

    long long d() const { return static_cast<long long>(generators.size()); }
    long long ppa() const { return include_endpoint ? k + 1 : k; }

    long long element(const std::vector<long long>& digits) const {
        long long v = a;
        for (std::size_t i = 0; i < generators.size(); ++i) v += digits[i] * generators[i];
        return v;
    }
};

// A cube is proper when its digit combinations land on pairwise distinct
// integers; improper cubes would alias grid points onto one cell.
inline bool cube_elements_distinct(const Cube& cube) {
    std::vector<long long> values;
    std::vector<long long> digits(static_cast<std::size_t>(cube.d()), 0);
    const long long ppa = cube.ppa();
    while (true) {
        values.push_back(cube.element(digits));
        std::size_t pos = 0;
        while (pos < digits.size() && ++digits[pos] == ppa) {
            digits[pos] = 0;
            ++pos;
        }
        if (pos == digits.size()) break;
    }
    std::sort(values.begin(), values.end());
    return std::adjacent_find(values.begin(), values.end()) == values.end();
}

// Colouring of the abstract digit grid {0..ppa-1}^d, little-endian mixed radix.
// The endpoint flag decides points-per-axis: the "length k" grid is read either
// as digits 0..k-1 (k points) or 0..k (k+1 points); both conventions appear in
// practice and both are exercised by tests. Staircase pigeonholing needs the
// endpoint convention because it uses the digit values k-1 and k together.
struct CubeColouring {
    long long k = 1;
    long long d = 1;
    bool include_endpoint = true;
    int m = 1;
    std::vector<int> colour;

    long long ppa() const { return include_endpoint ? k + 1 : k; }

    long long npoints() const {
        long long p = 1;
        for (long long i = 0; i < d; ++i) p *= ppa();
        return p;
    }

    long long index(const std::vector<long long>& coords) const {
        long long idx = 0, stride = 1;
        for (long long i = 0; i < d; ++i) {
            idx += coords[static_cast<std::size_t>(i)] * stride;
            stride *= ppa();
        }
        return idx;
    }

    std::vector<long long> coords(long long idx) const {
        std::vector<long long> c(static_cast<std::size_t>(d));
        for (long long i = 0; i < d; ++i) {
            c[static_cast<std::size_t>(i)] = idx % ppa();
            idx /= ppa();
        }
        return c;
    }

    int at(const std::vector<long long>& coords_) const {
        return colour[static_cast<std::size_t>(index(coords_))];
    }
};

inline CubeColouring make_cube_colouring(long long k, long long d, bool include_endpoint, int m,
                                         std::vector<int> colour) {
    if (k < 1 || d < 1 || m < 1) throw InvalidArgument("CubeColouring: need k,d,m >= 1");
    CubeColouring cc{k, d, include_endpoint, m, {}};
    if (static_cast<long long>(colour.size()) != cc.npoints())
        throw InvalidArgument("CubeColouring: wrong number of grid points");
    for (int c : colour)
        if (c < 1 || c > m) throw InvalidArgument("CubeColouring: colour outside [1,m]");
    cc.colour = std::move(colour);
    return cc;
}

// Pull back an integer colouring through a cube embedding: the grid point
// with digit vector n inherits the colour of the cell a + sum n_i v_i. All
// cube elements must land inside [1, N] and be pairwise distinct.
inline CubeColouring pullback_colouring(const Cube& cube, const Colouring& c) {
    for (long long g : cube.generators)
        if (g <= 0) throw InvalidArgument("pullback_colouring: generators must be positive");
    if (cube.d() < 1) throw InvalidArgument("pullback_colouring: need at least one generator");
    if (!cube_elements_distinct(cube)) throw InvalidArgument("pullback_colouring: cube elements alias");
    CubeColouring cc{cube.k, cube.d(), cube.include_endpoint, c.m, {}};
    cc.colour.resize(static_cast<std::size_t>(cc.npoints()));
    std::vector<long long> digits(static_cast<std::size_t>(cube.d()), 0);
    const long long ppa = cube.ppa();
    long long idx = 0;
    while (true) {
        const long long cell = cube.element(digits);
        if (cell < 1 || cell > c.n) throw InvalidArgument("pullback_colouring: cube leaves [1,N]");
        cc.colour[static_cast<std::size_t>(idx++)] = c.at(cell);
        std::size_t pos = 0;
        while (pos < digits.size() && ++digits[pos] == ppa) {
            digits[pos] = 0;
            ++pos;
        }
        if (pos == digits.size()) break;
    }
    return cc;
}

inline CubeColouring random_cube_colouring(long long k, long long d, bool include_endpoint, int m,
                                           std::uint64_t seed) {
    CubeColouring cc{k, d, include_endpoint, m, {}};
    SplitMix64 rng(seed);
    cc.colour.resize(static_cast<std::size_t>(cc.npoints()));
    for (auto& c : cc.colour) c = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m)));
    return cc;
}

}  // namespace szlab
