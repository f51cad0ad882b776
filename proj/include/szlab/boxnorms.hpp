#pragma once

#include <cmath>
#include <vector>

#include "kernel.hpp"
#include "numeric.hpp"

namespace szlab {

// ---------------------------------------------------------------------------
// Box norms. The fourth/eighth powers are the primitive quantities: they are
// exact in rational mode; the norms themselves take real roots and therefore
// always come back as doubles.
// ---------------------------------------------------------------------------

// Sum over x,x' of w_x w_x' ( sum_y w_y f(x,y) f(x',y) )^2 — the contracted
// form of the four-point correlation, O(n^3) instead of O(n^4).
template <class S>
S box2_pow4(const Kernel2<S>& f) {
    using ST = ScalarTraits<S>;
    const long long nx = f.X.size, ny = f.Y.size;
    // R(x,x') = sum_y w_y f(x,y) f(x',y), symmetric
    std::vector<S> wy(static_cast<std::size_t>(ny));
    for (long long y = 0; y < ny; ++y)
        wy[static_cast<std::size_t>(y)] = ST::from_rat(f.Y.weights[static_cast<std::size_t>(y)]);
    // R is symmetric, so each unordered pair is folded once and mirrored; the
    // outer term sequence (and hence the reduction) is unchanged.
    std::vector<S> R(static_cast<std::size_t>(nx * nx), ST::from_int(0));
    for (long long x = 0; x < nx; ++x) {
        const S* frow = f.v.data() + static_cast<std::size_t>(x * ny);
        for (long long xp = x; xp < nx; ++xp) {
            const S* prow = f.v.data() + static_cast<std::size_t>(xp * ny);
            S r = ST::from_int(0);
            for (long long y = 0; y < ny; ++y)
                r = r + wy[static_cast<std::size_t>(y)] * frow[static_cast<std::size_t>(y)] *
                            prow[static_cast<std::size_t>(y)];
            R[static_cast<std::size_t>(x * nx + xp)] = r;
            R[static_cast<std::size_t>(xp * nx + x)] = r;
        }
    }
    std::vector<S> outer;
    outer.reserve(static_cast<std::size_t>(nx * nx));
    for (long long x = 0; x < nx; ++x)
        for (long long xp = 0; xp < nx; ++xp) {
            const S& r = R[static_cast<std::size_t>(x * nx + xp)];
            outer.push_back(ST::from_rat(f.X.weights[static_cast<std::size_t>(x)] *
                                         f.X.weights[static_cast<std::size_t>(xp)]) *
                            r * r);
        }
    return ST::reduce(std::move(outer));
}

template <class S>
double box2_norm(const Kernel2<S>& f) {
    const double p4 = ScalarTraits<S>::to_double(box2_pow4(f));
    return std::pow(std::max(p4, 0.0), 0.25);
}

// Sum over x,x',y,y',z,z' of the eight-point product, contracted as: fix
// (x,x'), form G(y,z) = f(x,y,z) f(x',y,z), then take the four-point
// contraction of G. O(nx^2 ny^2 nz).
template <class S>
S box3_pow8(const Kernel3<S>& f) {
    using ST = ScalarTraits<S>;
    const long long nx = f.X.size, ny = f.Y.size, nz = f.Z.size;
    std::vector<S> wz(static_cast<std::size_t>(nz));
    for (long long z = 0; z < nz; ++z)
        wz[static_cast<std::size_t>(z)] = ST::from_rat(f.Z.weights[static_cast<std::size_t>(z)]);
    std::vector<S> outer;
    outer.reserve(static_cast<std::size_t>(nx * nx));
    std::vector<S> G(static_cast<std::size_t>(ny * nz));
    for (long long x = 0; x < nx; ++x)
        for (long long xp = 0; xp < nx; ++xp) {
            for (long long y = 0; y < ny; ++y)
                for (long long z = 0; z < nz; ++z)
                    G[static_cast<std::size_t>(y * nz + z)] = f.at(x, y, z) * f.at(xp, y, z);
            std::vector<S> inner;
            inner.reserve(static_cast<std::size_t>(ny * ny));
            for (long long y = 0; y < ny; ++y)
                for (long long yp = 0; yp < ny; ++yp) {
                    S r = ST::from_int(0);
                    for (long long z = 0; z < nz; ++z)
                        r = r + wz[static_cast<std::size_t>(z)] *
                                    G[static_cast<std::size_t>(y * nz + z)] *
                                    G[static_cast<std::size_t>(yp * nz + z)];
                    inner.push_back(ST::from_rat(f.Y.weights[static_cast<std::size_t>(y)] *
                                                 f.Y.weights[static_cast<std::size_t>(yp)]) *
                                    r * r);
                }
            outer.push_back(ST::from_rat(f.X.weights[static_cast<std::size_t>(x)] *
                                         f.X.weights[static_cast<std::size_t>(xp)]) *
                            ST::reduce(std::move(inner)));
        }
    return ST::reduce(std::move(outer));
}

template <class S>
double box3_norm(const Kernel3<S>& f) {
    const double p8 = ScalarTraits<S>::to_double(box3_pow8(f));
    return std::pow(std::max(p8, 0.0), 0.125);
}

// ---------------------------------------------------------------------------
// Counting forms
// ---------------------------------------------------------------------------

// Triple integral of f(x,y) g(y,z) h(z,x). Contraction order: fix z, collapse
// the y-sum into M(x,z), then weigh against h. The result is independent of
// the order (exactly in rational mode, to rounding in float mode).
template <class S>
S lambda3(const Kernel2<S>& f, const Kernel2<S>& g, const Kernel2<S>& h) {
    using ST = ScalarTraits<S>;
    if (!same_space(f.Y, g.X) || !same_space(g.Y, h.X) || !same_space(h.Y, f.X))
        throw InvalidArgument("lambda3: cyclic space shapes do not line up");
    const long long nx = f.X.size, ny = f.Y.size, nz = g.Y.size;
    // Column-major walk over g is the cache killer at large sizes; a transposed
    // copy keeps every fold below reading contiguous memory without touching
    // the summation order.
    std::vector<S> gt(static_cast<std::size_t>(ny * nz));
    for (long long y = 0; y < ny; ++y)
        for (long long z = 0; z < nz; ++z)
            gt[static_cast<std::size_t>(z * ny + y)] = g.at(y, z);
    std::vector<S> wyv(static_cast<std::size_t>(ny)), wxv(static_cast<std::size_t>(nx));
    for (long long y = 0; y < ny; ++y)
        wyv[static_cast<std::size_t>(y)] = ST::from_rat(f.Y.weights[static_cast<std::size_t>(y)]);
    for (long long x = 0; x < nx; ++x)
        wxv[static_cast<std::size_t>(x)] = ST::from_rat(f.X.weights[static_cast<std::size_t>(x)]);
    std::vector<S> outer;
    outer.reserve(static_cast<std::size_t>(nz));
    for (long long z = 0; z < nz; ++z) {
        const S* gz = gt.data() + static_cast<std::size_t>(z * ny);
        std::vector<S> xterms;
        xterms.reserve(static_cast<std::size_t>(nx));
        for (long long x = 0; x < nx; ++x) {
            S m = ST::from_int(0);
            for (long long y = 0; y < ny; ++y)
                m = m + wyv[static_cast<std::size_t>(y)] * f.at(x, y) *
                            gz[static_cast<std::size_t>(y)];
            xterms.push_back(wxv[static_cast<std::size_t>(x)] * m * h.at(z, x));
        }
        outer.push_back(ST::from_rat(g.Y.weights[static_cast<std::size_t>(z)]) *
                        ST::reduce(std::move(xterms)));
    }
    return ST::reduce(std::move(outer));
}

// Quadruple integral of f123(x1,x2,x3) f234(x2,x3,x4) f341(x3,x4,x1)
// f412(x4,x1,x2) over independent weighted coordinates.
template <class S>
S lambda4(const Kernel3<S>& f123, const Kernel3<S>& f234, const Kernel3<S>& f341,
          const Kernel3<S>& f412) {
    using ST = ScalarTraits<S>;
    const MeasuredSpace& X1 = f123.X;
    const MeasuredSpace& X2 = f123.Y;
    const MeasuredSpace& X3 = f123.Z;
    const MeasuredSpace& X4 = f234.Z;
    if (!same_space(f234.X, X2) || !same_space(f234.Y, X3) ||
        !same_space(f341.X, X3) || !same_space(f341.Y, X4) || !same_space(f341.Z, X1) ||
        !same_space(f412.X, X4) || !same_space(f412.Y, X1) || !same_space(f412.Z, X2))
        throw InvalidArgument("lambda4: cyclic space shapes do not line up");
    std::vector<S> w4(static_cast<std::size_t>(X4.size));
    for (long long x4 = 0; x4 < X4.size; ++x4)
        w4[static_cast<std::size_t>(x4)] = ST::from_rat(X4.weights[static_cast<std::size_t>(x4)]);
    std::vector<S> outer;
    outer.reserve(static_cast<std::size_t>(X1.size));
    for (long long x1 = 0; x1 < X1.size; ++x1) {
        S acc = ST::from_int(0);
        for (long long x2 = 0; x2 < X2.size; ++x2)
            for (long long x3 = 0; x3 < X3.size; ++x3) {
                const S base = ST::from_rat(X2.weights[static_cast<std::size_t>(x2)] *
                                            X3.weights[static_cast<std::size_t>(x3)]) *
                               f123.at(x1, x2, x3);
                S inner = ST::from_int(0);
                for (long long x4 = 0; x4 < X4.size; ++x4)
                    inner = inner + w4[static_cast<std::size_t>(x4)] * f234.at(x2, x3, x4) *
                                        f341.at(x3, x4, x1) * f412.at(x4, x1, x2);
                acc = acc + base * inner;
            }
        outer.push_back(ST::from_rat(X1.weights[static_cast<std::size_t>(x1)]) * acc);
    }
    return ST::reduce(std::move(outer));
}

// Four-point correlation of a kernel quadruple:
// sum over x,x',y,y' of w^4 f00(x,y) f01(x,y') f10(x',y) f11(x',y').
template <class S>
S corr4(const Kernel2<S>& f00, const Kernel2<S>& f01, const Kernel2<S>& f10,
        const Kernel2<S>& f11) {
    using ST = ScalarTraits<S>;
    if (!same_space(f00.X, f01.X) || !same_space(f10.X, f11.X) || !same_space(f00.X, f10.X) ||
        !same_space(f00.Y, f10.Y) || !same_space(f01.Y, f11.Y) || !same_space(f00.Y, f01.Y))
        throw InvalidArgument("corr4: kernels must share spaces");
    const long long nx = f00.X.size, ny = f00.Y.size;
    std::vector<S> wyv(static_cast<std::size_t>(ny));
    for (long long y = 0; y < ny; ++y)
        wyv[static_cast<std::size_t>(y)] = ST::from_rat(f00.Y.weights[static_cast<std::size_t>(y)]);
    std::vector<S> outer;
    outer.reserve(static_cast<std::size_t>(nx * nx));
    for (long long x = 0; x < nx; ++x)
        for (long long xp = 0; xp < nx; ++xp) {
            S a = ST::from_int(0);  // sum_y w_y f00(x,y) f10(x',y)
            S b = ST::from_int(0);  // sum_y' w_y' f01(x,y') f11(x',y')
            for (long long y = 0; y < ny; ++y) {
                const S& wy = wyv[static_cast<std::size_t>(y)];
                a = a + wy * f00.at(x, y) * f10.at(xp, y);
                b = b + wy * f01.at(x, y) * f11.at(xp, y);
            }
            outer.push_back(ST::from_rat(f00.X.weights[static_cast<std::size_t>(x)] *
                                         f00.X.weights[static_cast<std::size_t>(xp)]) *
                            a * b);
        }
    return ST::reduce(std::move(outer));
}

// Lower-order pairing: integral of f(x,y) g(y) h(x).
template <class S>
S pair_form(const Kernel2<S>& f, const std::vector<S>& g, const std::vector<S>& h) {
    using ST = ScalarTraits<S>;
    if (static_cast<long long>(g.size()) != f.Y.size || static_cast<long long>(h.size()) != f.X.size)
        throw InvalidArgument("pair_form: vector lengths must match the spaces");
    std::vector<S> wyv(static_cast<std::size_t>(f.Y.size));
    for (long long y = 0; y < f.Y.size; ++y)
        wyv[static_cast<std::size_t>(y)] = ST::from_rat(f.Y.weights[static_cast<std::size_t>(y)]);
    std::vector<S> outer;
    outer.reserve(static_cast<std::size_t>(f.X.size));
    for (long long x = 0; x < f.X.size; ++x) {
        S m = ST::from_int(0);
        for (long long y = 0; y < f.Y.size; ++y)
            m = m + wyv[static_cast<std::size_t>(y)] * f.at(x, y) * g[static_cast<std::size_t>(y)];
        outer.push_back(ST::from_rat(f.X.weights[static_cast<std::size_t>(x)]) * m *
                        h[static_cast<std::size_t>(x)]);
    }
    return ST::reduce(std::move(outer));
}

}  // namespace szlab
