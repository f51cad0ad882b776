#include <catch2/catch_amalgamated.hpp>

#include <szlab/constructions.hpp>
#include <szlab/core.hpp>

#include <cmath>

#include "helpers.hpp"

using namespace szlab;

namespace {

// Test-side digit recheck, written against the construction's definition rather
// than its code: low d digits in {0..floor(M/10)}, squared length R.
bool digits_ok(long long v, long long d, long long m, long long r) {
    long long ss = 0;
    for (long long i = 0; i < d; ++i) {
        const long long dig = v % m;
        if (dig > m / 10) return false;
        ss += dig * dig;
        v /= m;
    }
    return ss == r;
}

// all nontrivial 3APs inside an interval set, via element pairs (first, mid)
std::vector<std::array<long long, 3>> all_3aps(const ResidueSet& a) {
    std::vector<std::array<long long, 3>> out;
    for (long long x : a.elements)
        for (long long y : a.elements) {
            if (x == y) continue;
            const long long z = 2 * y - x;
            if (z >= 1 && z <= a.length && a.contains(z)) out.push_back({x, y, z});
        }
    return out;
}

}  // namespace

TEST_CASE("digit-sphere set, explicit radius") {
    auto [a, params] = behrend_set(100, 1, 10, 0);
    REQUIRE(a.elements.size() == 10);
    for (std::size_t i = 0; i < a.elements.size(); ++i)
        CHECK(a.elements[i] == 10 * static_cast<long long>(i + 1));  // {10,20,...,100}
    for (long long v : a.elements) CHECK(digits_ok(v, params.d, params.m, params.r));

    CHECK_THROWS_AS(behrend_set(100, 1, 9), InvalidArgument);
    CHECK_THROWS_AS(behrend_set(50, 2, 10), InvalidArgument);   // M^d > N
    CHECK_THROWS_AS(behrend_set(100, 1, 10, 101), InvalidArgument);  // R > d*M^2
}

TEST_CASE("digit-sphere set, argmax radius") {
    auto [a, params] = behrend_set(1000, 2, 10);
    REQUIRE_FALSE(a.elements.empty());
    for (long long v : a.elements) CHECK(digits_ok(v, 2, 10, params.r));
    // argmax beats every other shell
    for (long long rr = 0; rr <= 2 * (10 / 10) * (10 / 10); ++rr) {
        auto [b, q] = behrend_set(1000, 2, 10, rr);
        CHECK(b.elements.size() <= a.elements.size());
        if (b.elements.size() == a.elements.size()) CHECK(params.r <= q.r);  // smallest on ties
    }
}

TEST_CASE("nontrivial progressions in sphere sets demand aligned steps") {
    for (auto [n, d] : {std::pair<long long, long long>{500, 1}, {2000, 2}}) {
        auto [a, params] = behrend_set(n, d, 10);
        long long md = 1;
        for (long long i = 0; i < d; ++i) md *= 10;
        long long nontrivial = 0;
        for (const auto& ap : all_3aps(a)) {
            const long long r = ap[1] - ap[0];
            CHECK(r % md == 0);
            ++nontrivial;
        }
        // all_3aps walks ordered (first, mid) pairs, so it already counts both signs
        const auto c = count_progressions(a, 3);
        CHECK(c.nontrivial() == nontrivial);
        CHECK(c.nontrivial() <= n * n / md);
        (void)params;
    }
}

TEST_CASE("auto-sized sphere set") {
    auto [a, params] = behrend_auto(100000, 0.1);
    const double lower =
        std::pow(10.0, -static_cast<double>(params.d)) /
        (static_cast<double>(params.d) * static_cast<double>(params.m) * static_cast<double>(params.m));
    CHECK(static_cast<double>(a.density()) >= lower);
    CHECK(params.m >= 10);

    CHECK_THROWS_AS(behrend_auto(8, 0.5), InvalidArgument);  // M^d > N guard

    auto [b, q] = behrend_auto(10000, 0.05);
    long long md = 1;
    for (long long i = 0; i < q.d; ++i) md *= q.m;
    long long aligned = 0;
    for (const auto& ap : all_3aps(b))
        if ((ap[1] - ap[0]) % md == 0) ++aligned;
    CHECK(static_cast<long long>(all_3aps(b).size()) == aligned);  // nothing unaligned
    CHECK(static_cast<double>(b.density()) > 0.0);
}

TEST_CASE("rotation-distance sets") {
    const auto all = bohr_set(Rat(0), Rat(1, 2), 20);
    CHECK(all.elements.size() == 20);

    const auto evens = bohr_set(Rat(1, 2), Rat(1, 10), 20);
    REQUIRE(evens.elements.size() == 10);
    for (long long v : evens.elements) CHECK(v % 2 == 0);

    // monotone in theta
    const auto small = bohr_set(Rat(2, 7), Rat(1, 10), 200);
    const auto big = bohr_set(Rat(2, 7), Rat(1, 5), 200);
    for (long long v : small.elements) CHECK(big.contains(v));

    CHECK_THROWS_AS(bohr_set(Rat(1, 3), Rat(0), 5), InvalidArgument);
    CHECK_THROWS_AS(bohr_set(Rat(1, 3), Rat(2, 3), 5), InvalidArgument);
}

TEST_CASE("rotation-distance sets at double precision") {
    const double alpha = std::sqrt(2.0);
    const auto res = bohr_set(alpha, 0.05, 10000);
    REQUIRE_FALSE(res.set.elements.empty());
    for (long long v : res.set.elements) {
        const double x = alpha * static_cast<double>(v);
        const double frac = x - std::floor(x);
        const double dist = frac <= 0.5 ? frac : 1.0 - frac;
        CHECK(dist <= 0.05 + 1e-12);
    }
    for (long long v : res.boundary) {
        const double x = alpha * static_cast<double>(v);
        const double frac = x - std::floor(x);
        const double dist = frac <= 0.5 ? frac : 1.0 - frac;
        CHECK(std::fabs(dist - 0.05) <= 1e-12);
    }

    // rational alpha: float path agrees with the exact path (boundary-free here)
    const auto exact = bohr_set(Rat(3, 7), Rat(1, 5), 300);
    const auto fl = bohr_set(3.0 / 7.0, 0.2, 300);
    CHECK(fl.boundary.empty());
    CHECK(fl.set.elements == exact.elements);
}

TEST_CASE("squared-step recurrence search") {
    CHECK(quadratic_recurrence_search(0.25, 0.3, 100) == 1);  // ||1/4|| = 0.25 < 0.3
    CHECK(quadratic_recurrence_search(0.25, 0.2, 100) == 2);  // ||1|| = 0 only from r=2 on
    CHECK(quadratic_recurrence_search(0.0, 0.5, 100) == 1);
    CHECK_FALSE(quadratic_recurrence_search(1.0 / 7.0, 1e-3, 6).has_value());
    CHECK(quadratic_recurrence_search(1.0 / 7.0, 1e-3, 7) == 7);
    CHECK_THROWS_AS(quadratic_recurrence_search(0.5, 0.0, 10), InvalidArgument);

    // exact path agrees with float path on rationals
    CHECK(quadratic_recurrence_search(Rat(1, 4), Rat(3, 10), 100) == 1);
    CHECK(quadratic_recurrence_search(Rat(1, 4), Rat(1, 5), 100) == 2);
    CHECK(quadratic_recurrence_search(Rat(1, 7), Rat(1, 1000), 7) == 7);

    const auto r = quadratic_recurrence_search(std::sqrt(2.0), 0.01, 1000000);
    REQUIRE(r.has_value());
    const double x = std::sqrt(2.0) * static_cast<double>(*r) * static_cast<double>(*r);
    const double frac = x - std::floor(x);
    CHECK(std::min(frac, 1.0 - frac) < 0.01);

    // the telescoping identity the search is verified against, exact at several n
    for (long long n : {0ll, 1ll, 5ll, 12ll})
        for (long long rr : {1ll, 2ll, 9ll})
            CHECK(quadratic_seconddiff_identity(Rat(22, 7), n, rr));
}

TEST_CASE("seeded Bernoulli sets") {
    CHECK(random_set(50, 0.0, 9).elements.empty());
    CHECK(random_set(50, 1.0, 9).elements.size() == 50);
    const auto a = random_set(100, 0.3, 42);
    const auto b = random_set(100, 0.3, 42);
    CHECK(a.elements == b.elements);
    // 4 sigma binomial window around the mean
    const double sigma = std::sqrt(100 * 0.3 * 0.7);
    CHECK(std::fabs(static_cast<double>(a.size()) - 30.0) <= 4.0 * sigma);
    CHECK_THROWS_AS(random_set(10, 1.5, 0), InvalidArgument);
}
