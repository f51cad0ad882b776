#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <vector>

#include "helpers.hpp"
#include "szlab/dynamics.hpp"
#include "szlab/finite_system.hpp"

using namespace szlab;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::vector<std::complex<double>> character(long long n, long long j) {
    std::vector<std::complex<double>> f(static_cast<std::size_t>(n));
    for (long long x = 0; x < n; ++x)
        f[static_cast<std::size_t>(x)] = std::polar(1.0, 2 * kPi * static_cast<double>(j * x) / static_cast<double>(n));
    return f;
}

std::vector<Rat> random_rat_vector(long long n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<Rat> f(static_cast<std::size_t>(n));
    for (auto& v : f)
        v = Rat(static_cast<long long>(rng.next_below(41)) - 20, 1 + static_cast<long long>(rng.next_below(7)));
    return f;
}

// 2-cycle on {0,1} plus 3-cycle on {2,3,4}
FiniteSystem two_three_system() {
    return uniform_system({1, 0, 3, 4, 2});
}

Rat linf_dist(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    Rat best = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        Rat d = a[i] - b[i];
        if (d < 0) d = -d;
        if (d > best) best = d;
    }
    return best;
}

}  // namespace

TEST_CASE("finite system construction") {
    SECTION("validation rejects broken inputs") {
        CHECK_THROWS_AS(make_system({0, 0}, {Rat(1, 2), Rat(1, 2)}), InvalidArgument);
        CHECK_THROWS_AS(make_system({1, 0}, {Rat(1, 3), Rat(2, 3)}), InvalidArgument);  // not shift-invariant
        CHECK_THROWS_AS(make_system({1, 0}, {Rat(1, 2), Rat(1, 3)}), InvalidArgument);  // sum != 1
        CHECK_THROWS_AS(make_system({0, 1}, {Rat(3, 2), Rat(-1, 2)}), InvalidArgument); // negative
        CHECK_THROWS_AS(make_system({}, {}), InvalidArgument);
    }
    SECTION("rotation and random systems validate") {
        auto rot = rotation_system(6);
        CHECK(rot.n == 6);
        CHECK(orbits(rot).size() == 1);
        auto sys = random_system(40, 99);
        validate_system(sys);
        auto sys2 = random_system(40, 99);
        CHECK(sys.shift == sys2.shift);  // deterministic in the seed
    }
    SECTION("global period is the lcm of orbit lengths") {
        CHECK(global_period(rotation_system(12)) == 12);
        CHECK(global_period(two_three_system()) == 6);
        std::vector<long long> iden{0, 1, 2};
        CHECK(global_period(uniform_system(std::move(iden))) == 1);
    }
}

TEST_CASE("orbit partitions") {
    SECTION("identity has singleton atoms") {
        auto f = invariant_factor(uniform_system({0, 1, 2, 3, 4}));
        CHECK(f.num_atoms == 5);
    }
    SECTION("full cycle has one atom") {
        auto f = invariant_factor(rotation_system(5));
        CHECK(f.num_atoms == 1);
    }
    SECTION("2-cycle plus 3-cycle has two atoms") {
        auto f = invariant_factor(two_three_system());
        CHECK(f.num_atoms == 2);
        CHECK(f.complexity == 2);
        CHECK(f.atom_label[0] == f.atom_label[1]);
        CHECK(f.atom_label[2] == f.atom_label[3]);
        CHECK(f.atom_label[0] != f.atom_label[2]);
    }
}

TEST_CASE("conditional expectation") {
    auto sys = two_three_system();
    const std::vector<Rat> f{Rat(1), Rat(3), Rat(2), Rat(5), Rat(-1)};
    SECTION("trivial factor gives the integral everywhere") {
        auto triv = make_factor(sys, {0, 0, 0, 0, 0});
        auto e = cond_exp(f, triv, sys);
        const Rat want = integral(f, sys);
        for (const auto& v : e) CHECK(v == want);
    }
    SECTION("discrete factor is the identity") {
        auto disc = make_factor(sys, {0, 1, 2, 3, 4});
        CHECK(cond_exp(f, disc, sys) == f);
    }
    SECTION("orbit factor takes per-orbit means") {
        auto e = cond_exp(f, invariant_factor(sys), sys);
        CHECK(e[0] == Rat(2));          // (1+3)/2
        CHECK(e[1] == Rat(2));
        CHECK(e[2] == Rat(2));          // (2+5-1)/3
        CHECK(e[3] == Rat(2));
        CHECK(e[4] == Rat(2));
    }
    SECTION("zero-measure atoms get value zero") {
        auto sys0 = make_system({1, 0, 2}, {Rat(1, 2), Rat(1, 2), Rat(0)});
        auto B = make_factor(sys0, {0, 0, 1});
        auto e = cond_exp(std::vector<Rat>{Rat(1), Rat(2), Rat(7)}, B, sys0);
        CHECK(e[0] == Rat(3, 2));
        CHECK(e[2] == Rat(0));
    }
    SECTION("orthogonal split of the squared norm is exact") {
        for (int trial = 0; trial < 20; ++trial) {
            auto sys2 = random_system(3 + trial % 9, derive_seed(0xD1, static_cast<std::uint64_t>(trial)));
            SplitMix64 rng(derive_seed(0xD2, static_cast<std::uint64_t>(trial)));
            std::vector<long long> labels(static_cast<std::size_t>(sys2.n));
            for (auto& l : labels) l = static_cast<long long>(rng.next_below(3));
            auto B = make_factor(sys2, labels);
            auto f2 = random_rat_vector(sys2.n, rng.next());
            auto e = cond_exp(f2, B, sys2);
            std::vector<Rat> resid(f2.size());
            for (std::size_t i = 0; i < f2.size(); ++i) resid[i] = f2[i] - e[i];
            REQUIRE(l2_norm_sq(f2, sys2) == l2_norm_sq(e, sys2) + l2_norm_sq(resid, sys2));
        }
    }
}

TEST_CASE("ergodic averages") {
    SECTION("invariant functions are fixed points") {
        auto sys = two_three_system();
        const std::vector<Rat> f{Rat(7), Rat(7), Rat(-2), Rat(-2), Rat(-2)};
        for (const Int& N : {Int(1), Int(7), Int("1000000000000000000000000007")}) {
            CHECK(ergodic_average(f, sys, N) == f);
        }
    }
    SECTION("full cycle at N equal to the length averages everything") {
        auto sys = rotation_system(5);
        const std::vector<Rat> f{Rat(1), Rat(2), Rat(3), Rat(4), Rat(10)};
        auto avg = ergodic_average(f, sys, Int(5));
        for (const auto& v : avg) CHECK(v == Rat(4));
    }
    SECTION("deviation from the orbit means obeys the remainder bound") {
        auto sys = two_three_system();  // global period 6
        const auto f = random_rat_vector(sys.n, 1234);
        Rat maxf = 0;
        for (auto v : f) {
            if (v < 0) v = -v;
            if (v > maxf) maxf = v;
        }
        const auto target = cond_exp(f, invariant_factor(sys), sys);
        const Int P = global_period(sys);
        for (long long N = 1; N <= 40; ++N) {
            const auto avg = ergodic_average(f, sys, Int(N));
            const Rat err = linf_dist(avg, target);
            const Int rem = Int(N) % P;
            const Rat bound = Rat(2 * rem, N) * maxf;
            REQUIRE(err <= bound);
            if (rem == 0) REQUIRE(err == 0);
        }
    }
    SECTION("gigantic N reduces exactly") {
        auto sys = two_three_system();
        const auto f = random_rat_vector(sys.n, 77);
        const Int N("1000000000000000000000000000000");  // 10^30, not a multiple of 6
        const auto avg = ergodic_average(f, sys, N);
        const auto target = cond_exp(f, invariant_factor(sys), sys);
        Rat maxf = 0;
        for (auto v : f) {
            if (v < 0) v = -v;
            if (v > maxf) maxf = v;
        }
        const Rat bound = Rat(2 * (N % 6), N) * maxf;
        CHECK(linf_dist(avg, target) <= bound);
    }
    SECTION("float mode matches the exact path closely") {
        auto sys = random_system(30, 5150);
        const auto fr = random_rat_vector(sys.n, 5151);
        std::vector<double> fd(fr.size());
        for (std::size_t i = 0; i < fr.size(); ++i) fd[i] = static_cast<double>(fr[i]);
        const auto ar = ergodic_average(fr, sys, Int(1000));
        const auto ad = ergodic_average(fd, sys, Int(1000));
        for (std::size_t i = 0; i < ar.size(); ++i)
            CHECK(std::abs(static_cast<double>(ar[i]) - ad[i]) < 1e-10);
    }
}

TEST_CASE("multiple recurrence averages") {
    SECTION("the constant one function gives one") {
        auto sys = two_three_system();
        const std::vector<Rat> one(static_cast<std::size_t>(sys.n), Rat(1));
        for (long long k = 1; k <= 4; ++k)
            for (const Int& N : {Int(1), Int(5), Int(720)})
                CHECK(multi_recurrence_average(one, sys, k, N) == Rat(1));
    }
    SECTION("spike on five states: frozen value and brute force agree") {
        auto sys = rotation_system(5);
        const std::vector<Rat> f{Rat(4), Rat(-1), Rat(-1), Rat(-1), Rat(-1)};
        const Rat got = multi_recurrence_average(f, sys, 3, Int(5));
        // independent brute force over all (x, r)
        Rat brute = 0;
        for (long long r = 1; r <= 5; ++r)
            for (long long x = 0; x < 5; ++x)
                brute += Rat(1, 25) * f[static_cast<std::size_t>(x)] *
                         f[static_cast<std::size_t>((x + r) % 5)] *
                         f[static_cast<std::size_t>((x + 2 * r) % 5)];
        CHECK(got == brute);
        CHECK(got == Rat(4));
        // the normalized value disagrees with the advertised square closed
        // form; the brute-force number is the contract here
        CHECK(got != Rat(24));
    }
    SECTION("character triple with conjugate square cancels phases") {
        auto sys = rotation_system(7);
        auto f = character(7, 1);
        std::vector<std::complex<double>> g(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) g[i] = std::conj(f[i]) * std::conj(f[i]);
        const auto avg = multi_recurrence_average_seq({f, g, f}, sys, Int(7));
        CHECK(std::abs(avg - std::complex<double>(1.0, 0.0)) < 1e-12);
        // equals the fourth moment of |f| = 1
    }
    SECTION("nonnegative functions with positive mass recur at the period") {
        for (int trial = 0; trial < 20; ++trial) {
            auto sys = random_system(2 + trial % 11, derive_seed(0xEC0, static_cast<std::uint64_t>(trial)));
            SplitMix64 rng(derive_seed(0xEC1, static_cast<std::uint64_t>(trial)));
            std::vector<Rat> f(static_cast<std::size_t>(sys.n));
            for (auto& v : f) v = Rat(static_cast<long long>(rng.next_below(5)), 1);
            f[static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(sys.n)))] += 1;
            const long long k = 1 + static_cast<long long>(rng.next_below(4));
            REQUIRE(multi_recurrence_average(f, sys, k, global_period(sys)) > 0);
        }
    }
    SECTION("single-factor averages reproduce the integral for every N") {
        auto sys = two_three_system();
        const auto f = random_rat_vector(sys.n, 31);
        for (const Int& N : {Int(1), Int(4), Int(9), Int(1000003)})
            CHECK(multi_recurrence_average(f, sys, 1, N) == integral(f, sys));
    }
}

TEST_CASE("observable classification") {
    SECTION("constants are invariant") {
        auto sys = rotation_system(8);
        std::vector<std::complex<double>> f(8, {2.5, -1.0});
        auto c = classify_function(f, sys);
        CHECK(c.kind == ObservableKind::Invariant);
        CHECK(c.period == 1);
    }
    SECTION("characters are eigenfunctions with the right phase") {
        auto sys = rotation_system(8);
        auto c1 = classify_function(character(8, 1), sys);
        REQUIRE(c1.kind == ObservableKind::Eigenfunction);
        CHECK(c1.dim == 1);
        CHECK(std::abs(c1.theta - 0.125) < 1e-12);
        auto c3 = classify_function(character(8, 3), sys);
        REQUIRE(c3.kind == ObservableKind::Eigenfunction);
        CHECK(std::abs(c3.theta - 0.375) < 1e-12);
    }
    SECTION("sums of two characters span two dimensions") {
        auto sys = rotation_system(8);
        auto f1 = character(8, 1);
        auto f2 = character(8, 2);
        std::vector<std::complex<double>> f(f1.size());
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = f1[i] + f2[i];
        auto c = classify_function(f, sys);
        REQUIRE(c.kind == ObservableKind::Quasiperiodic);
        CHECK(c.dim == 2);
    }
    SECTION("repeating patterns shorter than the global period are periodic") {
        auto sys = two_three_system();  // global period 6
        std::vector<std::complex<double>> f{1.0, 2.0, 5.0, 5.0, 5.0};  // period 2 on the 2-cycle
        auto c = classify_function(f, sys);
        REQUIRE(c.kind == ObservableKind::Periodic);
        CHECK(c.period == 2);
        CHECK(c.dim == 2);
    }
    SECTION("random data spans everything") {
        auto sys = rotation_system(5);
        SplitMix64 rng(0xC1A);
        std::vector<std::complex<double>> f(5);
        for (auto& v : f) v = {rng.next_unit() * 2 - 1, rng.next_unit() * 2 - 1};
        auto c = classify_function(f, sys);
        CHECK(c.kind == ObservableKind::Generic);
        CHECK(c.dim == 5);
    }
    SECTION("classification is scale-equivariant") {
        auto sys = rotation_system(8);
        auto f = character(8, 1);
        std::vector<std::complex<double>> g(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) g[i] = f[i] * std::complex<double>(0.0, -3.7);
        auto cf = classify_function(f, sys);
        auto cg = classify_function(g, sys);
        CHECK(cf.kind == cg.kind);
        CHECK(cf.dim == cg.dim);
        CHECK(std::abs(cf.theta - cg.theta) < 1e-12);
    }
    SECTION("exact rational classification") {
        auto sys = two_three_system();
        // invariant
        auto ci = classify_function_exact({Rat(3), Rat(3), Rat(1), Rat(1), Rat(1)}, sys);
        CHECK(ci.kind == ObservableKind::Invariant);
        // sign flip on the 2-cycle: eigenfunction with phase 1/2
        auto ce = classify_function_exact({Rat(1), Rat(-1), Rat(0), Rat(0), Rat(0)}, sys);
        REQUIRE(ce.kind == ObservableKind::Eigenfunction);
        CHECK(ce.theta == Rat(1, 2));
        // period-2 pattern with a non-eigen second orbit
        auto cp = classify_function_exact({Rat(1), Rat(2), Rat(5), Rat(5), Rat(5)}, sys);
        REQUIRE(cp.kind == ObservableKind::Periodic);
        CHECK(cp.period == 2);
        // full-rank data
        auto cg = classify_function_exact({Rat(1), Rat(2), Rat(4), Rat(8), Rat(16)}, sys);
        CHECK((cg.kind == ObservableKind::Generic || cg.kind == ObservableKind::Quasiperiodic));
        CHECK(cg.dim >= 2);
    }
}

TEST_CASE("weak mixing defect") {
    SECTION("the constant one has defect one") {
        auto sys = two_three_system();
        const std::vector<Rat> one(static_cast<std::size_t>(sys.n), Rat(1));
        for (long long N : {0LL, 1LL, 5LL, 32LL}) CHECK(weak_mixing_defect(one, sys, N) == Rat(1));
    }
    SECTION("invariant observables keep a constant defect") {
        auto sys = two_three_system();
        const std::vector<Rat> f{Rat(2), Rat(2), Rat(-1), Rat(-1), Rat(-1)};
        // T^n f * f = f^2 for every n, so the defect never depends on N
        std::vector<Rat> fsq(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) fsq[i] = f[i] * f[i];
        const Rat direct = l2_norm_sq(cond_exp(fsq, invariant_factor(sys), sys), sys);
        for (long long N : {0LL, 3LL, 10LL}) CHECK(weak_mixing_defect(f, sys, N) == direct);
    }
    SECTION("zero-mean data decorrelates as the window grows") {
        auto sys = rotation_system(17);
        SplitMix64 rng(0xFEED);
        std::vector<Rat> f(17);
        Rat mean = 0;
        for (auto& v : f) {
            v = Rat(static_cast<long long>(rng.next_below(19)) - 9, 1);
            mean += v;
        }
        for (auto& v : f) v -= mean / 17;  // exact zero mean
        const Rat d0 = weak_mixing_defect(f, sys, 0);
        const Rat d2 = weak_mixing_defect(f, sys, 2);
        const Rat d8 = weak_mixing_defect(f, sys, 8);
        CHECK(d2 < d0);
        CHECK(d8 < d2);
        CHECK(d8 > 0);
    }
    SECTION("float and exact modes agree") {
        auto sys = two_three_system();
        const auto fr = random_rat_vector(sys.n, 515);
        std::vector<double> fd(fr.size());
        for (std::size_t i = 0; i < fr.size(); ++i) fd[i] = static_cast<double>(fr[i]);
        CHECK(std::abs(static_cast<double>(weak_mixing_defect(fr, sys, 6)) -
                       weak_mixing_defect(fd, sys, 6)) < 1e-10);
    }
}

TEST_CASE("orbit decomposition of systems") {
    SECTION("a single cycle decomposes into itself") {
        auto sys = rotation_system(5);
        auto dec = ergodic_decomposition(sys);
        REQUIRE(dec.components.size() == 1);
        CHECK(dec.components[0].mu == sys.mu);
        CHECK(dec.weights[0] == Rat(1));
    }
    SECTION("identity splits into singletons") {
        auto sys = uniform_system({0, 1, 2});
        auto dec = ergodic_decomposition(sys);
        REQUIRE(dec.components.size() == 3);
        for (const auto& w : dec.weights) CHECK(w == Rat(1, 3));
        for (const auto& comp : dec.components) {
            Rat total = 0;
            for (const auto& m : comp.mu) total += m;
            CHECK(total == Rat(1));
        }
    }
    SECTION("mixed cycle type recombines exactly") {
        auto sys = two_three_system();
        auto dec = ergodic_decomposition(sys);
        REQUIRE(dec.components.size() == 2);
        CHECK(dec.weights[0] == Rat(2, 5));
        CHECK(dec.weights[1] == Rat(3, 5));
        std::vector<Rat> recomb(static_cast<std::size_t>(sys.n), Rat(0));
        for (std::size_t i = 0; i < dec.components.size(); ++i)
            for (long long x = 0; x < sys.n; ++x)
                recomb[static_cast<std::size_t>(x)] +=
                    dec.weights[i] * dec.components[i].mu[static_cast<std::size_t>(x)];
        CHECK(recomb == sys.mu);
    }
    SECTION("random systems recombine exactly") {
        for (int trial = 0; trial < 15; ++trial) {
            auto sys = random_system(4 + trial, derive_seed(0xDEC0, static_cast<std::uint64_t>(trial)));
            auto dec = ergodic_decomposition(sys);
            Rat wsum = 0;
            std::vector<Rat> recomb(static_cast<std::size_t>(sys.n), Rat(0));
            for (std::size_t i = 0; i < dec.components.size(); ++i) {
                validate_system(dec.components[i]);
                wsum += dec.weights[i];
                for (long long x = 0; x < sys.n; ++x)
                    recomb[static_cast<std::size_t>(x)] +=
                        dec.weights[i] * dec.components[i].mu[static_cast<std::size_t>(x)];
            }
            REQUIRE(wsum == Rat(1));
            REQUIRE(recomb == sys.mu);
        }
    }
}
