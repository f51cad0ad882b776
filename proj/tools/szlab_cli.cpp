// Command-line surface for the library: every subcommand runs one experiment
// or construction, re-checks the result with an independent in-process oracle
// where one is affordable, and emits a schema-validated JSON report.
//
// Exit codes: 0 success; 1 certificate failure or violated precondition
// (report still emitted); 2 usage or invalid argument; 3 exhausted resource
// or iteration budget.
//
// Determinism: in rational mode every report is byte-identical across runs
// with the same arguments (exact "p/q" strings, runtime withheld). All
// randomness flows from --seed through the documented counter scheme; the
// stream index of each random artifact is fixed per command and recorded in
// the report parameters.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "szlab/boxnorms.hpp"
#include "szlab/colouring.hpp"
#include "szlab/constructions.hpp"
#include "szlab/core.hpp"
#include "szlab/dynamics.hpp"
#include "szlab/errors.hpp"
#include "szlab/finite_system.hpp"
#include "szlab/kernel.hpp"
#include "szlab/ramsey.hpp"
#include "szlab/ramsey_verify.hpp"
#include "szlab/rational.hpp"
#include "szlab/regularity.hpp"
#include "szlab/relative.hpp"
#include "szlab/report.hpp"
#include "szlab/residue_set.hpp"
#include "szlab/rng.hpp"

namespace {

using szlab::Int;
using szlab::Rat;
using szlab::json;

struct Ctx {
    szlab::RunConfig cfg;
    json report;
    int exit_code = 0;
};

// Every random artifact draws its seed from the master seed through the
// library's counter scheme; these stream indices are part of the interface.
constexpr std::uint64_t kStreamPrimary = 0;  // set / colouring / system / host
constexpr std::uint64_t kStreamFunction = 1; // observable / kernel f
constexpr std::uint64_t kStreamSecond = 2;   // kernel g / quantization shift
constexpr std::uint64_t kStreamThird = 3;    // kernel h

std::uint64_t sub_seed(const Ctx& ctx, std::uint64_t stream) {
    return szlab::derive_seed(ctx.cfg.master_seed, stream);
}

double rat_d(const Rat& r) { return szlab::ScalarTraits<Rat>::to_double(r); }

template <class S>
S parse_scalar(const std::string& text) {
    const Rat r = szlab::parse_rational(text);
    if constexpr (std::is_same_v<S, Rat>) return r;
    else return rat_d(r);
}

std::vector<long long> parse_csv_longs(const std::string& text) {
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            std::size_t pos = 0;
            out.push_back(std::stoll(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw szlab::InvalidArgument("cannot parse integer list entry '" + tok + "'");
        }
    }
    return out;
}

json ll_array(const std::vector<long long>& v) {
    json a = json::array();
    for (long long x : v) a.push_back(x);
    return a;
}

// Exact agreement in rational mode; a fixed tolerance for the float lane's
// recomputations, which may reduce in a different order.
template <class S>
bool close_scalar(const S& a, const S& b) {
    const S d = a < b ? S(b - a) : S(a - b);
    if constexpr (std::is_same_v<S, Rat>) return d == 0;
    else return d <= 1e-9;
}

// Uniform rational values p/2^20 in [0,1]; the same draw in both lanes.
template <class S>
std::vector<S> random_unit_values(long long n, std::uint64_t seed) {
    szlab::SplitMix64 rng(seed);
    std::vector<S> f(static_cast<std::size_t>(n));
    for (auto& v : f)
        v = szlab::ScalarTraits<S>::from_rat(Rat(static_cast<long long>(rng.next_below((1u << 20) + 1)), 1 << 20));
    return f;
}

// ---------------------------------------------------------------------------
// One option bag for all subcommands; only the fields of the chosen command
// are read.
// ---------------------------------------------------------------------------

struct Opts {
    // shared numeric knobs
    long long n = 0;
    long long k = 3;
    long long d = 2;
    long long m = 0;
    long long j = 1;
    long long limit = 64;
    long long states = 12;
    long long nsteps = 64;  // --N
    long long nx = 8, ny = 8, nz = 0;
    long long max_steps = 64;
    long long rmax = 1000000;
    long long radius = -1;
    int colours = 2;
    bool full = false;
    bool interval = false;
    bool allow_small_p = false;
    bool inject_broken_tau = false;
    bool endpoint = true;
    double density = -1.0;
    double eps = 0.05;
    double tol = 0.25;
    double delta = 0.0;
    std::string set_csv, colour_csv;
    std::string alpha = "1/7", theta = "1/5", eps_str = "1/100";
    std::string p_str = "1/2";
    std::string tri_density = "1/5";
    std::string sigma_str = "1/2";
    std::string tau_str = "1/8";
    std::string bounded = "unit";
    std::string preset = "constant";
    std::string growth = "linear";
    long long growth_c = 8;
    std::string system = "random";
    std::string fn = "random";
    std::string subgraph = "full";
    std::string load_path, save_path;
};

// ---------------------------------------------------------------------------
// count-aps: ordered k-term progression counting with a brute-force recheck.
// ---------------------------------------------------------------------------

void run_count_aps(Ctx& ctx, const Opts& o) {
    if (o.n < 1) throw szlab::InvalidArgument("count-aps: --n must be >= 1");
    szlab::ResidueSet a;
    std::string source;
    if (!o.set_csv.empty()) {
        auto elems = parse_csv_longs(o.set_csv);
        a = o.interval ? szlab::make_interval(o.n, std::move(elems))
                       : szlab::make_cyclic(o.n, std::move(elems));
        source = "explicit";
    } else {
        const double dens = o.density < 0 ? 0.5 : o.density;
        a = szlab::random_set(o.n, dens, sub_seed(ctx, kStreamPrimary));
        source = "random";
    }
    auto& par = ctx.report["parameters"];
    par["n"] = o.n;
    par["k"] = o.k;
    par["mode"] = a.interval_mode() ? "interval" : "cyclic";
    par["source"] = source;
    if (source == "random") {
        par["density"] = o.density < 0 ? 0.5 : o.density;
        par["seed_stream"] = kStreamPrimary;
        par["derived_seed"] = sub_seed(ctx, kStreamPrimary);
    }

    const auto c = szlab::count_progressions(a, o.k);
    auto& res = ctx.report["result"];
    res["size"] = a.size();
    res["density"] = szlab::rat_to_string(a.density());
    res["total_ordered"] = c.total_ordered;
    res["trivial"] = c.trivial;
    res["nontrivial"] = c.nontrivial();

    // Brute-force recount, written against the documented counting contract
    // rather than the library loop.
    const long long verify_cap = ctx.cfg.guard > 0 ? ctx.cfg.guard : 512;
    if (a.universe() <= verify_cap) {
        long long total = 0, trivial = 0;
        const long long u = a.universe();
        auto member = [&](long long v) { return a.contains(v); };
        if (a.interval_mode()) {
            for (long long s = 1; s <= u; ++s)
                for (long long r = -(u - 1); r <= u - 1; ++r) {
                    bool ok = true;
                    for (long long t = 0; t < o.k && ok; ++t) {
                        const long long v = s + t * r;
                        ok = v >= 1 && v <= u && member(v);
                    }
                    if (o.k == 1) ok = member(s) && r == 0;  // single terms pair with r = 0 only
                    if (ok) {
                        ++total;
                        if (r == 0) ++trivial;
                    }
                }
        } else {
            for (long long s = 0; s < u; ++s)
                for (long long r = 0; r < u; ++r) {
                    bool ok = true;
                    for (long long t = 0; t < o.k && ok; ++t)
                        ok = member(((s + t * r) % u + u) % u);
                    if (ok) {
                        ++total;
                        if (r == 0) ++trivial;
                    }
                }
        }
        res["recount"] = {{"total_ordered", total}, {"trivial", trivial}};
        ctx.report["verified"] = (total == c.total_ordered && trivial == c.trivial);
    }
}

// ---------------------------------------------------------------------------
// behrend: sphere-shell digit construction with an element-wise recheck.
// ---------------------------------------------------------------------------

void run_behrend(Ctx& ctx, const Opts& o) {
    if (o.n < 1) throw szlab::InvalidArgument("behrend: --n must be >= 1");
    std::pair<szlab::ResidueSet, szlab::BehrendParams> built = [&] {
        if (o.delta > 0.0) return szlab::behrend_auto(o.n, o.delta);
        const long long m = o.m > 0 ? o.m : 10;
        std::optional<long long> radius;
        if (o.radius >= 0) radius = o.radius;
        return szlab::behrend_set(o.n, o.d, m, radius);
    }();
    const auto& a = built.first;
    const auto& bp = built.second;

    auto& par = ctx.report["parameters"];
    par["n"] = o.n;
    if (o.delta > 0.0) par["delta"] = o.delta;
    par["d"] = bp.d;
    par["m"] = bp.m;
    par["r"] = bp.r;

    auto& res = ctx.report["result"];
    res["size"] = a.size();
    res["density"] = szlab::rat_to_string(a.density());
    std::vector<long long> sample(a.elements.begin(),
                                  a.elements.begin() + std::min<std::size_t>(a.elements.size(), 32));
    res["sample"] = ll_array(sample);

    // Independent membership recheck: first d base-m digits capped at m/10
    // with squared length exactly r, value inside [1, n].
    bool ok = true;
    const long long cap = bp.m / 10;
    for (long long v : a.elements) {
        if (v < 1 || v > o.n) { ok = false; break; }
        long long rest = v, ss = 0;
        bool digits_ok = true;
        for (long long i = 0; i < bp.d; ++i) {
            const long long dig = rest % bp.m;
            rest /= bp.m;
            if (dig > cap) { digits_ok = false; break; }
            ss += dig * dig;
        }
        if (!digits_ok || ss != bp.r) { ok = false; break; }
    }
    // On small instances, additionally confirm the confinement contract: the
    // capped low digits never carry, so any nontrivial progression must step
    // by a multiple of m^d. When m^d covers the whole range the set is
    // progression-free outright.
    const long long verify_cap = ctx.cfg.guard > 0 ? ctx.cfg.guard : 2000;
    if (o.n <= verify_cap) {
        long long md = 1;
        for (long long i = 0; i < bp.d; ++i) md *= bp.m;
        const auto c = szlab::count_progressions(a, 3);
        res["nontrivial_aps"] = c.nontrivial();
        bool confined = true;
        for (long long s = 1; s <= o.n && confined; ++s) {
            if (!a.contains(s)) continue;
            for (long long r = 1; s + 2 * r <= o.n && confined; ++r)
                if (a.contains(s + r) && a.contains(s + 2 * r)) confined = r % md == 0;
        }
        res["steps_confined_to_md"] = confined;
        if (md >= o.n) res["progression_free"] = (c.nontrivial() == 0);
        ok = ok && confined && (md < o.n || c.nontrivial() == 0);
    }
    ctx.report["verified"] = ok;
}

// ---------------------------------------------------------------------------
// bohr: approximate-kernel level sets of one frequency.
// ---------------------------------------------------------------------------

template <class S>
void run_bohr(Ctx& ctx, const Opts& o) {
    if (o.n < 1) throw szlab::InvalidArgument("bohr: --n must be >= 1");
    const Rat alpha = szlab::parse_rational(o.alpha);
    const Rat theta = szlab::parse_rational(o.theta);
    auto& par = ctx.report["parameters"];
    par["n"] = o.n;
    par["alpha"] = o.alpha;
    par["theta"] = o.theta;

    auto& res = ctx.report["result"];
    if constexpr (std::is_same_v<S, Rat>) {
        const auto a = szlab::bohr_set(alpha, theta, o.n);
        res["size"] = a.size();
        res["density"] = szlab::rat_to_string(a.density());
        std::vector<long long> sample(
            a.elements.begin(), a.elements.begin() + std::min<std::size_t>(a.elements.size(), 32));
        res["sample"] = ll_array(sample);
        // Exact membership recheck over the whole range: x belongs iff the
        // distance of alpha*x to the nearest integer is at most theta.
        bool ok = true;
        for (long long x = 1; x <= o.n && ok; ++x) {
            Rat fx = alpha * x;
            const Int fl = szlab::rat_num(fx) / szlab::rat_den(fx);
            Rat frac = fx - Rat(fl);
            if (frac < 0) frac += 1;
            const Rat dist = frac <= Rat(1, 2) ? frac : Rat(1) - frac;
            ok = a.contains(x) == (dist <= theta);
        }
        ctx.report["verified"] = ok;
    } else {
        const auto b =
            szlab::bohr_set(rat_d(alpha),
                            rat_d(theta), o.n);
        res["size"] = b.set.size();
        res["density"] = szlab::rat_to_string(b.set.density());
        res["boundary_size"] = static_cast<long long>(b.boundary.size());
        // The float lane brackets roundoff: every point it classifies firmly
        // must agree with the exact rational classification.
        bool ok = true;
        for (long long x = 1; x <= o.n && ok; ++x) {
            if (std::find(b.boundary.begin(), b.boundary.end(), x) != b.boundary.end()) continue;
            Rat fx = alpha * x;
            const Int fl = szlab::rat_num(fx) / szlab::rat_den(fx);
            Rat frac = fx - Rat(fl);
            if (frac < 0) frac += 1;
            const Rat dist = frac <= Rat(1, 2) ? frac : Rat(1) - frac;
            ok = b.set.contains(x) == (dist <= theta);
        }
        ctx.report["verified"] = ok;
    }
}

// ---------------------------------------------------------------------------
// qrec: least r with alpha r^2 within eps of an integer.
// ---------------------------------------------------------------------------

template <class S>
void run_qrec(Ctx& ctx, const Opts& o) {
    const Rat alpha = szlab::parse_rational(o.alpha);
    const Rat eps = szlab::parse_rational(o.eps_str);
    const long long rmax = o.rmax;
    auto& par = ctx.report["parameters"];
    par["alpha"] = o.alpha;
    par["eps"] = o.eps_str;
    par["rmax"] = rmax;

    std::optional<long long> r;
    if constexpr (std::is_same_v<S, Rat>) r = szlab::quadratic_recurrence_search(alpha, eps, rmax);
    else
        r = szlab::quadratic_recurrence_search(rat_d(alpha),
                                               rat_d(eps), rmax);

    auto& res = ctx.report["result"];
    res["found"] = r.has_value();
    res["r"] = r ? json(*r) : json(nullptr);
    if (r) {
        // Exact recheck of the hit and of minimality below it.
        auto dist_to_int = [&](long long rr) {
            Rat fx = alpha * rr * rr;
            const Int fl = szlab::rat_num(fx) / szlab::rat_den(fx);
            Rat frac = fx - Rat(fl);
            if (frac < 0) frac += 1;
            return frac <= Rat(1, 2) ? frac : Rat(1) - frac;
        };
        const long long minimal_cap = ctx.cfg.guard > 0 ? ctx.cfg.guard : 200000;
        bool ok = dist_to_int(*r) < eps;
        bool minimality_checked = *r <= minimal_cap;
        if (minimality_checked)
            for (long long rr = 1; rr < *r && ok; ++rr) ok = !(dist_to_int(rr) < eps);
        res["minimality_checked"] = minimality_checked;
        ctx.report["verified"] = ok;
    }
}

// ---------------------------------------------------------------------------
// vdw: threshold search for monochromatic progressions.
// ---------------------------------------------------------------------------

void run_vdw(Ctx& ctx, const Opts& o) {
    const unsigned long long node_guard =
        ctx.cfg.guard > 0 ? static_cast<unsigned long long>(ctx.cfg.guard) : 100000000ULL;
    auto& par = ctx.report["parameters"];
    par["k"] = o.k;
    par["m"] = o.colours;
    par["limit"] = o.limit;
    par["node_guard"] = node_guard;

    const auto v = szlab::vdw_number(o.k, o.colours, o.limit, node_guard);
    auto& res = ctx.report["result"];
    res["exact"] = v.exact;
    res["W"] = v.w;
    res["nodes"] = v.nodes;
    if (v.certificate.n > 0) {
        json cols = json::array();
        for (int c : v.certificate.colour) cols.push_back(c);
        res["certificate"] = {{"n", v.certificate.n}, {"colours", cols}};
    } else {
        res["certificate"] = nullptr;
    }

    bool ok = true;
    if (v.certificate.n > 0) ok = szlab::verify_avoiding(v.certificate, o.k);
    if (v.exact) ok = ok && (v.certificate.n == v.w - 1);
    ctx.report["verified"] = ok;
}

// ---------------------------------------------------------------------------
// schur: monochromatic x + y = z triple in a colouring of [1, n].
// ---------------------------------------------------------------------------

void run_schur(Ctx& ctx, const Opts& o) {
    const long long n = o.n > 0 ? o.n : 13;
    szlab::Colouring c;
    auto& par = ctx.report["parameters"];
    par["n"] = n;
    par["m"] = o.colours;
    if (!o.colour_csv.empty()) {
        auto vals = parse_csv_longs(o.colour_csv);
        std::vector<int> cols(vals.begin(), vals.end());
        c = szlab::make_colouring(n, o.colours, std::move(cols));
        par["source"] = "explicit";
    } else {
        c = szlab::random_colouring(n, o.colours, sub_seed(ctx, kStreamPrimary));
        par["source"] = "random";
        par["seed_stream"] = kStreamPrimary;
        par["derived_seed"] = sub_seed(ctx, kStreamPrimary);
    }

    const auto w = szlab::schur_witness(c);
    auto& res = ctx.report["result"];
    res["found"] = w.has_value();
    if (w) {
        res["witness"] = {{"x", w->x},   {"y", w->y},   {"colour", w->colour},
                          {"va", w->va}, {"vb", w->vb}, {"vc", w->vc}};
        ctx.report["verified"] = szlab::verify_schur(c, *w);
    } else {
        res["witness"] = nullptr;
        // Absence recheck: no pair x <= y with x, y, x+y <= n monochromatic.
        bool none = true;
        for (long long x = 1; x <= n && none; ++x)
            for (long long y = x; x + y <= n && none; ++y)
                none = !(c.at(x) == c.at(y) && c.at(y) == c.at(x + y));
        ctx.report["verified"] = none;
    }
}

// ---------------------------------------------------------------------------
// hales-jewett: combinatorial-subspace search in a coloured grid.
// ---------------------------------------------------------------------------

void run_hales_jewett(Ctx& ctx, const Opts& o) {
    const unsigned long long eval_guard =
        ctx.cfg.guard > 0 ? static_cast<unsigned long long>(ctx.cfg.guard) : 100000000ULL;
    auto& par = ctx.report["parameters"];
    par["k"] = o.k;
    par["d"] = o.d;
    par["m"] = o.colours;
    par["j"] = o.j;
    par["include_endpoint"] = o.endpoint;
    par["eval_guard"] = eval_guard;

    szlab::CubeColouring cc;
    if (!o.colour_csv.empty()) {
        auto vals = parse_csv_longs(o.colour_csv);
        std::vector<int> cols(vals.begin(), vals.end());
        cc = szlab::make_cube_colouring(o.k, o.d, o.endpoint, o.colours, std::move(cols));
        par["source"] = "explicit";
    } else {
        cc = szlab::random_cube_colouring(o.k, o.d, o.endpoint, o.colours,
                                          sub_seed(ctx, kStreamPrimary));
        par["source"] = "random";
        par["seed_stream"] = kStreamPrimary;
        par["derived_seed"] = sub_seed(ctx, kStreamPrimary);
    }

    const auto w = szlab::hj_subcube_search(cc, o.j, eval_guard);
    auto& res = ctx.report["result"];
    res["points"] = cc.npoints();
    res["found"] = w.has_value();
    if (w) {
        json groups = json::array();
        for (const auto& g : w->subcube.groups) groups.push_back(ll_array(g));
        res["witness"] = {
            {"kind", w->kind == szlab::SubcubeKind::Monochromatic ? "monochromatic"
                                                                  : "weakly-monochromatic"},
            {"colour", w->colour},
            {"fixed", ll_array(w->subcube.fixed)},
            {"groups", groups}};
        ctx.report["verified"] = szlab::verify_subcube(cc, *w);
    } else {
        res["witness"] = nullptr;
    }
}

// ---------------------------------------------------------------------------
// ergodic: Cesaro averages against the invariant projection.
// ---------------------------------------------------------------------------

template <class S>
void run_ergodic(Ctx& ctx, const Opts& o) {
    using ST = szlab::ScalarTraits<S>;
    const long long n = o.states;
    const auto sys = o.system == "rotation"
                         ? szlab::rotation_system(n)
                         : szlab::random_system(n, sub_seed(ctx, kStreamPrimary));
    const auto f = random_unit_values<S>(n, sub_seed(ctx, kStreamFunction));
    const Int period = szlab::global_period(sys);
    const Int N = o.nsteps > 0 ? Int(o.nsteps) : period;

    auto& par = ctx.report["parameters"];
    par["states"] = n;
    par["system"] = o.system;
    par["N"] = N.str();
    par["system_seed_stream"] = kStreamPrimary;
    par["function_seed_stream"] = kStreamFunction;

    const auto avg = szlab::ergodic_average(f, sys, N);
    auto& res = ctx.report["result"];
    res["period"] = period.str();
    json sample = json::array();
    for (long long x = 0; x < std::min<long long>(n, 8); ++x)
        sample.push_back(szlab::scalar_json(avg[static_cast<std::size_t>(x)]));
    res["average_sample"] = sample;

    if (N == period) {
        // At one full period the averages collapse onto the invariant
        // projection exactly.
        const auto proj = szlab::cond_exp(f, szlab::invariant_factor(sys), sys);
        bool ok = true;
        for (long long x = 0; x < n && ok; ++x)
            ok = close_scalar(avg[static_cast<std::size_t>(x)], proj[static_cast<std::size_t>(x)]);
        res["matches_invariant_projection"] = ok;
        ctx.report["verified"] = ok;
    }
}

// ---------------------------------------------------------------------------
// recurrence: averaged multiple-correlation along arithmetic times.
// ---------------------------------------------------------------------------

template <class S>
void run_recurrence(Ctx& ctx, const Opts& o) {
    using ST = szlab::ScalarTraits<S>;
    const long long n = o.states;
    const long long N = o.nsteps;
    if (N < 1) throw szlab::InvalidArgument("recurrence: --N must be >= 1");
    const auto sys = o.system == "rotation"
                         ? szlab::rotation_system(n)
                         : szlab::random_system(n, sub_seed(ctx, kStreamPrimary));
    const auto f = random_unit_values<S>(n, sub_seed(ctx, kStreamFunction));

    auto& par = ctx.report["parameters"];
    par["states"] = n;
    par["k"] = o.k;
    par["N"] = N;
    par["system"] = o.system;
    par["system_seed_stream"] = kStreamPrimary;
    par["function_seed_stream"] = kStreamFunction;

    const S avg = szlab::multi_recurrence_average(f, sys, o.k, Int(N));
    auto& res = ctx.report["result"];
    res["average"] = szlab::scalar_json(avg);
    res["positive"] = avg > ST::from_int(0);

    // Definition-level recompute: average over r in [1, N] of the integral of
    // prod_{j<k} f(T^{jr} x), iterating T^r explicitly.
    const long long budget = ctx.cfg.guard > 0 ? ctx.cfg.guard : (1LL << 22);
    if (N * n * o.k <= budget) {
        std::vector<long long> tr(static_cast<std::size_t>(n));
        for (long long x = 0; x < n; ++x) tr[static_cast<std::size_t>(x)] = x;
        std::vector<S> outer;
        for (long long r = 1; r <= N; ++r) {
            for (long long x = 0; x < n; ++x)
                tr[static_cast<std::size_t>(x)] =
                    sys.shift[static_cast<std::size_t>(tr[static_cast<std::size_t>(x)])];
            std::vector<S> terms;
            for (long long x = 0; x < n; ++x) {
                S prod = ST::from_rat(sys.mu[static_cast<std::size_t>(x)]);
                long long y = x;
                for (long long jj = 0; jj < o.k; ++jj) {
                    prod = prod * f[static_cast<std::size_t>(y)];
                    y = tr[static_cast<std::size_t>(y)];
                }
                terms.push_back(prod);
            }
            outer.push_back(ST::reduce(std::move(terms)));
        }
        S check = ST::reduce(std::move(outer));
        check = check * ST::from_ratio(1, N);
        res["recomputed"] = szlab::scalar_json(check);
        ctx.report["verified"] = close_scalar(avg, check);
    }
}

// ---------------------------------------------------------------------------
// boxnorm: two- or three-variable box norms with a quadratic-blowup oracle.
// ---------------------------------------------------------------------------

szlab::BoundedMode parse_bounded(const std::string& s) {
    if (s == "unit") return szlab::BoundedMode::Unit;
    if (s == "signed") return szlab::BoundedMode::Signed;
    if (s == "none") return szlab::BoundedMode::None;
    throw szlab::InvalidArgument("boxnorm: --bounded must be unit, signed, or none");
}

template <class S>
void run_boxnorm(Ctx& ctx, const Opts& o) {
    using ST = szlab::ScalarTraits<S>;
    auto& par = ctx.report["parameters"];
    auto& res = ctx.report["result"];
    const long long cell_cap = ctx.cfg.guard > 0 ? ctx.cfg.guard : 1024;

    if (o.nz > 0) {
        const auto f = szlab::random_kernel3<S>(o.nx, o.ny, o.nz, parse_bounded(o.bounded),
                                                sub_seed(ctx, kStreamPrimary));
        par["nx"] = o.nx;
        par["ny"] = o.ny;
        par["nz"] = o.nz;
        par["bounded"] = o.bounded;
        par["seed_stream"] = kStreamPrimary;
        const S p8 = szlab::box3_pow8(f);
        res["pow8"] = szlab::scalar_json(p8);
        res["norm"] = szlab::box3_norm(f);
        if (o.nx * o.ny * o.nz <= cell_cap / 2) {
            // Direct eight-factor sum over (x,x',y,y',z,z').
            auto w = [&](const szlab::MeasuredSpace& sp, long long i) {
                return ST::from_rat(sp.weights[static_cast<std::size_t>(i)]);
            };
            std::vector<S> terms;
            for (long long x = 0; x < o.nx; ++x)
                for (long long xp = 0; xp < o.nx; ++xp)
                    for (long long y = 0; y < o.ny; ++y)
                        for (long long yp = 0; yp < o.ny; ++yp)
                            for (long long z = 0; z < o.nz; ++z)
                                for (long long zp = 0; zp < o.nz; ++zp)
                                    terms.push_back(w(f.X, x) * w(f.X, xp) * w(f.Y, y) *
                                                    w(f.Y, yp) * w(f.Z, z) * w(f.Z, zp) *
                                                    f.at(x, y, z) * f.at(x, y, zp) *
                                                    f.at(x, yp, z) * f.at(x, yp, zp) *
                                                    f.at(xp, y, z) * f.at(xp, y, zp) *
                                                    f.at(xp, yp, z) * f.at(xp, yp, zp));
            const S naive = ST::reduce(std::move(terms));
            res["recomputed_pow8"] = szlab::scalar_json(naive);
            ctx.report["verified"] = close_scalar(p8, naive);
        }
        return;
    }

    szlab::Kernel2<S> f = [&] {
        if (!o.load_path.empty()) return szlab::load_kernel2<S>(o.load_path);
        return szlab::random_kernel2<S>(o.nx, o.ny, parse_bounded(o.bounded),
                                        sub_seed(ctx, kStreamPrimary));
    }();
    if (!o.load_path.empty()) par["load"] = o.load_path;
    par["nx"] = f.X.size;
    par["ny"] = f.Y.size;
    par["bounded"] = o.bounded;
    par["seed_stream"] = kStreamPrimary;
    const S p4 = szlab::box2_pow4(f);
    res["pow4"] = szlab::scalar_json(p4);
    res["norm"] = szlab::box2_norm(f);
    if (f.X.size * f.Y.size <= cell_cap) {
        auto w = [&](const szlab::MeasuredSpace& sp, long long i) {
            return ST::from_rat(sp.weights[static_cast<std::size_t>(i)]);
        };
        std::vector<S> terms;
        for (long long x = 0; x < f.X.size; ++x)
            for (long long xp = 0; xp < f.X.size; ++xp)
                for (long long y = 0; y < f.Y.size; ++y)
                    for (long long yp = 0; yp < f.Y.size; ++yp)
                        terms.push_back(w(f.X, x) * w(f.X, xp) * w(f.Y, y) * w(f.Y, yp) *
                                        f.at(x, y) * f.at(x, yp) * f.at(xp, y) * f.at(xp, yp));
        const S naive = ST::reduce(std::move(terms));
        res["recomputed_pow4"] = szlab::scalar_json(naive);
        ctx.report["verified"] = close_scalar(p4, naive);
    }
    if (!o.save_path.empty()) {
        szlab::save_kernel2(f, o.save_path);
        res["saved"] = o.save_path;
    }
}

// ---------------------------------------------------------------------------
// lambda: the triple product form and its box-norm domination.
// ---------------------------------------------------------------------------

template <class S>
void run_lambda(Ctx& ctx, const Opts& o) {
    using ST = szlab::ScalarTraits<S>;
    const long long n = o.n > 0 ? o.n : 12;
    const auto f = szlab::random_kernel2<S>(n, n, szlab::BoundedMode::Unit,
                                            sub_seed(ctx, kStreamPrimary));
    const auto g = szlab::random_kernel2<S>(n, n, szlab::BoundedMode::Unit,
                                            sub_seed(ctx, kStreamFunction));
    const auto h = szlab::random_kernel2<S>(n, n, szlab::BoundedMode::Unit,
                                            sub_seed(ctx, kStreamSecond));
    auto& par = ctx.report["parameters"];
    par["n"] = n;
    par["seed_streams"] = {kStreamPrimary, kStreamFunction, kStreamSecond};

    const S lam = szlab::lambda3(f, g, h);
    const double bf = szlab::box2_norm(f), bg = szlab::box2_norm(g), bh = szlab::box2_norm(h);
    auto& res = ctx.report["result"];
    res["lambda"] = szlab::scalar_json(lam);
    res["box_f"] = bf;
    res["box_g"] = bg;
    res["box_h"] = bh;
    const double lam_d = ST::to_double(lam);
    const double min_box = std::min({bf, bg, bh});
    res["min_box"] = min_box;
    const bool dominated = std::abs(lam_d) <= min_box + 1e-9;
    res["dominated_by_min_box"] = dominated;

    // Direct triple-sum recompute.
    auto w = [&](const szlab::MeasuredSpace& sp, long long i) {
        return ST::from_rat(sp.weights[static_cast<std::size_t>(i)]);
    };
    std::vector<S> terms;
    for (long long x = 0; x < n; ++x)
        for (long long y = 0; y < n; ++y)
            for (long long z = 0; z < n; ++z)
                terms.push_back(w(f.X, x) * w(f.Y, y) * w(g.Y, z) * f.at(x, y) * g.at(y, z) *
                                h.at(z, x));
    const S naive = ST::reduce(std::move(terms));
    res["recomputed_lambda"] = szlab::scalar_json(naive);
    ctx.report["verified"] = dominated && close_scalar(lam, naive);
}

// ---------------------------------------------------------------------------
// regularize: the structured/small/uniform split with its four invariants.
// ---------------------------------------------------------------------------

template <class S>
void run_regularize(Ctx& ctx, const Opts& o) {
    using ST = szlab::ScalarTraits<S>;
    const long long n = o.n > 0 ? o.n : 16;
    const Rat tau_rat = szlab::parse_rational(o.tau_str);
    const S tau = ST::from_rat(tau_rat);
    const auto f = szlab::random_kernel2<S>(n, n, szlab::BoundedMode::Unit,
                                            sub_seed(ctx, kStreamPrimary));
    szlab::GrowthFn F;
    if (o.growth == "linear") {
        const long long c = o.growth_c;
        F = [c](long long m) -> Int { return Int(c * (m + 1)); };
    } else if (o.growth == "removal") {
        F = szlab::removal_growth(tau_rat);
    } else {
        throw szlab::InvalidArgument("regularize: --growth must be linear or removal");
    }

    auto& par = ctx.report["parameters"];
    par["n"] = n;
    par["tau"] = o.tau_str;
    par["growth"] = o.growth;
    if (o.growth == "linear") par["growth_c"] = o.growth_c;
    par["seed_stream"] = kStreamPrimary;

    const auto dec = szlab::regularity_decompose(f, tau, F);
    auto& res = ctx.report["result"];
    res["M"] = dec.M;
    res["atoms_x"] = dec.factors.px.num_atoms;
    res["atoms_y"] = dec.factors.py.num_atoms;
    res["fine_atoms_x"] = dec.fine.px.num_atoms;
    res["fine_atoms_y"] = dec.fine.py.num_atoms;

    // The four invariants, each recomputed here from the returned parts:
    // exact reassembly, structured part within [0,1], small part within tau
    // in L2, uniform part within 1/F(M) in the box norm.
    bool sum_ok = true, range_ok = true;
    std::vector<S> l2_terms;
    auto w = [&](const szlab::MeasuredSpace& sp, long long i) {
        return ST::from_rat(sp.weights[static_cast<std::size_t>(i)]);
    };
    for (long long x = 0; x < n; ++x)
        for (long long y = 0; y < n; ++y) {
            const S sum = dec.f1.at(x, y) + dec.f2.at(x, y) + dec.f3.at(x, y);
            if (!close_scalar(sum, f.at(x, y))) sum_ok = false;
            if (dec.f1.at(x, y) < ST::from_int(0) || dec.f1.at(x, y) > ST::from_int(1))
                range_ok = false;
            l2_terms.push_back(w(f.X, x) * w(f.Y, y) * dec.f2.at(x, y) * dec.f2.at(x, y));
        }
    const S l2sq = ST::reduce(std::move(l2_terms));
    const S box4 = szlab::box2_pow4(dec.f3);
    const Rat eta = Rat(Int(1), F(dec.M));
    const S eta4 = [&] {
        const S e = ST::from_rat(eta);
        return S(e * e * e * e);
    }();
    const bool l2_ok = l2sq <= tau * tau;
    const bool box_ok = box4 <= eta4;
    res["l2sq_f2"] = szlab::scalar_json(l2sq);
    res["tau_sq"] = szlab::scalar_json(S(tau * tau));
    res["box4_f3"] = szlab::scalar_json(box4);
    res["eta"] = szlab::rat_to_string(eta);
    res["invariants"] = {{"reassembles", sum_ok},
                         {"structured_in_range", range_ok},
                         {"small_within_tau", l2_ok},
                         {"uniform_within_eta", box_ok}};
    ctx.report["verified"] = sum_ok && range_ok && l2_ok && box_ok;
}

// ---------------------------------------------------------------------------
// triangle-removal: certificates, the independent audit, fault injection.
// ---------------------------------------------------------------------------

template <class S>
void run_triangle_removal(Ctx& ctx, const Opts& o) {
    using ST = szlab::ScalarTraits<S>;
    const long long n = o.n > 0 ? o.n : 24;
    auto& par = ctx.report["parameters"];
    par["n"] = n;
    par["eps"] = o.eps;
    par["preset"] = o.preset;
    par["inject_broken_tau"] = o.inject_broken_tau;

    szlab::Kernel2<S> f = szlab::constant_kernel2<S>(n, n, ST::from_int(0));
    szlab::Kernel2<S> g = f, h = f;
    if (o.preset == "constant") {
        const Rat dens = szlab::parse_rational(o.tri_density);
        par["density"] = o.tri_density;
        const auto sp = szlab::uniform_space(n);
        std::vector<S> vals(static_cast<std::size_t>(n * n), ST::from_rat(dens));
        f = szlab::make_kernel2<S>(sp, sp, vals, szlab::BoundedMode::Unit);
        g = f;
        h = f;
    } else if (o.preset == "scaled-random") {
        const Rat dens = szlab::parse_rational(o.tri_density);
        par["density"] = o.tri_density;
        par["seed_streams"] = {kStreamPrimary, kStreamFunction, kStreamSecond};
        auto scaled = [&](std::uint64_t stream) {
            auto k = szlab::random_kernel2<S>(n, n, szlab::BoundedMode::Unit,
                                              sub_seed(ctx, stream));
            for (auto& v : k.v) v = v * ST::from_rat(dens);
            return k;
        };
        f = scaled(kStreamPrimary);
        g = scaled(kStreamFunction);
        h = scaled(kStreamSecond);
    } else if (o.preset == "behrend") {
        // Digit-sphere sets embed in the lower half of the cyclic group
        // without wraparound progressions, so the triple form stays near the
        // trivial count |A| / n^2.
        const long long half = (n - 1) / 2;
        const long long m = o.m > 0 ? o.m : 10;
        auto built = szlab::behrend_set(half, o.d, m);
        auto a = szlab::make_cyclic(n, built.first.elements);
        par["set_size"] = a.size();
        auto rp = szlab::roth_pipeline<S>(a);
        f = rp.f;
        g = rp.g;
        h = rp.h;
    } else {
        throw szlab::InvalidArgument(
            "triangle-removal: --preset must be constant, scaled-random, or behrend");
    }

    auto cert = szlab::strong_triangle_removal(f, g, h, o.eps);
    if (o.inject_broken_tau) cert.tau /= 2;  // deliberate schedule corruption

    const auto audit = szlab::audit_removal_certificate(f, g, h, cert);
    auto& res = ctx.report["result"];
    res["lambda"] = szlab::scalar_json(cert.lambda);
    res["tau"] = szlab::rat_to_string(cert.tau);
    res["threshold"] = szlab::rat_to_string(cert.threshold);
    res["M"] = cert.M;
    res["atoms"] = {{"x", cert.px.num_atoms}, {"y", cert.py.num_atoms}, {"z", cert.pz.num_atoms}};
    res["removed_mass"] = {{"xy", szlab::scalar_json(cert.removed_xy)},
                           {"yz", szlab::scalar_json(cert.removed_yz)},
                           {"zx", szlab::scalar_json(cert.removed_zx)}};
    res["producer_verified"] = cert.verified;
    res["audit_ok"] = audit.ok;
    res["audit_diagnostics"] = audit.ok ? json(nullptr) : json(audit.diagnostics);
    ctx.report["verified"] = audit.ok;
    if (!audit.ok)
        throw szlab::CertificateFailure("triangle-removal: certificate audit failed",
                                        audit.diagnostics);
}

// ---------------------------------------------------------------------------
// roth: the progression-counting identity through the triple product form.
// ---------------------------------------------------------------------------

template <class S>
void run_roth(Ctx& ctx, const Opts& o) {
    if (o.n < 1) throw szlab::InvalidArgument("roth: --n must be >= 1");
    szlab::ResidueSet a;
    auto& par = ctx.report["parameters"];
    par["n"] = o.n;
    if (o.full) {
        a = szlab::full_cyclic(o.n);
        par["source"] = "full";
    } else if (!o.set_csv.empty()) {
        a = szlab::make_cyclic(o.n, parse_csv_longs(o.set_csv));
        par["source"] = "explicit";
    } else {
        const double dens = o.density < 0 ? 0.5 : o.density;
        a = szlab::random_set(o.n, dens, sub_seed(ctx, kStreamPrimary));
        par["source"] = "random";
        par["density"] = dens;
        par["seed_stream"] = kStreamPrimary;
    }

    const auto rp = szlab::roth_pipeline<S>(a);
    auto& res = ctx.report["result"];
    res["size"] = a.size();
    res["lambda"] = szlab::scalar_json(rp.lambda);
    res["ordered_count"] = rp.ordered_count;
    res["identity_holds"] = rp.identity_holds;
    ctx.report["verified"] = rp.identity_holds;
}

// ---------------------------------------------------------------------------
// gnp: sparse host weights with exact Bernoulli sampling.
// ---------------------------------------------------------------------------

void run_gnp(Ctx& ctx, const Opts& o) {
    if (o.n < 1) throw szlab::InvalidArgument("gnp: --n must be >= 1");
    const Rat p = szlab::parse_rational(o.p_str);
    const std::uint64_t seed = sub_seed(ctx, kStreamPrimary);
    const auto w = szlab::sample_gnp_weight(o.n, p, seed, o.allow_small_p);

    auto& par = ctx.report["parameters"];
    par["n"] = o.n;
    par["p"] = o.p_str;
    par["seed_stream"] = kStreamPrimary;
    par["derived_seed"] = seed;

    const Rat mean = szlab::nu_mean(w);
    auto& res = ctx.report["result"];
    res["edge_cells"] = w.edge_cells();
    res["mean_nu"] = szlab::rat_to_string(mean);

    if (p == 1) {
        ctx.report["verified"] = (mean == 1);
    } else {
        const double pd = rat_d(p);
        const double nn = static_cast<double>(o.n);
        const double sigma = std::sqrt((1.0 - pd) * (2.0 * nn * nn - nn) / pd) / (nn * nn);
        const double dev =
            std::abs(rat_d(mean) - 1.0) / sigma;
        res["sigma"] = sigma;
        res["deviation_sigmas"] = dev;
        ctx.report["verified"] = dev <= 4.0;
    }
    if (!o.save_path.empty()) {
        szlab::save_kernel2(szlab::nu_kernel<Rat>(w), o.save_path);
        res["saved"] = o.save_path;
    }
}

// ---------------------------------------------------------------------------
// linear-forms: the host pseudorandomness battery.
// ---------------------------------------------------------------------------

void run_linear_forms(Ctx& ctx, const Opts& o) {
    if (o.n < 1) throw szlab::InvalidArgument("linear-forms: --n must be >= 1");
    const Rat p = szlab::parse_rational(o.p_str);
    const std::uint64_t seed = sub_seed(ctx, kStreamPrimary);
    const auto w = szlab::sample_gnp_weight(o.n, p, seed, o.allow_small_p);

    auto& par = ctx.report["parameters"];
    par["n"] = o.n;
    par["p"] = o.p_str;
    par["tol"] = o.tol;
    par["seed_stream"] = kStreamPrimary;
    par["derived_seed"] = seed;

    const auto rep = szlab::linear_forms_check(w, o.tol);
    auto& res = ctx.report["result"];
    res["mean_nu"] = szlab::rat_to_string(rep.mean_nu);
    res["box4"] = szlab::rat_to_string(rep.box4);
    res["octahedral"] = szlab::rat_to_string(rep.octahedral);
    res["octahedral_injective"] = szlab::rat_to_string(rep.octahedral_injective);
    res["mean_pass"] = rep.mean_pass;
    res["box4_pass"] = rep.box4_pass;
    res["octahedral_pass"] = rep.octahedral_pass;
    res["injective_pass"] = rep.injective_pass;
    res["pass"] = rep.pass;
    ctx.report["verified"] = rep.pass;
}

// ---------------------------------------------------------------------------
// structure: energy-increment decomposition over a sparse host.
// ---------------------------------------------------------------------------

template <class S>
void run_structure(Ctx& ctx, const Opts& o) {
    using ST = szlab::ScalarTraits<S>;
    const long long n = o.n > 0 ? o.n : 32;
    const Rat p = szlab::parse_rational(o.p_str);
    const S sigma = parse_scalar<S>(o.sigma_str);
    const std::uint64_t host_seed = sub_seed(ctx, kStreamPrimary);
    const std::uint64_t fn_seed = sub_seed(ctx, kStreamFunction);
    const std::uint64_t shift_seed = sub_seed(ctx, kStreamSecond);
    const long long max_steps = ctx.cfg.guard > 0 ? ctx.cfg.guard : o.max_steps;

    const auto w = szlab::sample_gnp_weight(n, p, host_seed, o.allow_small_p);
    szlab::Kernel2<S> f = [&] {
        if (o.fn == "ones") {
            auto k = szlab::constant_kernel2<S>(n, n, ST::from_int(1));
            for (long long i = 0; i < n; ++i)
                k.v[static_cast<std::size_t>(i * n + i)] = ST::from_int(0);
            return k;
        }
        return szlab::random_kernel2<S>(n, n, szlab::BoundedMode::Unit, fn_seed);
    }();

    auto& par = ctx.report["parameters"];
    par["n"] = n;
    par["p"] = o.p_str;
    par["sigma"] = o.sigma_str;
    par["fn"] = o.fn;
    par["max_steps"] = max_steps;
    par["seed_streams"] = {{"host", kStreamPrimary},
                           {"function", kStreamFunction},
                           {"shift", kStreamSecond}};

    const auto dec = szlab::structure_decompose(f, w, sigma, shift_seed, max_steps);
    auto& res = ctx.report["result"];
    res["steps"] = dec.steps;
    res["atoms"] = dec.factor.num_atoms;
    res["complexity"] = dec.factor.complexity();
    res["f2_mass"] = szlab::scalar_json(dec.f2_mass);
    res["f3_box4"] = szlab::scalar_json(dec.f3_box4);

    // Recheck the decomposition invariants from the returned parts.
    const auto nu = szlab::nu_kernel<S>(w);
    bool sum_ok = true, range_ok = true, nonneg_ok = true;
    for (long long x = 0; x < n; ++x)
        for (long long y = 0; y < n; ++y) {
            const S fnu = f.at(x, y) * nu.at(x, y);
            const S sum = dec.f1.at(x, y) + dec.f2.at(x, y) + dec.f3.at(x, y);
            if (!close_scalar(sum, fnu)) sum_ok = false;
            if (dec.f1.at(x, y) < ST::from_int(0) || dec.f1.at(x, y) > ST::from_int(1))
                range_ok = false;
            if (dec.f2.at(x, y) < ST::from_int(0)) nonneg_ok = false;
            if (dec.f1.at(x, y) + dec.f3.at(x, y) < ST::from_int(0)) nonneg_ok = false;
        }
    const S box4 = szlab::box2_pow4(dec.f3);
    const S sigma4 = sigma * sigma * sigma * sigma;
    const bool defect_ok = box4 < sigma4;
    res["invariants"] = {{"reassembles", sum_ok},
                         {"structured_in_range", range_ok},
                         {"parts_nonnegative", nonneg_ok},
                         {"defect_below_sigma4", defect_ok}};
    ctx.report["verified"] = sum_ok && range_ok && nonneg_ok && defect_ok;
}

// ---------------------------------------------------------------------------
// relative-removal: the full sparse pipeline.
// ---------------------------------------------------------------------------

template <class S>
void run_relative_removal(Ctx& ctx, const Opts& o) {
    const long long n = o.n > 0 ? o.n : 36;
    const Rat p = szlab::parse_rational(o.p_str);
    const S sigma = parse_scalar<S>(o.sigma_str);
    const std::uint64_t host_seed = sub_seed(ctx, kStreamPrimary);
    const std::uint64_t shift_seed = sub_seed(ctx, kStreamSecond);
    const long long max_steps = ctx.cfg.guard > 0 ? ctx.cfg.guard : o.max_steps;

    const auto w = szlab::sample_gnp_weight(n, p, host_seed, o.allow_small_p);
    std::vector<char> g_adj(static_cast<std::size_t>(n * n), 0);
    const long long half = n / 2, core = std::min<long long>(n, 10);
    for (long long u = 0; u < n; ++u)
        for (long long v = 0; v < n; ++v) {
            if (u == v || !w.edge(u, v)) continue;
            bool keep = true;
            if (o.subgraph == "bipartite") keep = (u < half) != (v < half);
            else if (o.subgraph == "core") keep = u < core && v < core;
            else if (o.subgraph != "full")
                throw szlab::InvalidArgument(
                    "relative-removal: --subgraph must be full, bipartite, or core");
            if (keep) g_adj[static_cast<std::size_t>(u * n + v)] = 1;
        }

    auto& par = ctx.report["parameters"];
    par["n"] = n;
    par["p"] = o.p_str;
    par["eps"] = o.eps;
    par["tol"] = o.tol;
    par["sigma"] = o.sigma_str;
    par["subgraph"] = o.subgraph;
    par["max_steps"] = max_steps;
    par["seed_streams"] = {{"host", kStreamPrimary}, {"shift", kStreamSecond}};
    par["derived_host_seed"] = host_seed;

    const auto rep =
        szlab::relative_removal_experiment(w, g_adj, o.eps, o.tol, sigma, shift_seed, max_steps);
    auto& res = ctx.report["result"];
    res["correlations"] = {
        {"mean_nu", szlab::rat_to_string(rep.forms.mean_nu)},
        {"box4", szlab::rat_to_string(rep.forms.box4)},
        {"octahedral", szlab::rat_to_string(rep.forms.octahedral)},
        {"octahedral_injective", szlab::rat_to_string(rep.forms.octahedral_injective)},
        {"pass", rep.forms.pass}};
    res["decomposition"] = {{"steps", rep.structure_steps},
                            {"f2_mass", szlab::scalar_json(rep.f2_mass)},
                            {"f3_box", rep.f3_box}};
    res["eps_eff"] = rep.eps_eff;
    res["edges_before"] = rep.edges_before;
    res["deleted_edges"] = rep.deleted_edges;
    res["triangles_before"] = rep.triangles_before;
    res["triangles_after"] = rep.triangles_after;
    res["certificate_mode"] = rep.certificate_mode;
    res["certificate_M"] = rep.certificate_M;
    res["triangle_free"] = rep.triangle_free;
    if (!rep.diagnostics.empty()) res["notes"] = rep.diagnostics;
    ctx.report["verified"] = rep.triangle_free && rep.forms.pass;
}

// ---------------------------------------------------------------------------
// Dispatch and envelope plumbing.
// ---------------------------------------------------------------------------

template <class F>
void dispatch_mode(Ctx& ctx, F&& run_templated) {
    if (szlab::rational_mode(ctx.cfg)) run_templated(Rat{});
    else run_templated(double{});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-model laboratory for density, colouring, and removal arguments"};
    app.require_subcommand(1);

    Opts o;
    szlab::RunConfig cfg;
    bool json_flag = false;
    app.add_option("--seed", cfg.master_seed, "Master seed; per-artifact seeds derive from it");
    app.add_option("--mode", cfg.mode, "Arithmetic mode")
        ->check(CLI::IsMember({"rational", "float"}));
    app.add_option("--guard", cfg.guard, "Override the command's search/verify budget");
    app.add_option("--format", cfg.format, "Report format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_flag("--json", json_flag, "Shorthand for --format json");

    auto add = [&](const std::string& name, const std::string& desc) {
        auto* c = app.add_subcommand(name, desc);
        c->fallthrough();
        return c;
    };

    auto* c_count = add("count-aps", "Count ordered k-term progressions in a residue set");
    c_count->add_option("--n", o.n, "Universe size (modulus or interval length)")->required();
    c_count->add_option("--k", o.k, "Progression length");
    c_count->add_option("--set", o.set_csv, "Explicit comma-separated elements");
    c_count->add_option("--density", o.density, "Random set density (used when --set is absent)");
    c_count->add_flag("--interval", o.interval, "Interval mode [1,n] instead of cyclic");

    auto* c_beh = add("behrend", "Dense progression-free set by the digit-sphere construction");
    c_beh->add_option("--n", o.n, "Ambient interval length")->required();
    c_beh->add_option("--d", o.d, "Digit dimension");
    c_beh->add_option("--m", o.m, "Digit base (>= 10)");
    c_beh->add_option("--radius", o.radius, "Fixed squared radius (default: best shell)");
    c_beh->add_option("--delta", o.delta, "Pick d, m automatically for target density delta");

    auto* c_bohr = add("bohr", "Level set of one frequency: |alpha x| close to integers");
    c_bohr->add_option("--n", o.n, "Range [1, n]")->required();
    c_bohr->add_option("--alpha", o.alpha, "Frequency (rational p/q)");
    c_bohr->add_option("--theta", o.theta, "Width in (0, 1/2]");

    auto* c_qrec = add("qrec", "Least r with alpha r^2 within eps of an integer");
    c_qrec->add_option("--alpha", o.alpha, "Frequency (rational p/q)");
    c_qrec->add_option("--eps", o.eps_str, "Closeness target (rational p/q)");
    c_qrec->add_option("--rmax", o.rmax, "Search bound");

    auto* c_vdw = add("vdw", "Threshold for monochromatic k-progressions under m colours");
    c_vdw->add_option("--k", o.k, "Progression length");
    c_vdw->add_option("--m", o.colours, "Number of colours");
    c_vdw->add_option("--limit", o.limit, "Search horizon");

    auto* c_schur = add("schur", "Monochromatic x + y = z in a colouring of [1, n]");
    c_schur->add_option("--n", o.n, "Interval length");
    c_schur->add_option("--m", o.colours, "Number of colours");
    c_schur->add_option("--colours", o.colour_csv, "Explicit colouring (comma-separated)");

    auto* c_hj = add("hales-jewett", "Combinatorial-subspace search in a coloured grid");
    c_hj->add_option("--k", o.k, "Alphabet size");
    c_hj->add_option("--d", o.d, "Grid dimension");
    c_hj->add_option("--m", o.colours, "Number of colours");
    c_hj->add_option("--j", o.j, "Subspace dimension to search for");
    c_hj->add_flag("--endpoint,!--no-endpoint", o.endpoint, "Include the endpoint value");
    c_hj->add_option("--colours-list", o.colour_csv, "Explicit point colouring");

    auto* c_erg = add("ergodic", "Cesaro averages of an observable along a permutation system");
    c_erg->add_option("--states", o.states, "Number of states");
    c_erg->add_option("--N", o.nsteps, "Averaging horizon (0 = one full period)");
    c_erg->add_option("--system", o.system, "System kind")
        ->check(CLI::IsMember({"random", "rotation"}));

    auto* c_rec = add("recurrence", "Averaged multiple correlation along arithmetic times");
    c_rec->add_option("--states", o.states, "Number of states");
    c_rec->add_option("--k", o.k, "Number of factors");
    c_rec->add_option("--N", o.nsteps, "Averaging horizon");
    c_rec->add_option("--system", o.system, "System kind")
        ->check(CLI::IsMember({"random", "rotation"}));

    auto* c_box = add("boxnorm", "Two- or three-variable box norm of a kernel");
    c_box->add_option("--nx", o.nx, "Rows");
    c_box->add_option("--ny", o.ny, "Columns");
    c_box->add_option("--nz", o.nz, "Third dimension (> 0 switches to the 8-factor norm)");
    c_box->add_option("--bounded", o.bounded, "Kernel range")
        ->check(CLI::IsMember({"unit", "signed", "none"}));
    c_box->add_option("--load", o.load_path, "Load a kernel file instead of sampling");
    c_box->add_option("--save", o.save_path, "Save the sampled kernel");

    auto* c_lam = add("lambda", "Triple product form of three kernels and its box bound");
    c_lam->add_option("--n", o.n, "Side length");

    auto* c_reg = add("regularize", "Structured/small/uniform kernel decomposition");
    c_reg->add_option("--n", o.n, "Side length");
    c_reg->add_option("--tau", o.tau_str, "Energy-increment tolerance (rational p/q)");
    c_reg->add_option("--growth", o.growth, "Complexity growth schedule")
        ->check(CLI::IsMember({"linear", "removal"}));
    c_reg->add_option("--growth-c", o.growth_c, "Linear growth slope");

    auto* c_tri = add("triangle-removal", "Removal certificate with an independent audit");
    c_tri->add_option("--n", o.n, "Side length");
    c_tri->add_option("--eps", o.eps, "Triple-form budget in (0,1)");
    c_tri->add_option("--preset", o.preset, "Instance family")
        ->check(CLI::IsMember({"constant", "scaled-random", "behrend"}));
    c_tri->add_option("--density", o.tri_density, "Kernel density for the constant/scaled presets");
    c_tri->add_option("--d", o.d, "Digit dimension for the behrend preset");
    c_tri->add_option("--m", o.m, "Digit base for the behrend preset");
    c_tri->add_flag("--inject-broken-tau", o.inject_broken_tau,
                    "Corrupt the certificate's tau before the audit (must fail)");

    auto* c_roth = add("roth", "Progression counting as a triple product form");
    c_roth->add_option("--n", o.n, "Cyclic modulus")->required();
    c_roth->add_flag("--full", o.full, "Use the full residue set");
    c_roth->add_option("--set", o.set_csv, "Explicit comma-separated residues");
    c_roth->add_option("--density", o.density, "Random set density");

    auto* c_gnp = add("gnp", "Sample a sparse host weight with exact Bernoulli coins");
    c_gnp->add_option("--n", o.n, "Vertices")->required();
    c_gnp->add_option("--p", o.p_str, "Edge probability (rational p/q)");
    c_gnp->add_flag("--allow-small-p", o.allow_small_p, "Permit p below the 1/log n floor");
    c_gnp->add_option("--save", o.save_path, "Save the normalized weight kernel");

    auto* c_lf = add("linear-forms", "Pseudorandomness battery for a sparse host");
    c_lf->add_option("--n", o.n, "Vertices")->required();
    c_lf->add_option("--p", o.p_str, "Edge probability (rational p/q)");
    c_lf->add_option("--tol", o.tol, "Allowed deviation from the dense prediction");
    c_lf->add_flag("--allow-small-p", o.allow_small_p, "Permit p below the 1/log n floor");

    auto* c_str = add("structure", "Energy-increment decomposition over a sparse host");
    c_str->add_option("--n", o.n, "Vertices");
    c_str->add_option("--p", o.p_str, "Host edge probability (rational p/q)");
    c_str->add_option("--sigma", o.sigma_str, "Defect target (rational p/q)");
    c_str->add_option("--fn", o.fn, "Bounded function")
        ->check(CLI::IsMember({"random", "ones"}));
    c_str->add_option("--max-steps", o.max_steps, "Energy iteration budget");
    c_str->add_flag("--allow-small-p", o.allow_small_p, "Permit p below the 1/log n floor");

    auto* c_rel = add("relative-removal", "Sparse triangle removal end to end");
    c_rel->add_option("--n", o.n, "Vertices");
    c_rel->add_option("--p", o.p_str, "Host edge probability (rational p/q)");
    c_rel->add_option("--eps", o.eps, "Removal budget in (0,1)");
    c_rel->add_option("--tol", o.tol, "Linear-forms tolerance");
    c_rel->add_option("--sigma", o.sigma_str, "Decomposition defect target");
    c_rel->add_option("--subgraph", o.subgraph, "Subgraph of the host to clean")
        ->check(CLI::IsMember({"full", "bipartite", "core"}));
    c_rel->add_option("--max-steps", o.max_steps, "Energy iteration budget");
    c_rel->add_flag("--allow-small-p", o.allow_small_p, "Permit p below the 1/log n floor");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    // linear-forms wants a wider default tolerance than the shared field's.
    if (app.got_subcommand(c_lf) && c_lf->count("--tol") == 0) o.tol = 0.5;
    if (app.got_subcommand(c_rel) && c_rel->count("--tol") == 0) o.tol = 0.5;
    // One constrained digit suffices for the removal preset's small instances.
    if (app.got_subcommand(c_tri) && c_tri->count("--d") == 0) o.d = 1;
    if (json_flag) cfg.format = "json";
    cfg.command = app.get_subcommands().front()->get_name();

    Ctx ctx;
    ctx.cfg = cfg;
    ctx.report = szlab::make_report(cfg);

    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (cfg.command == "count-aps") run_count_aps(ctx, o);
        else if (cfg.command == "behrend") run_behrend(ctx, o);
        else if (cfg.command == "bohr")
            dispatch_mode(ctx, [&](auto s) { run_bohr<decltype(s)>(ctx, o); });
        else if (cfg.command == "qrec")
            dispatch_mode(ctx, [&](auto s) { run_qrec<decltype(s)>(ctx, o); });
        else if (cfg.command == "vdw") run_vdw(ctx, o);
        else if (cfg.command == "schur") run_schur(ctx, o);
        else if (cfg.command == "hales-jewett") run_hales_jewett(ctx, o);
        else if (cfg.command == "ergodic")
            dispatch_mode(ctx, [&](auto s) { run_ergodic<decltype(s)>(ctx, o); });
        else if (cfg.command == "recurrence")
            dispatch_mode(ctx, [&](auto s) { run_recurrence<decltype(s)>(ctx, o); });
        else if (cfg.command == "boxnorm")
            dispatch_mode(ctx, [&](auto s) { run_boxnorm<decltype(s)>(ctx, o); });
        else if (cfg.command == "lambda")
            dispatch_mode(ctx, [&](auto s) { run_lambda<decltype(s)>(ctx, o); });
        else if (cfg.command == "regularize")
            dispatch_mode(ctx, [&](auto s) { run_regularize<decltype(s)>(ctx, o); });
        else if (cfg.command == "triangle-removal")
            dispatch_mode(ctx, [&](auto s) { run_triangle_removal<decltype(s)>(ctx, o); });
        else if (cfg.command == "roth")
            dispatch_mode(ctx, [&](auto s) { run_roth<decltype(s)>(ctx, o); });
        else if (cfg.command == "gnp") run_gnp(ctx, o);
        else if (cfg.command == "linear-forms") run_linear_forms(ctx, o);
        else if (cfg.command == "structure")
            dispatch_mode(ctx, [&](auto s) { run_structure<decltype(s)>(ctx, o); });
        else if (cfg.command == "relative-removal")
            dispatch_mode(ctx, [&](auto s) { run_relative_removal<decltype(s)>(ctx, o); });
    } catch (const szlab::CertificateFailure& e) {
        ctx.report["status"] = "certificate-failure";
        ctx.report["diagnostics"] = std::string(e.what()) + "; " + e.diagnostics;
        if (ctx.report["verified"].is_null()) ctx.report["verified"] = false;
        ctx.exit_code = 1;
    } catch (const szlab::PreconditionViolated& e) {
        ctx.report["status"] = "precondition-violated";
        ctx.report["diagnostics"] = e.what();
        ctx.exit_code = 1;
    } catch (const szlab::InvalidArgument& e) {
        ctx.report["status"] = "invalid-argument";
        ctx.report["diagnostics"] = e.what();
        ctx.exit_code = 2;
    } catch (const szlab::IterationLimit& e) {
        ctx.report["status"] = "iteration-limit";
        ctx.report["diagnostics"] = e.what();
        ctx.exit_code = 3;
    } catch (const szlab::ResourceLimit& e) {
        ctx.report["status"] = "resource-limit";
        ctx.report["diagnostics"] = e.what();
        ctx.exit_code = 3;
    }

    if (!szlab::rational_mode(cfg)) {
        const auto dt = std::chrono::steady_clock::now() - t0;
        ctx.report["runtime_ms"] =
            std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(dt).count();
    }

    const auto violations = szlab::validate_run_report(ctx.report);
    std::cout << szlab::render_report(ctx.report, cfg.format);
    if (!violations.empty()) {
        std::cerr << "report violates its schema:\n";
        for (const auto& v : violations) std::cerr << "  " << v << "\n";
        return 1;
    }
    return ctx.exit_code;
}
