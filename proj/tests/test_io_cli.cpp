// End-to-end tests of the command-line surface: exit codes, report schema,
// determinism, the independent audit's fault injection, and file round-trips.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "szlab/regularity.hpp"
#include "szlab/report.hpp"
#include "szlab/rng.hpp"

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(SZLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

nlohmann::json parse_report(const RunResult& r) {
    auto doc = nlohmann::json::parse(r.out);
    CHECK(szlab::validate_run_report(doc).empty());
    return doc;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("published schema file matches the embedded text") {
    CHECK(slurp(SZLAB_SCHEMA_PATH) == std::string(szlab::run_report_schema_text()));
}

TEST_CASE("schema checker flags structural defects") {
    auto good = nlohmann::json::parse(run_cli("roth --n 7 --full").out);
    REQUIRE(szlab::validate_run_report(good).empty());

    auto missing = good;
    missing.erase("status");
    CHECK_FALSE(szlab::validate_run_report(missing).empty());

    auto extra = good;
    extra["surprise"] = 1;
    CHECK_FALSE(szlab::validate_run_report(extra).empty());

    auto bad_enum = good;
    bad_enum["mode"] = "decimal";
    CHECK_FALSE(szlab::validate_run_report(bad_enum).empty());

    auto bad_type = good;
    bad_type["guard"] = "plenty";
    CHECK_FALSE(szlab::validate_run_report(bad_type).empty());

    auto bad_nullable = good;
    bad_nullable["verified"] = "yes";
    CHECK_FALSE(szlab::validate_run_report(bad_nullable).empty());
}

TEST_CASE("rational-mode reports are byte-identical across runs") {
    const std::string args = "count-aps --n 64 --density 0.4 --seed 11";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(parse_report(a)["runtime_ms"].is_null());

    // The float lane carries a measured runtime, so only the rational lane
    // promises byte identity.
    const auto c = run_cli(args + " --mode float");
    REQUIRE(c.code == 0);
    CHECK_FALSE(parse_report(c)["runtime_ms"].is_null());
}

TEST_CASE("progression counting and explicit sets report verified results") {
    const auto r = run_cli("count-aps --n 31 --set 0,1,5 --k 3");
    REQUIRE(r.code == 0);
    const auto doc = parse_report(r);
    CHECK(doc["status"] == "ok");
    CHECK(doc["result"]["size"] == 3);
    CHECK(doc["verified"] == true);
    // r = 0 always contributes exactly |A|.
    CHECK(doc["result"]["trivial"] == 3);
}

TEST_CASE("threshold search matches the known small value") {
    const auto r = run_cli("vdw --k 3 --m 2");
    REQUIRE(r.code == 0);
    const auto doc = parse_report(r);
    CHECK(doc["result"]["exact"] == true);
    CHECK(doc["result"]["W"] == 9);
    CHECK(doc["verified"] == true);
    CHECK(doc["result"]["certificate"]["n"] == 8);
}

TEST_CASE("the full residue set pins the triple form to one") {
    const auto r = run_cli("roth --n 7 --full");
    REQUIRE(r.code == 0);
    const auto doc = parse_report(r);
    CHECK(doc["result"]["lambda"] == "1");
    CHECK(doc["result"]["ordered_count"] == 49);
    CHECK(doc["verified"] == true);
}

TEST_CASE("usage errors exit with code 2") {
    // Library-level rejection of a degenerate parameter, report still emitted.
    const auto r = run_cli("vdw --k 3 --m 2 --limit 0");
    CHECK(r.code == 2);
    const auto doc = parse_report(r);
    CHECK(doc["status"] == "invalid-argument");
    CHECK(doc["verified"].is_null());

    // Parser-level rejection of an unknown flag.
    CHECK(run_cli("vdw --such-flag-does-not-exist").code == 2);
    // Missing subcommand.
    CHECK(run_cli("").code == 2);
}

TEST_CASE("exhausted iteration budgets exit with code 3") {
    const auto r = run_cli("structure --n 16 --p 1 --sigma 1/100 --max-steps 0 --seed 2");
    CHECK(r.code == 3);
    const auto doc = parse_report(r);
    CHECK(doc["status"] == "iteration-limit");
    CHECK_FALSE(doc["diagnostics"].is_null());
}

TEST_CASE("certificate audit passes honest runs and catches a corrupted schedule") {
    const auto good = run_cli("triangle-removal --n 18 --eps 0.01 --preset constant");
    REQUIRE(good.code == 0);
    const auto gdoc = parse_report(good);
    CHECK(gdoc["result"]["producer_verified"] == true);
    CHECK(gdoc["result"]["audit_ok"] == true);
    CHECK(gdoc["verified"] == true);

    const auto bad =
        run_cli("triangle-removal --n 18 --eps 0.01 --preset constant --inject-broken-tau");
    CHECK(bad.code == 1);
    const auto bdoc = parse_report(bad);
    CHECK(bdoc["status"] == "certificate-failure");
    CHECK(bdoc["result"]["audit_ok"] == false);
    CHECK(bdoc["verified"] == false);
    const auto diag = bdoc["diagnostics"].get<std::string>();
    CHECK(diag.find("tau") != std::string::npos);
}

TEST_CASE("the audit itself accepts production certificates directly") {
    // In-process cross-check that the audit agrees with the producer on an
    // untampered certificate and rejects any single-field corruption.
    using S = szlab::Rat;
    const auto sp = szlab::uniform_space(12);
    std::vector<S> vals(144, szlab::Rat(1, 5));
    const auto f = szlab::make_kernel2<S>(sp, sp, vals, szlab::BoundedMode::Unit);
    const auto cert = szlab::strong_triangle_removal(f, f, f, 0.01);
    CHECK(szlab::audit_removal_certificate(f, f, f, cert).ok);

    auto broken = cert;
    broken.threshold += szlab::Rat(1, 4096);
    const auto a1 = szlab::audit_removal_certificate(f, f, f, broken);
    CHECK_FALSE(a1.ok);
    CHECK(a1.diagnostics.find("threshold") != std::string::npos);

    auto wrong_mass = cert;
    wrong_mass.removed_xy += szlab::Rat(1, 7);
    CHECK_FALSE(szlab::audit_removal_certificate(f, f, f, wrong_mass).ok);

    auto wrong_lambda = cert;
    wrong_lambda.lambda += szlab::Rat(1, 9);
    CHECK_FALSE(szlab::audit_removal_certificate(f, f, f, wrong_lambda).ok);

    auto surviving = cert;
    std::fill(surviving.exy.begin(), surviving.exy.end(), 1);
    std::fill(surviving.eyz.begin(), surviving.eyz.end(), 1);
    std::fill(surviving.ezx.begin(), surviving.ezx.end(), 1);
    const auto a2 = szlab::audit_removal_certificate(f, f, f, surviving);
    CHECK_FALSE(a2.ok);
    CHECK(a2.diagnostics.find("vanish") != std::string::npos);
}

TEST_CASE("seed derivation in reports follows the documented counter scheme") {
    const auto r = run_cli("gnp --n 40 --p 1/2 --seed 5");
    REQUIRE(r.code == 0);
    const auto doc = parse_report(r);
    CHECK(doc["parameters"]["derived_seed"].get<std::uint64_t>() == szlab::derive_seed(5, 0));
    CHECK(doc["result"]["edge_cells"].get<long long>() > 0);
}

TEST_CASE("sampled hosts round-trip through kernel files") {
    const std::string path = "cli_roundtrip_nu.kernel";
    const auto g = run_cli("gnp --n 20 --p 1/2 --seed 3 --save " + path);
    REQUIRE(g.code == 0);

    const auto b = run_cli("boxnorm --load " + path);
    REQUIRE(b.code == 0);
    const auto bdoc = parse_report(b);

    const auto lf = run_cli("linear-forms --n 20 --p 1/2 --seed 3 --tol 99 --allow-small-p");
    REQUIRE(lf.code == 0);
    const auto ldoc = parse_report(lf);
    // Same host, two independent paths to the four-factor correlation.
    CHECK(bdoc["result"]["pow4"] == ldoc["result"]["box4"]);
    std::remove(path.c_str());
}

TEST_CASE("alternative output formats carry the same flattened payload") {
    const auto csv = run_cli("boxnorm --nx 4 --ny 4 --seed 7 --format csv");
    REQUIRE(csv.code == 0);
    std::size_t lines = 0;
    for (char ch : csv.out)
        if (ch == '\n') ++lines;
    CHECK(lines == 2);
    CHECK(csv.out.find("command") != std::string::npos);
    CHECK(csv.out.find("boxnorm") != std::string::npos);

    const auto text = run_cli("boxnorm --nx 4 --ny 4 --seed 7 --format text");
    REQUIRE(text.code == 0);
    CHECK(text.out.find("command: boxnorm") != std::string::npos);
    CHECK(text.out.find("result.pow4: ") != std::string::npos);

    const auto js = run_cli("boxnorm --nx 4 --ny 4 --seed 7 --json");
    REQUIRE(js.code == 0);
    parse_report(js);
}

TEST_CASE("every command produces a schema-valid report") {
    const char* invocations[] = {
        "count-aps --n 20 --density 0.5 --seed 1",
        "behrend --n 300 --d 2 --m 10",
        "bohr --n 60 --alpha 3/8 --theta 1/5",
        "qrec --alpha 5/13 --eps 1/10 --rmax 200",
        "vdw --k 3 --m 2 --limit 16",
        "schur --n 10 --m 2 --seed 4",
        "hales-jewett --k 3 --d 2 --m 2 --seed 6",
        "ergodic --states 10 --N 0 --seed 8",
        "recurrence --states 8 --k 3 --N 24 --seed 9",
        "boxnorm --nx 5 --ny 5 --seed 10",
        "boxnorm --nx 4 --ny 4 --nz 4 --bounded signed --seed 20",
        "lambda --n 8 --seed 12",
        "regularize --n 12 --tau 1/4 --seed 13",
        "triangle-removal --n 31 --eps 0.02 --preset behrend",
        "roth --n 11 --density 0.4 --seed 14",
        "gnp --n 30 --p 2/5 --seed 15",
        "linear-forms --n 64 --p 1/2 --seed 16",
        "structure --n 18 --p 1 --sigma 1/4 --seed 17",
        "relative-removal --n 30 --p 3/5 --eps 0.05 --sigma 1/2 --seed 18",
    };
    for (const char* args : invocations) {
        INFO(args);
        const auto r = run_cli(args);
        REQUIRE(r.code == 0);
        const auto doc = parse_report(r);
        CHECK(doc["status"] == "ok");
        // Where a command claims verification, the claim must be positive.
        if (!doc["verified"].is_null()) CHECK(doc["verified"] == true);
    }
}

TEST_CASE("float mode runs the same commands through the double lane") {
    const char* invocations[] = {
        "bohr --n 60 --alpha 3/8 --theta 1/5 --mode float",
        "qrec --alpha 5/13 --eps 1/10 --rmax 200 --mode float",
        "boxnorm --nx 5 --ny 5 --seed 10 --mode float",
        "lambda --n 8 --seed 12 --mode float",
        "regularize --n 12 --tau 1/4 --seed 13 --mode float",
        "roth --n 11 --density 0.4 --seed 14 --mode float",
        "structure --n 18 --p 1 --sigma 0.25 --seed 17 --mode float",
    };
    for (const char* args : invocations) {
        INFO(args);
        const auto r = run_cli(args);
        REQUIRE(r.code == 0);
        const auto doc = parse_report(r);
        CHECK(doc["mode"] == "float");
        if (!doc["verified"].is_null()) CHECK(doc["verified"] == true);
    }
}
