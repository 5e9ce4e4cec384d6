#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cfl/verify.hpp"

using namespace cfl;
namespace fs = std::filesystem;

namespace {

std::string temp_dir() {
    static int counter = 0;
    const auto dir = fs::temp_directory_path() / ("cflkit_test_" + std::to_string(::getpid()) +
                                                  "_" + std::to_string(counter++));
    fs::create_directories(dir);
    return dir.string();
}

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("defaults are valid and digest is deterministic") {
        const RunConfig a = RunConfig::defaults();
        const RunConfig b = RunConfig::defaults();
        a.validate();
        CHECK(a.digest_hex() == b.digest_hex());
        CHECK(a.digest_hex().size() == 16);
    }
    SUBCASE("round trip through the text form") {
        RunConfig cfg = RunConfig::defaults();
        cfg.scenario = "plane_wave";
        cfg.nx = 129;
        cfg.seed = 7;
        const RunConfig back = parse_config_text(cfg.canonical_text());
        CHECK(back.digest_hex() == cfg.digest_hex());
        CHECK(back.scenario == "plane_wave");
        CHECK(back.nx == 129);
    }
    SUBCASE("unknown keys are line-addressed errors") {
        const std::string text = "cflkit-config-v1\nscenario = zero\nbogus_key = 1\n";
        try {
            parse_config_text(text);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(e.line() == 3);
            CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
        }
    }
    SUBCASE("zero lambda rejected") {
        const std::string text = "cflkit-config-v1\nlambda_set bad = (0,0)\n";
        CHECK_THROWS_AS(parse_config_text(text), ValidationError);
    }
    SUBCASE("grid floor enforced") {
        const std::string text = "cflkit-config-v1\nnx = 8\n";
        CHECK_THROWS_AS(parse_config_text(text), ValidationError);
    }
    SUBCASE("missing version line") {
        CHECK_THROWS_AS(parse_config_text("scenario = zero\n"), ValidationError);
    }
}

TEST_CASE("field grid CSV round trip") {
    const std::string dir = temp_dir();
    const PlaneWaveParams p = plane_wave({0.3, 0.0}, {0.2, 0.0}, 1.0);
    const FieldGrid g = sample_plane_wave(p, 4.0, 1.0, 33, 17);
    const std::string path = dir + "/fields.csv";
    write_field_grid_csv(path, g, "deadbeefdeadbeef");
    const FieldGrid back = read_field_grid_csv(path);
    CHECK(back.nx == g.nx);
    CHECK(back.nt == g.nt);
    CHECK(back.L == g.L);
    double err = 0.0;
    for (size_t i = 0; i < g.q.size(); ++i) err = std::max(err, std::abs(g.q[i] - back.q[i]));
    CHECK(err == 0.0);  // 17 significant digits round-trip exactly
}

TEST_CASE("profile ingestion") {
    const std::string dir = temp_dir();
    SUBCASE("round trip with boundary block") {
        Profile p;
        for (int i = 0; i < 20; ++i) {
            p.x.push_back(0.25 * i);
            p.q0.push_back({0.1 * i, -0.05 * i});
            p.r0.push_back({0.02 * i, 0.01});
        }
        for (int i = 0; i < 5; ++i) {
            p.t.push_back(0.1 * i);
            p.g0.push_back({0.0, 0.1 * i});
            p.h0.push_back({0.3, 0.0});
        }
        const std::string path = dir + "/profile.txt";
        write_profile(path, p);
        const Profile back = read_profile(path);
        REQUIRE(back.x.size() == p.x.size());
        REQUIRE(back.t.size() == p.t.size());
        CHECK(std::abs(back.q0[7] - p.q0[7]) == 0.0);
        CHECK(std::abs(back.g0[3] - p.g0[3]) == 0.0);
    }
    SUBCASE("malformed rows are rejected with a line number") {
        const std::string path = dir + "/bad_profile.txt";
        std::ofstream out(path);
        out << "cflkit-profile-v1\nn = 2\ncolumns x re_q0 im_q0 re_r0 im_r0\n"
            << "0 0.1 0 0.05 0\n"
            << "1 not_a_number 0 0.05 0\n";
        out.close();
        try {
            read_profile(path);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(e.line() == 5);
        }
    }
    SUBCASE("wrong version tag rejected") {
        const std::string path = dir + "/wrong.txt";
        std::ofstream out(path);
        out << "cflkit-fieldgrid-v1\n";
        out.close();
        CHECK_THROWS_AS(read_profile(path), ValidationError);
    }
}

TEST_CASE("traces and scattering record round trip") {
    const std::string dir = temp_dir();
    const PlaneWaveParams p = plane_wave({0.3, 0.0}, {0.2, 0.0}, 1.0);
    const FieldGrid g = sample_plane_wave(p, 4.0, 0.5, 33, 17);
    const BoundaryTraces tr = extract_boundary(g);
    write_traces(dir + "/traces.txt", tr, g.L, g.T_end, "00");
    const BoundaryTraces tback = read_traces(dir + "/traces.txt");
    CHECK(tback.g0.size() == tr.g0.size());
    CHECK(std::abs(tback.g1[5] - tr.g1[5]) == 0.0);

    FieldGrid zg = sample_zero(4.0, 0.5, 33, 17);
    const BoundaryTraces ztr = extract_boundary(zg);
    std::vector<ScatteringRecord> recs;
    recs.push_back(make_scattering_record(zg, ztr, {0.9, 0.3}));
    recs.push_back(make_scattering_record(zg, ztr, {-0.2, 0.4}));
    write_scattering_records(dir + "/scat.txt", recs, "00");
    const auto back = read_scattering_records(dir + "/scat.txt");
    REQUIRE(back.size() == 2);
    CHECK(max_abs(back[0].s - recs[0].s) == 0.0);
    CHECK(back[1].Sn_valid[0]);
    CHECK(max_abs(back[1].Sn[2] - recs[1].Sn[2]) == 0.0);
}

TEST_CASE("verification machinery") {
    RunConfig cfg = RunConfig::defaults();
    SUBCASE("algebra suite passes and reports") {
        VerifyContext ctx(cfg);
        const SuiteResult r = run_suite("algebra", ctx);
        CHECK(r.pass());
        REQUIRE(r.checks.size() == 2);
        CHECK(r.checks[0].measured <= r.checks[0].tol);
        const std::string dir = temp_dir();
        write_verify_report(dir + "/report.txt", {r}, cfg.digest_hex());
        std::ifstream in(dir + "/report.txt");
        std::string first;
        std::getline(in, first);
        CHECK(first == "cflkit-verify-v1");
    }
    SUBCASE("unknown suite rejected") {
        VerifyContext ctx(cfg);
        CHECK_THROWS_AS(run_suite("nope", ctx), std::invalid_argument);
    }
}

#ifdef CFLKIT_CLI_PATH
TEST_CASE("exit-status contract of the command line tool") {
    const std::string dir = temp_dir();
    const std::string cli = CFLKIT_CLI_PATH;

    // input error: malformed config
    {
        std::ofstream out(dir + "/bad.cfg");
        out << "cflkit-config-v1\nbogus = 1\n";
    }
    int rc = std::system((cli + " --config " + dir + "/bad.cfg simulate > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(rc) == 2);

    // a fast passing suite: exit 0
    {
        std::ofstream out(dir + "/ok.cfg");
        out << "cflkit-config-v1\nscenario = zero\nnx = 33\nnt = 33\nL = 4\nT_end = 0.5\n";
    }
    rc = std::system((cli + " --config " + dir + "/ok.cfg --out " + dir +
                      " verify --suite algebra > /dev/null 2>&1")
                         .c_str());
    CHECK(WEXITSTATUS(rc) == 0);

    // simulate + spectral round trip through files
    rc = std::system((cli + " --config " + dir + "/ok.cfg --out " + dir +
                      " simulate > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    CHECK(fs::exists(dir + "/fields.csv"));
    rc = std::system((cli + " --config " + dir + "/ok.cfg --out " + dir +
                      " spectral --fields " + dir + "/fields.csv > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    CHECK(fs::exists(dir + "/scattering.txt"));

    // missing input: exit 2
    rc = std::system((cli + " --config " + dir + "/ok.cfg --out " + dir +
                      " spectral --fields " + dir + "/absent.csv > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(rc) == 2);
}
#endif
