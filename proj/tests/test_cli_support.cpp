// SPDX-License-Identifier: MIT
#include "doctest.h"

#include "holder/calibration.hpp"
#include "holder/errors.hpp"
#include "holder/fixtures.hpp"
#include "holder/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace holder;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch() {
    const fs::path d = fs::temp_directory_path() / "holder_cli_tests";
    fs::create_directories(d);
    return d;
}

Run cli(const std::string& args) {
    const fs::path err = scratch() / "stderr.txt";
    const std::string cmd = std::string(HOLDER_CLI) + " " + args + " 2>" + err.string();
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
}

}  // namespace

TEST_CASE("fixture specs") {
    const FixtureSpec s = parse_fixture_spec("tent:width=2,lo=-4,hi=4,h=1/8");
    CHECK(s.family == "tent");
    CHECK(s.params.at("width") == 2.0);
    CHECK(s.h == 0.125);
    CHECK(parse_fixture_spec(s.describe()).describe() == s.describe());
    CHECK(parse_fixture_spec("appendix_a3:n=16").h == 1.0 / 64);
    CHECK(parse_fixture_spec("appendix_a2:n=4").hi == 8.0);
    CHECK_THROWS_AS((void)parse_fixture_spec("nosuch"), ArgumentError);
    CHECK_THROWS_AS((void)parse_fixture_spec("tent:bogus=1"), ArgumentError);
    CHECK_THROWS_AS((void)parse_fixture_spec("appendix_a2:dim=2"), ArgumentError);
    CHECK(fixture_families().size() == 8);
}

TEST_CASE("fixture closed forms") {
    const GridFunction t = make_fixture(parse_fixture_spec("tent"));
    CHECK(t.grid.origin[0] == -8.0);
    CHECK(t.grid.spacing[0] == 1.0 / 64);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(t.values(i, 0) == std::max(0.0, 1.0 - std::fabs(t.grid.point(i)[0])));

    const GridFunction a2 = make_fixture(parse_fixture_spec("appendix_a2:n=1,alpha=0.5"));
    CHECK(a2.grid.lower(0) == 0.0);
    CHECK(a2.grid.upper(0) == 2.0);
    CHECK(a2.values.maxCoeff() == 1.0);
    CHECK(a2.values(64, 0) == 1.0);

    for (int n : {4, 16, 64}) {
        const GridFunction a3 = make_fixture(parse_fixture_spec("appendix_a3:n=" + std::to_string(n)));
        CHECK(std::fabs(a3.values.cwiseAbs().maxCoeff() - 1.0 / std::sqrt(n)) <= 1e-12);
    }

    const GridFunction r1 = make_fixture(parse_fixture_spec("random_smooth:seed=7,dim=2,h=1/8"));
    const GridFunction r2 = make_fixture(parse_fixture_spec("random_smooth:seed=7,dim=2,h=1/8"));
    const GridFunction r3 = make_fixture(parse_fixture_spec("random_smooth:seed=8,dim=2,h=1/8"));
    CHECK(r1.values == r2.values);
    CHECK(r1.values != r3.values);
}

TEST_CASE("calibration table") {
    CHECK(round_up_3(0.4844) == 0.485);
    CHECK(round_up_3(0.72661) == 0.727);
    CHECK(round_up_3(3.3301) == 3.34);
    CHECK(round_up_3(1.0) == 1.0);
    CHECK(calibration_suite(1).size() == 20);
    CHECK(calibration_suite(2).size() == 10);

    const CalibrationTable pinned = load_calibration(default_calibration_path());
    const std::string text = slurp(default_calibration_path());
    CHECK(calibration_to_json(calibration_from_json(text)) == text);
    CHECK(calibration_to_json(compute_calibration()) == text);
    CHECK(pinned.c_pipe >= pinned.c_pipe_observed);
    CHECK(pinned.ceilings(1).ratio_1 >= pinned.dims.at(1).observed.ratio_1);
    CHECK_THROWS_AS((void)load_calibration(scratch() / "missing.json"), Error);
}

TEST_CASE("report helpers") {
    CHECK(real(INFINITY) == "inf");
    CHECK(real(-INFINITY) == "-inf");
    CHECK(real(NAN) == "nan");
    CHECK(real(0.5) == 0.5);
    CHECK(sha256_bytes("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    const fs::path p = scratch() / "abc.txt";
    std::ofstream(p, std::ios::binary) << "abc";
    CHECK(sha256_file(p) == sha256_bytes("abc"));
    CHECK(report_header("analyze")["schema"] == 1);

    const std::string svg = render_svg("t", "x", "y", {{"s", {1, 2, 4}, {1, 0.5, 0.25}}}, true, true);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("<polyline") != std::string::npos);
    const std::string empty = render_svg("t", "x", "y", {}, false, false);
    CHECK(empty.find("</svg>") != std::string::npos);
}

TEST_CASE("cli analyze") {
    const Run c = cli("analyze --fixture constant --no-meyers");
    REQUIRE(c.code == 0);
    const Json j = Json::parse(c.out);
    CHECK(j["schema"] == 1);
    CHECK(j["seminorm"] == 0.0);
    CHECK(j["verdict"]["small"] == true);
    CHECK(j["verdict"]["large"] == true);
    CHECK(j["verdict"]["far"] == true);

    const Run a = cli("analyze --fixture appendix_a2:n=4 --modulus power:0.5 --no-meyers");
    REQUIRE(a.code == 0);
    CHECK(std::fabs(Json::parse(a.out)["seminorm"].get<double>() - 0.5) <= 1e-9);

    CHECK(cli("analyze --fixture appendix_a2:n=2 --no-meyers").out == cli("analyze --fixture appendix_a2:n=2 --no-meyers").out);

    const fs::path bad = scratch() / "bad.csv";
    std::ofstream(bad) << "# dim=1\n# shape=3\n# origin=0\n# spacing=1\n# ycomp=1\n0\nx\n1\n";
    const Run e = cli("analyze --input " + bad.string());
    CHECK(e.code == 2);
    const Json ej = Json::parse(e.err);
    CHECK(ej["exit_code"] == 2);
    CHECK(ej.contains("line"));

    CHECK(cli("analyze --fixture nosuch").code == 2);
    CHECK(cli("analyze --bogus-flag").code == 2);
    CHECK(cli("analyze --fixture constant --modulus power:2").code == 2);
}

TEST_CASE("cli approximate") {
    const Run a = cli("approximate --fixture affine --epsilon 0.1");
    CHECK(a.code == 3);
    CHECK(Json::parse(a.err)["clause"] == "eq:dencc");
    const Run c = cli("approximate --fixture constant --epsilon 0.1");
    REQUIRE(c.code == 0);
    CHECK(Json::parse(c.out)["errors"]["seminorm"] == 0.0);
}

TEST_CASE("cli fixtures and convergence") {
    const fs::path a = scratch() / "a.csv", b = scratch() / "b.csv";
    REQUIRE(cli("fixtures --family random_smooth:seed=7 --output " + a.string()).code == 0);
    REQUIRE(cli("fixtures --family random_smooth --seed 7 --output " + b.string()).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
    CHECK(cli("fixtures --family nosuch --output " + a.string()).code == 2);

    const fs::path loaded = scratch() / "loaded.json";
    CHECK(cli("analyze --input " + a.string() + " --no-meyers --report " + loaded.string()).code == 0);
    CHECK(Json::parse(slurp(loaded))["inputs"]["input"].contains("sha256"));

    const fs::path csv = scratch() / "empty.csv";
    REQUIRE(cli("convergence --fixture tent --operator envelope --sweep \"\" --output " + csv.string()).code == 0);
    const std::string body = slurp(csv);
    CHECK(std::count(body.begin(), body.end(), '\n') == 1);
}

TEST_CASE("cli c0 commands") {
    const Run t = cli("c0-threshold --fixture random_smooth:dim=2,lo=-1,hi=1,h=1/16 --norm-x linf --r 0.25");
    REQUIRE(t.code == 0);
    const Json tj = Json::parse(t.out);
    CHECK(tj["sup_bound_ok"] == true);
    CHECK(tj["locality"]["passed"] == true);
    CHECK(cli("c0-threshold --fixture random_smooth:dim=2,lo=-1,hi=1,h=1/16 --r 0.25").code == 2);
    const Run m = cli("c0-mollify --fixture random_smooth:dim=2,lo=-1,hi=1,h=1/16 --norm-x linf --eta 0.125 --axes 1,2");
    REQUIRE(m.code == 0);
    CHECK(cli("c0-mollify --fixture random_smooth:dim=2,lo=-1,hi=1,h=1/16 --norm-x linf --eta 0.125 --axes 3").code == 2);
}
