// SPDX-License-Identifier: MIT
// holder: command-line front end.
//
// Exit codes: 0 success, 2 input error, 3 plan or classification failure,
// 4 internal invariant violation. Errors go to stderr as one JSON line.

#include "holder/approximators.hpp"
#include "holder/c0ops.hpp"
#include "holder/calibration.hpp"
#include "holder/errors.hpp"
#include "holder/fixtures.hpp"
#include "holder/grid.hpp"
#include "holder/meanosc.hpp"
#include "holder/modulus.hpp"
#include "holder/oscillation.hpp"
#include "holder/report.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

using namespace holder;

namespace {

constexpr int kOk = 0;
constexpr int kInput = 2;
constexpr int kPlan = 3;
constexpr int kInvariant = 4;

/// Raised for checks that should never fail on valid inputs.
struct InvariantViolation : Error {
    using Error::Error;
};

struct Common {
    std::string input;
    std::string fixture;
    std::string modulus = "power:0.5";
    std::string norm_y = "l2";
    std::string norm_x = "l2";
    std::string report;
    std::uint64_t seed = 1;
    bool seed_given = false;
    bool timings = false;
};

void add_input(CLI::App* app, Common& c) {
    app->add_option("--input", c.input, "grid function CSV");
    app->add_option("--fixture", c.fixture, "generate the input from a fixture spec instead");
}

void add_modulus(CLI::App* app, Common& c) {
    app->add_option("--modulus", c.modulus, "power:A | log:c=C,p=P | table:PATH | table-strict:PATH")
        ->capture_default_str();
}

void add_norms(CLI::App* app, Common& c) {
    app->add_option("--norm-y", c.norm_y, "target norm")->check(CLI::IsMember({"l2", "linf", "l1"}))->capture_default_str();
    app->add_option("--norm-x", c.norm_x, "source norm")->check(CLI::IsMember({"l2", "linf"}))->capture_default_str();
}

void add_report(CLI::App* app, Common& c) {
    app->add_option("--report", c.report, "JSON report path (stdout when omitted)");
    app->add_flag("--timings", c.timings, "include wall-clock timings (reports are then not byte-stable)");
}

NormSpec norms_of(const Common& c) { return {parse_target_norm(c.norm_y), parse_source_norm(c.norm_x)}; }

std::string with_seed(const Common& c, std::string spec) {
    if (c.seed_given && spec.rfind("random_smooth", 0) == 0) {
        spec += spec.find(':') == std::string::npos ? ":" : ",";
        spec += "seed=" + std::to_string(c.seed);
    }
    return spec;
}

/// Loads --input or builds --fixture; records provenance in `inputs`.
GridFunction load_input(const Common& c, Json& inputs) {
    if (c.input.empty() == c.fixture.empty()) {
        throw ArgumentError("give exactly one of --input and --fixture");
    }
    GridFunction f;
    if (!c.input.empty()) {
        f = load_grid_function(c.input);
        inputs["input"] = {{"path", c.input}, {"sha256", sha256_file(c.input)}};
    } else {
        const FixtureSpec spec = parse_fixture_spec(with_seed(c, c.fixture));
        f = make_fixture(spec);
        inputs["fixture"] = spec.describe();
    }
    f.norms = norms_of(c);
    return f;
}

Modulus load_modulus(const Common& c, Json& inputs) {
    Modulus m = parse_modulus(c.modulus);
    inputs["modulus"] = c.modulus;
    const auto colon = c.modulus.find(':');
    if (colon != std::string::npos && c.modulus.rfind("table", 0) == 0) {
        inputs["modulus_table_sha256"] = sha256_file(c.modulus.substr(colon + 1));
    }
    return m;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(item, &pos);
            if (pos != item.size() || !std::isfinite(v)) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ArgumentError(std::string("malformed ") + what + " entry '" + item + "'");
        }
    }
    return out;
}

std::optional<CalibrationTable> try_calibration(const std::string& path) {
    const std::filesystem::path p = path.empty() ? default_calibration_path() : std::filesystem::path(path);
    if (!std::filesystem::exists(p)) {
        if (!path.empty()) throw ArgumentError("calibration file not found: " + path);
        return std::nullopt;
    }
    return load_calibration(p);
}

void emit(const Json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        write_json(j, path);
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot write " + path);
    out << text;
}

using Clock = std::chrono::steady_clock;

void add_timing(Json& j, const Common& c, Clock::time_point start) {
    if (c.timings) {
        j["timings"]["total_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
    }
}

// ---------------------------------------------------------------------------

struct AnalyzeOpts {
    std::string scales;
    std::string deltas;
    double band = 0.25;
    std::vector<double> thresholds{0.1, 0.1, 0.1};
    std::string profiles;
    std::string calibration;
    bool no_meyers = false;
};

int cmd_analyze(const Common& c, const AnalyzeOpts& o) {
    const auto start = Clock::now();
    Json rep = report_header("analyze");
    Json inputs;
    const GridFunction f = load_input(c, inputs);
    const Modulus m = load_modulus(c, inputs);
    rep["inputs"] = inputs;
    rep["norms"] = {{"y", to_string(f.norms.target)}, {"x", to_string(f.norms.source)}};
    rep["grid"] = {{"dim", f.grid.dim()}, {"shape", f.grid.shape}, {"origin", reals(f.grid.origin)},
                   {"spacing", reals(f.grid.spacing)}, {"ycomp", f.ycomp()}};

    const ModulusCertificate cert = check_admissible(m);
    rep["modulus"] = to_json(cert);
    rep["modulus"]["describe"] = m.describe();

    if (o.thresholds.size() != 3) throw ArgumentError("--thresholds takes small,large,far");
    ClassifyOptions opts;
    opts.scales = parse_list(o.scales, "--scales");
    opts.deltas = parse_list(o.deltas, "--deltas");
    opts.band = o.band;
    const Thresholds th{o.thresholds[0], o.thresholds[1], o.thresholds[2]};
    const VanishingVerdict v = classify_vanishing(f, m, th, opts);
    rep["seminorm"] = real(v.seminorm);
    rep["grid_lipschitz"] = real(grid_lipschitz(f));
    rep["sup_norm"] = real(sup_norm(f));
    rep["verdict"] = to_json(v);

    if (!o.no_meyers) {
        const CubeStats stats = build_cube_stats(f, m);
        Json mo;
        mo["levels"] = {stats.min_level, stats.max_level};
        mo["bmo"] = real(bmo_norm(stats));
        if (stats.max_level - stats.min_level >= 2) {
            const VmoProfiles vp = vmo_profiles(stats, opts.deltas);
            mo["vmo"] = {{"small", to_json(vp.small)}, {"large", to_json(vp.large)}, {"far", to_json(vp.far)}};
        }
        if (std::isfinite(cert.dini_constant)) {
            std::optional<MeyersCeilings> ceil;
            const auto cal = try_calibration(o.calibration);
            if (cal && cal->dims.count(f.grid.dim()) && c.modulus == cal->modulus) {
                ceil = cal->ceilings(f.grid.dim());
            }
            mo["meyers"] = to_json(meyers_compare(f, m, cert, ceil));
        }
        rep["mean_oscillation"] = mo;
    }

    if (!o.profiles.empty()) {
        std::ostringstream csv;
        csv << "kind,scale,value,pairs\n";
        auto dump = [&](const char* kind, const ScaleProfile& p) {
            for (std::size_t i = 0; i < p.scales.size(); ++i) {
                csv << kind << "," << p.scales[i] << "," << p.values[i] << "," << p.pair_counts[i] << "\n";
            }
        };
        csv.precision(17);
        dump("scale", v.profile);
        dump("far", v.far_evidence);
        write_text(o.profiles, csv.str());
    }
    add_timing(rep, c, start);
    emit(rep, c.report);
    return kOk;
}

// ---------------------------------------------------------------------------

struct ApproxOpts {
    double epsilon = 0.1;
    std::string output;
    std::string calibration;
    double c_pipe = 0.0;
};

int cmd_approximate(const Common& c, const ApproxOpts& o) {
    const auto start = Clock::now();
    Json rep = report_header("approximate");
    Json inputs;
    const GridFunction f = load_input(c, inputs);
    const Modulus m = load_modulus(c, inputs);
    rep["inputs"] = inputs;
    double c_pipe = o.c_pipe;
    if (c_pipe <= 0.0) {
        const auto cal = try_calibration(o.calibration);
        if (!cal) throw ArgumentError("no calibration file; pass --c-pipe");
        c_pipe = cal->c_pipe;
    }
    const PipelineResult r = pipeline_vc_to_smooth(f, m, o.epsilon, c_pipe);
    rep["plan"] = to_json(r.plan);
    rep["delta"] = real(r.delta);
    rep["errors"] = {{"sup_g_h", real(r.sup_error_g_h)},
                     {"truncation_seminorm", real(r.truncation_error)},
                     {"seminorm", real(r.seminorm_error)},
                     {"sup", real(r.sup_error)}};
    rep["c_pipe"] = real(c_pipe);
    rep["within"] = r.within;
    rep["warnings"] = r.warnings;
    if (!o.output.empty()) {
        save_grid_function(r.h, o.output);
        rep["output"] = o.output;
    }
    add_timing(rep, c, start);
    emit(rep, c.report);
    if (!r.within) {
        throw InvariantViolation("measured seminorm error " + std::to_string(r.seminorm_error) + " exceeds C_pipe*epsilon");
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct ConvOpts {
    std::string op = "envelope";
    std::string sweep;
    std::string output;
    std::string svg;
};

int cmd_convergence(const Common& c, const ConvOpts& o) {
    const auto start = Clock::now();
    Json rep = report_header("convergence");
    Json inputs;
    const Modulus m = load_modulus(c, inputs);
    const std::vector<double> sweep = parse_list(o.sweep, "--sweep");
    std::vector<double> semi, sup, lip;
    std::string param = "n";

    if (o.op == "appendix_a3") {
        inputs["sequence"] = "appendix_a3";
        for (double n : sweep) {
            const FixtureSpec spec = parse_fixture_spec("appendix_a3:n=" + Json(n).dump());
            GridFunction fn = make_fixture(spec, norms_of(c));
            semi.push_back(holder_seminorm(fn, m));
            sup.push_back(sup_norm(fn));
            lip.push_back(grid_lipschitz(fn));
        }
    } else {
        const GridFunction f = load_input(c, inputs);
        for (double p : sweep) {
            GridFunction fp;
            if (o.op == "envelope") {
                fp = lipschitz_envelope(f, envelope_params(f, m, p));
            } else if (o.op == "mollify") {
                param = "radius";
                fp = mollify(f, MollifierSpec{p});
            } else if (o.op == "tensor_mollify") {
                param = "eta";
                CoordinateSet all;
                for (int k = 0; k < f.grid.dim(); ++k) all.push_back(k);
                fp = tensor_mollify(f, p, all);
            } else {
                throw ArgumentError("unknown operator '" + o.op + "'");
            }
            semi.push_back(holder_seminorm(difference(f, fp), m));
            sup.push_back(sup_distance(f, fp));
            lip.push_back(grid_lipschitz(fp));
        }
    }
    rep["inputs"] = inputs;
    rep["operator"] = o.op;
    rep["parameter"] = param;
    rep["sweep"] = reals(sweep);
    rep["seminorm_error"] = reals(semi);
    rep["sup_error"] = reals(sup);
    rep["lipschitz"] = reals(lip);

    if (!o.output.empty()) {
        std::ostringstream csv;
        csv.precision(17);
        csv << param << ",seminorm_error,sup_error,lipschitz\n";
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            csv << sweep[i] << "," << semi[i] << "," << sup[i] << "," << lip[i] << "\n";
        }
        write_text(o.output, csv.str());
        rep["csv"] = o.output;
    }
    if (!o.svg.empty()) {
        write_text(o.svg, render_svg(o.op + " sweep", param, "error",
                                     {{"seminorm error", sweep, semi}, {"sup error", sweep, sup}}, true, true));
        rep["svg"] = o.svg;
    }
    add_timing(rep, c, start);
    emit(rep, c.report);
    return kOk;
}

// ---------------------------------------------------------------------------

int cmd_fixtures(const Common& c, const std::string& family, const std::string& output) {
    const FixtureSpec spec = parse_fixture_spec(with_seed(c, family));
    const GridFunction f = make_fixture(spec, norms_of(c));
    if (output.empty()) {
        write_grid_function(f, std::cout);
    } else {
        save_grid_function(f, output);
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct C0Opts {
    double r = 0.25;
    double eta = 0.125;
    std::string axes;
    std::size_t centers = 50;
    std::string output;
};

std::vector<std::size_t> pick_centers(std::size_t count, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < count; ++k) out.push_back(static_cast<std::size_t>(eng() % n));
    return out;
}

int cmd_c0_threshold(const Common& c, const C0Opts& o) {
    const auto start = Clock::now();
    Json rep = report_header("c0-threshold");
    Json inputs;
    const GridFunction f = load_input(c, inputs);
    const Modulus m = load_modulus(c, inputs);
    rep["inputs"] = inputs;
    const GridFunction g = soft_threshold_map(f, o.r);
    const double seminorm = holder_seminorm(f, m);
    const double sup = sup_distance(f, g);
    const double bound = m(o.r) * seminorm;
    const LocalityReport loc = local_coordinate_dependence_check(g, o.r, pick_centers(o.centers, g.size(), c.seed));
    rep["r"] = real(o.r);
    rep["seminorm"] = real(seminorm);
    rep["seminorm_after"] = real(holder_seminorm(g, m));
    rep["sup_error"] = real(sup);
    rep["sup_bound"] = real(bound);
    rep["sup_bound_ok"] = sup <= bound * (1.0 + 1e-12) + 1e-15;
    double worst = 0.0;
    for (const auto& row : loc.rows) worst = std::max(worst, row.max_deviation);
    rep["locality"] = {{"centers", loc.rows.size()}, {"max_deviation", real(worst)}, {"passed", loc.passed}};
    if (!o.output.empty()) {
        save_grid_function(g, o.output);
        rep["output"] = o.output;
    }
    add_timing(rep, c, start);
    emit(rep, c.report);
    return kOk;
}

int cmd_c0_mollify(const Common& c, const C0Opts& o) {
    const auto start = Clock::now();
    Json rep = report_header("c0-mollify");
    Json inputs;
    const GridFunction g = load_input(c, inputs);
    const Modulus m = load_modulus(c, inputs);
    rep["inputs"] = inputs;
    CoordinateSet axes;
    if (o.axes.empty()) {
        for (int k = 0; k < g.grid.dim(); ++k) axes.push_back(k);
    } else {
        for (double a : parse_list(o.axes, "--axes")) {
            if (a != std::floor(a)) throw ArgumentError("axes are integers starting at 1");
            axes.push_back(static_cast<int>(a) - 1);
        }
    }
    const GridFunction h = tensor_mollify(g, o.eta, axes);
    const double before = holder_seminorm(g, m);
    const double after = holder_seminorm(h, m);
    const double sup = sup_distance(g, h);
    const double bound = before * m(o.eta);
    Json ax = Json::array();
    for (int a : axes) ax.push_back(a + 1);
    rep["eta"] = real(o.eta);
    rep["axes"] = ax;
    rep["seminorm_before"] = real(before);
    rep["seminorm_after"] = real(after);
    rep["seminorm_non_increase"] = after <= before * (1.0 + 1e-12);
    rep["sup_error"] = real(sup);
    rep["sup_bound"] = real(bound);
    rep["sup_bound_ok"] = sup <= bound * (1.0 + 1e-12) + 1e-15;
    if (!o.output.empty()) {
        save_grid_function(h, o.output);
        rep["output"] = o.output;
    }
    add_timing(rep, c, start);
    emit(rep, c.report);
    return kOk;
}

// ---------------------------------------------------------------------------

int cmd_calibrate(const std::string& output, bool check) {
    const CalibrationTable t = compute_calibration();
    const std::string text = calibration_to_json(t);
    const std::filesystem::path path = output.empty() ? default_calibration_path() : std::filesystem::path(output);
    if (check) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ArgumentError("cannot open " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        if (ss.str() != text) {
            throw InvariantViolation("recomputed calibration differs from " + path.string());
        }
        std::cout << Json{{"calibration", path.string()}, {"reproduced", true}}.dump() << "\n";
        return kOk;
    }
    write_text(path.string(), text);
    std::cout << Json{{"calibration", path.string()}, {"c_pipe", t.c_pipe}}.dump() << "\n";
    return kOk;
}

int fail(int code, const std::string& kind, const std::string& message, Json extra = Json::object()) {
    Json j = std::move(extra);
    j["error"] = kind;
    j["message"] = message;
    j["exit_code"] = code;
    std::cerr << j.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modulus-weighted Hölder analysis on grids"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    Common c;

    AnalyzeOpts ao;
    auto* analyze = app.add_subcommand("analyze", "seminorm, scale profiles, verdicts and mean oscillation");
    add_input(analyze, c);
    add_modulus(analyze, c);
    add_norms(analyze, c);
    add_report(analyze, c);
    analyze->add_option("--scales", ao.scales, "comma-separated profile scales");
    analyze->add_option("--deltas", ao.deltas, "comma-separated far-profile radii");
    analyze->add_option("--band", ao.band, "relative band half-width")->capture_default_str();
    analyze->add_option("--thresholds", ao.thresholds, "small,large,far")->delimiter(',')->expected(3);
    analyze->add_option("--profiles", ao.profiles, "CSV output of the profiles");
    analyze->add_option("--calibration", ao.calibration, "calibration JSON (default: pinned table)");
    analyze->add_flag("--no-meyers", ao.no_meyers, "skip cube statistics");

    ApproxOpts po;
    auto* approx = app.add_subcommand("approximate", "truncate and mollify to a smooth approximant");
    add_input(approx, c);
    add_modulus(approx, c);
    add_norms(approx, c);
    add_report(approx, c);
    approx->add_option("--epsilon", po.epsilon, "target tolerance")->capture_default_str();
    approx->add_option("--output", po.output, "approximant CSV");
    approx->add_option("--calibration", po.calibration, "calibration JSON (default: pinned table)");
    approx->add_option("--c-pipe", po.c_pipe, "override the pinned pipeline constant");

    ConvOpts co;
    auto* conv = app.add_subcommand("convergence", "error curves of an operator over a parameter sweep");
    add_input(conv, c);
    add_modulus(conv, c);
    add_norms(conv, c);
    add_report(conv, c);
    conv->add_option("--operator", co.op, "envelope | mollify | tensor_mollify | appendix_a3")->capture_default_str();
    conv->add_option("--sweep", co.sweep, "comma-separated parameter values");
    conv->add_option("--output", co.output, "CSV curve");
    conv->add_option("--svg", co.svg, "SVG plot");

    std::string family, fixture_out;
    auto* fixtures = app.add_subcommand("fixtures", "write a fixture grid function");
    fixtures->add_option("--family", family, "family[:key=value,...]")->required();
    fixtures->add_option("--output", fixture_out, "CSV path (stdout when omitted)");
    add_norms(fixtures, c);

    C0Opts zo;
    auto* c0t = app.add_subcommand("c0-threshold", "coordinatewise soft threshold in sup-norm geometry");
    add_input(c0t, c);
    add_modulus(c0t, c);
    add_norms(c0t, c);
    add_report(c0t, c);
    c0t->add_option("--r", zo.r, "threshold")->capture_default_str();
    c0t->add_option("--centers", zo.centers, "number of seeded locality centers")->capture_default_str();
    c0t->add_option("--output", zo.output, "thresholded CSV");

    auto* c0m = app.add_subcommand("c0-mollify", "separable mollification along selected axes");
    add_input(c0m, c);
    add_modulus(c0m, c);
    add_norms(c0m, c);
    add_report(c0m, c);
    c0m->add_option("--eta", zo.eta, "bump half-width")->capture_default_str();
    c0m->add_option("--axes", zo.axes, "comma-separated axes starting at 1 (default: all)");
    c0m->add_option("--output", zo.output, "mollified CSV");

    std::string cal_out;
    bool cal_check = false;
    auto* calibrate = app.add_subcommand("calibrate", "recompute the pinned calibration table");
    calibrate->add_option("--output", cal_out, "table path (default: data/calibration.json)");
    calibrate->add_flag("--check", cal_check, "compare against the existing table instead of writing");

    for (auto* sub : {analyze, approx, conv, fixtures, c0t, c0m}) {
        sub->add_option("--seed", c.seed, "seed for random fixtures and sampling")->each([&](const std::string&) {
            c.seed_given = true;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(kInput, "usage", e.what());
    }

    try {
        if (*analyze) return cmd_analyze(c, ao);
        if (*approx) return cmd_approximate(c, po);
        if (*conv) return cmd_convergence(c, co);
        if (*fixtures) return cmd_fixtures(c, family, fixture_out);
        if (*c0t) return cmd_c0_threshold(c, zo);
        if (*c0m) return cmd_c0_mollify(c, zo);
        if (*calibrate) return cmd_calibrate(cal_out, cal_check);
    } catch (const ParseError& e) {
        return fail(kInput, "parse", e.what(), {{"line", e.line()}});
    } catch (const PlanError& e) {
        return fail(kPlan, "plan", e.what(), {{"clause", e.clause()}});
    } catch (const InvariantViolation& e) {
        return fail(kInvariant, "invariant", e.what());
    } catch (const Error& e) {
        return fail(kInput, "input", e.what());
    } catch (const std::exception& e) {
        return fail(kInvariant, "internal", e.what());
    }
    return kInvariant;
}
