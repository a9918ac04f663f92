// SPDX-License-Identifier: MIT
// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "oracles.hpp"

#include "holder/approximators.hpp"
#include "holder/c0ops.hpp"
#include "holder/calibration.hpp"
#include "holder/fixtures.hpp"
#include "holder/meanosc.hpp"
#include "holder/oscillation.hpp"
#include "holder/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace holder;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

GridFunction fixture(const std::string& spec, NormSpec n = {}) { return make_fixture(parse_fixture_spec(spec), n); }

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string run_cli(const std::string& args, int& code) {
    const std::string cmd = std::string(HOLDER_CLI) + " " + args + " 2>/dev/null";
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) {
        code = -1;
        return out;
    }
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    code = pclose(p);
    return out;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. staircase tent seminorm through the CLI
Outcome c1() {
    Outcome o;
    double worst = 0.0, slowest = 0.0;
    for (int n : {1, 2, 4, 8}) {
        for (double a : {0.25, 0.5}) {
            const auto t0 = std::chrono::steady_clock::now();
            int code = 0;
            const std::string out = run_cli("analyze --fixture appendix_a2:n=" + std::to_string(n) +
                                                ",h=1/64 --modulus power:" + fmt("%g", a) + " --no-meyers",
                                            code);
            slowest = std::max(slowest, elapsed(t0));
            if (code != 0) {
                o.pass = false;
                continue;
            }
            const double s = Json::parse(out)["seminorm"].get<double>();
            worst = std::max(worst, std::fabs(s - std::pow(n, -a)));
        }
    }
    o.pass = o.pass && worst <= 1e-9 && slowest < 10.0;
    o.detail = "max |seminorm - n^-a| = " + fmt("%.3g", worst) + ", slowest case " + fmt("%.2f", slowest) + " s";
    return o;
}

// 2. shrinking tents: sup norm and the quotient at the pair (0, 1/n)
Outcome c2() {
    Outcome o;
    const Modulus m = Modulus::power(0.75);
    double sup_err = 0.0, margin = INFINITY;
    for (int n : {4, 16, 64}) {
        const GridFunction f = fixture("appendix_a3:n=" + std::to_string(n));
        sup_err = std::max(sup_err, std::fabs(sup_norm(f) - 1.0 / std::sqrt(n)));
        const long zero = std::lround(-f.grid.origin[0] / f.grid.spacing[0]);
        const long i[1] = {zero}, j[1] = {zero + 4};  // spacing 1/(4n)
        const double q = pair_oscillation(f, m, i, j);
        margin = std::min(margin, q - std::pow(n, 0.25));
    }
    o.pass = sup_err <= 1e-12 && margin >= -1e-9;
    o.detail = "max sup error " + fmt("%.3g", sup_err) + ", min (quotient - n^0.25) " + fmt("%.3g", margin);
    return o;
}

// 3. truncation certificates
Outcome c3() {
    Outcome o;
    double lip = 0.0, contraction = 0.0;
    std::size_t tested = 0;
    for (double M : {1.0, 10.0, 100.0}) {
        for (SourceNorm n : {SourceNorm::l2, SourceNorm::linf}) {
            const TruncationCertificate c = truncation_certify({M, n}, 10000, 20240601);
            o.pass = o.pass && c.passed;
            lip = std::max(lip, c.max_ratio);
            for (const auto& cl : c.contraction) {
                if (cl.status == "untested") continue;
                ++tested;
                contraction = std::max(contraction, cl.max_ratio / cl.bound);
            }
        }
    }
    o.pass = o.pass && lip <= 5.0 + 1e-9 && contraction <= 1.0 + 1e-9 && tested > 0;
    o.detail = "max Lipschitz ratio " + fmt("%.6f", lip) + ", max contraction ratio / bound " + fmt("%.6f", contraction) +
               " over " + std::to_string(tested) + " tested radii";
    return o;
}

// 4. bit-exact agreement with the brute-force oracles
Outcome c4() {
    Outcome o;
    int mismatches = 0;
    const Modulus m = Modulus::power(0.5);
    for (std::uint64_t seed = 1000; seed < 1030; ++seed) {
        const GridFunction f = oracle::random_function(seed);
        if (holder_seminorm(f, m) != oracle::seminorm(f, m)) ++mismatches;

        const auto scales = default_scales(f.grid, f.norms.source);
        const ScaleProfile sp = scale_profile(f, m, scales);
        const auto osp = oracle::scale_profile(f, m, scales, 0.25);
        if (sp.scales != osp.scales || sp.values != osp.values || sp.pair_counts != osp.counts) ++mismatches;

        const auto deltas = default_far_deltas(f.grid, f.norms.source);
        for (FarMode mode : {FarMode::min, FarMode::max}) {
            const ScaleProfile fp = far_profile(f, m, deltas, mode);
            const auto ofp = oracle::far_profile(f, m, deltas, mode == FarMode::min);
            if (fp.scales != ofp.scales || fp.values != ofp.values || fp.pair_counts != ofp.counts) ++mismatches;
        }

        const CubeStats st = build_cube_stats(f, m);
        for (int level = st.min_level; level <= st.max_level; ++level) {
            const CubeLevel& lv = st.at(level);
            const auto cubes = oracle::cubes_at(f, level);
            if (cubes.size() != lv.size()) {
                ++mismatches;
                continue;
            }
            for (std::size_t q = 0; q < cubes.size(); ++q) {
                bool same = lv.count[q] == cubes[q].count && lv.anchor(q) == cubes[q].anchor;
                if (same && cubes[q].count > 0) {
                    for (int c = 0; c < f.ycomp(); ++c) same = same && lv.average(q, c) == cubes[q].average[c];
                    same = same && lv.mean_deviation[q] == cubes[q].mean_deviation;
                }
                if (!same) ++mismatches;
            }
        }
    }
    o.pass = mismatches == 0;
    o.detail = std::to_string(mismatches) + " mismatches over 30 fixtures";
    return o;
}

// 5. mean-oscillation ratios under the pinned ceilings; calibration reproduces bit-exactly
Outcome c5() {
    Outcome o;
    const CalibrationTable pinned = load_calibration(default_calibration_path());
    const Modulus m = parse_modulus(pinned.modulus);
    const ModulusCertificate cert = check_admissible(m);
    std::string worst;
    for (int dim : {1, 2}) {
        const MeyersCeilings& ceil = pinned.ceilings(dim);
        double r1 = 0.0, r2 = 0.0;
        for (const auto& spec : calibration_suite(dim)) {
            const MeyersComparison c = meyers_compare(fixture(spec), m, cert);
            if (c.degenerate) continue;
            r1 = std::max(r1, c.ratio_1);
            r2 = std::max(r2, c.ratio_2);
        }
        o.pass = o.pass && r1 <= ceil.ratio_1 && r2 <= ceil.ratio_2;
        worst += (dim == 1 ? "" : "; ") + std::to_string(dim) + "-D ratio_1 " + fmt("%.4f", r1) + " <= " +
                 fmt("%g", ceil.ratio_1) + ", ratio_2 " + fmt("%.4f", r2) + " <= " + fmt("%g", ceil.ratio_2);
    }
    std::ifstream in(default_calibration_path(), std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    const bool same = calibration_to_json(compute_calibration()) == text.str();
    o.pass = o.pass && same;
    o.detail = worst + (same ? "; calibration reproduced" : "; calibration differs from the pinned file");
    return o;
}

// 6. dyadic telescoping residuals
Outcome c6() {
    Outcome o;
    const Modulus m = Modulus::power(0.5);
    double worst = 0.0;
    std::size_t pairs = 0;
    bool bounds = true;
    for (int dim : {1, 2}) {
        for (const auto& spec : calibration_suite(dim)) {
            const GridFunction f = fixture(spec);
            const CubeStats st = build_cube_stats(f, m);
            std::mt19937_64 eng(std::hash<std::string>{}(spec) & 0xffffffffu);
            for (int k = 0; k < 100; ++k) {
                const std::size_t x = eng() % f.size(), y = eng() % f.size();
                const TelescopeRecord r = dyadic_chain_reconstruct(st, f, x, y);
                worst = std::max(worst, r.residual);
                bounds = bounds && r.bound_ok;
                ++pairs;
            }
        }
    }
    o.pass = worst < 1e-10;
    o.detail = "max residual " + fmt("%.3g", worst) + " over " + std::to_string(pairs) + " pairs" +
               (bounds ? "" : " (a chain bound check failed)");
    return o;
}

// 7. truncate-then-mollify on the wide tent
Outcome c7() {
    Outcome o;
    const CalibrationTable cal = load_calibration(default_calibration_path());
    const Modulus m = Modulus::power(0.5);
    const GridFunction f = fixture("tent:width=1,lo=-64,hi=64,h=1/64");
    double prev = INFINITY, slowest = 0.0;
    std::string rows;
    for (double eps : {0.2, 0.1, 0.05}) {
        const auto t0 = std::chrono::steady_clock::now();
        const PipelineResult r = pipeline_vc_to_smooth(f, m, eps, cal.c_pipe);
        slowest = std::max(slowest, elapsed(t0));
        o.pass = o.pass && r.seminorm_error <= cal.c_pipe * eps && r.seminorm_error <= prev;
        prev = r.seminorm_error;
        rows += " eps=" + fmt("%g", eps) + ":" + fmt("%.5f", r.seminorm_error);
    }
    o.pass = o.pass && slowest < 60.0;
    o.detail = "C_pipe " + fmt("%g", cal.c_pipe) + ", errors" + rows + ", slowest " + fmt("%.2f", slowest) + " s";
    return o;
}

// 8. Lipschitz envelopes of the root tent
Outcome c8() {
    Outcome o;
    const Modulus m = Modulus::power(1.0 / 3);
    const GridFunction f = fixture("root_tent:width=4,lo=-8,hi=8,h=1/64");
    double prev_sup = INFINITY, last_err = INFINITY, loc_diff = 0.0;
    bool lip = true, below = true, uniform = true, support = true;
    double threshold = 0.0;
    for (int n = 1; n <= 64; ++n) {
        EnvelopeParams p = envelope_params(f, m, n);
        threshold = p.threshold;
        const GridFunction fn = lipschitz_envelope(f, p);
        lip = lip && grid_lipschitz(fn) <= n * (1 + 1e-12);
        for (std::size_t i = 0; i < f.size(); ++i) {
            below = below && fn.values(i, 0) <= f.values(i, 0);
            if (f.values(i, 0) == 0.0) support = support && fn.values(i, 0) == 0.0;
        }
        const double sup = sup_distance(f, fn);
        uniform = uniform && sup <= prev_sup;
        prev_sup = sup;
        last_err = holder_seminorm(difference(f, fn), m);
        if (n > p.threshold) {
            EnvelopeParams q = p;
            q.localization_radius = 1.0;
            const GridFunction a = lipschitz_envelope(f, q);
            q.localization_radius = INFINITY;
            const GridFunction b = lipschitz_envelope(f, q);
            loc_diff = std::max(loc_diff, (a.values - b.values).cwiseAbs().maxCoeff());
        }
    }
    o.pass = lip && below && uniform && support && last_err < 0.05 && loc_diff <= 1e-12;
    o.detail = std::string("n-Lipschitz ") + (lip ? "yes" : "no") + ", below f " + (below ? "yes" : "no") +
               ", sup error non-increasing " + (uniform ? "yes" : "no") + ", error at n=64 " + fmt("%.4f", last_err) +
               ", threshold " + fmt("%.3f", threshold) + ", localization change " + fmt("%.3g", loc_diff) +
               ", support kept " + (support ? "yes" : "no");
    return o;
}

// 9. uniform + bounded-Lipschitz sequences converge; the shrinking-tent sequence is flagged
Outcome c9() {
    Outcome o;
    const Modulus m = Modulus::power(0.5);
    const char* bases[] = {"tent:width=1,lo=-2,hi=2,h=1/32", "root_tent:width=2,lo=-4,hi=4,h=1/16",
                           "random_smooth:seed=11,lo=-2,hi=2,h=1/32", "random_smooth:seed=12,lo=-2,hi=2,h=1/32",
                           "random_smooth:seed=13,dim=2,lo=-1,hi=1,h=1/8", "sin_decay:freq=2,lo=-4,hi=4,h=1/16",
                           "tent:width=2,dim=2,lo=-2,hi=2,h=1/8", "constant:value=3,lo=-2,hi=2,h=1/32",
                           "random_smooth:seed=14,lo=-2,hi=2,h=1/64", "appendix_a2:n=2,h=1/32"};
    int converged = 0;
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
        const GridFunction f = fixture(bases[s]);
        std::vector<GridFunction> seq;
        for (int k = 1; k <= 32; ++k) {
            GridFunction g = f;
            for (std::size_t i = 0; i < f.size(); ++i) {
                const double x = f.grid.point(i)[0];
                // 1-Lipschitz, bounded by 1/(s+1)
                g.values(i, 0) += std::ldexp(std::sin((s + 1) * x) / (s + 1), -k);
            }
            seq.push_back(std::move(g));
        }
        const ConvergenceReport r = uniform_lip_convergence_check(seq, f, m);
        worst = std::max(worst, r.rows.back().seminorm_error);
        if (r.hypothesis_holds && r.converged && !r.implication_failure) ++converged;
    }
    std::vector<GridFunction> a3;
    for (int n : {4, 16, 64}) a3.push_back(fixture("appendix_a3:n=" + std::to_string(n) + ",h=1/256"));
    GridFunction zero = a3.front();
    zero.values.setZero();
    const ConvergenceReport bad = uniform_lip_convergence_check(a3, zero, Modulus::power(0.75));
    const bool flagged = bad.hypothesis_violated && bad.diverging && !bad.implication_failure;
    o.pass = converged == 10 && worst < 1e-3 && flagged;
    o.detail = std::to_string(converged) + "/10 sequences converged (max final error " + fmt("%.3g", worst) +
               "), shrinking tents " + (flagged ? "flagged as hypothesis violation with divergence" : "not flagged");
    return o;
}

// 10. sup-norm operators on the 2-D suite
Outcome c10() {
    Outcome o;
    const Modulus m = Modulus::power(0.5);
    NormSpec sup;
    sup.source = SourceNorm::linf;
    const double r = 0.25, eta = 0.125;
    bool threshold_ok = true, mono = true, close = true;
    double loc = 0.0;
    std::size_t centers = 0;
    for (const auto& spec : calibration_suite(2)) {
        const GridFunction f = fixture(spec, sup);
        const double sf = holder_seminorm(f, m);
        const GridFunction g = soft_threshold_map(f, r);
        threshold_ok = threshold_ok && sup_distance(f, g) <= m(r) * sf * (1 + 1e-12);

        std::mt19937_64 eng(std::hash<std::string>{}(spec) & 0xffffffffu);
        std::vector<std::size_t> cs;
        for (int k = 0; k < 50; ++k) cs.push_back(eng() % f.size());
        const LocalityReport rep = local_coordinate_dependence_check(g, r, cs);
        for (const auto& row : rep.rows) loc = std::max(loc, row.max_deviation);
        centers += rep.rows.size();

        const double sg = holder_seminorm(g, m);
        const GridFunction h = tensor_mollify(g, eta, {0, 1});
        mono = mono && holder_seminorm(h, m) <= sg * (1 + 1e-12);
        close = close && sup_distance(h, g) <= sg * m(eta);
    }
    o.pass = threshold_ok && loc <= 1e-10 && mono && close;
    o.detail = std::string("threshold bound ") + (threshold_ok ? "holds" : "fails") + ", locality max deviation " +
               fmt("%.3g", loc) + " at " + std::to_string(centers) + " centers, mollified seminorm " +
               (mono ? "non-increasing" : "increased") + ", sup bound " + (close ? "holds" : "fails");
    return o;
}

// 11. power modulus certificates
Outcome c11() {
    Outcome o;
    double dbl = 0.0, dini = 0.0;
    bool flag = false;
    for (double a : {0.25, 0.5, 0.75, 1.0}) {
        const ModulusCertificate c = check_admissible(Modulus::power(a));
        dbl = std::max(dbl, std::fabs(c.doubling_constant - std::pow(2.0, a)));
        dini = std::max(dini, std::fabs(c.dini_constant - 1.0 / a));
        if (a == 1.0) flag = !c.sublinear_zero;
        else o.pass = o.pass && c.sublinear_zero;
    }
    o.pass = o.pass && dbl <= 1e-12 && dini <= 1e-6 && flag;
    o.detail = "max doubling error " + fmt("%.3g", dbl) + ", max Dini error " + fmt("%.3g", dini) +
               ", alpha=1 sublinear_zero " + (flag ? "false" : "true");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"staircase tent seminorm via CLI", c1},    {"shrinking tent sup and quotient", c2},
        {"truncation certificates", c3},            {"oracle equivalence", c4},
        {"mean oscillation ceilings", c5},          {"dyadic telescoping", c6},
        {"truncate and mollify pipeline", c7},      {"Lipschitz envelopes", c8},
        {"uniform plus Lipschitz convergence", c9}, {"sup-norm operators", c10},
        {"modulus certificates", c11},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failed;
        std::printf("criterion %2zu %s: %s (%s; %.2f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                    o.detail.c_str(), elapsed(t0));
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
