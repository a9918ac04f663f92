// SPDX-License-Identifier: MIT
#include "holder/approximators.hpp"

#include "holder/errors.hpp"
#include "pairscan.hpp"
#include "rng.hpp"
#include "text.hpp"

#include <algorithm>
#include <cmath>

namespace holder {

// ---------------------------------------------------------------------------
// Truncation

namespace {

double norm_of(SourceNorm kind, const Eigen::VectorXd& x) {
    return source_norm(kind, x.data(), static_cast<int>(x.size()));
}

Eigen::VectorXd random_box(detail::Uniform& u, int dim, double half) {
    Eigen::VectorXd x(dim);
    for (int k = 0; k < dim; ++k) {
        x[k] = u.next(-half, half);
    }
    return x;
}

Eigen::VectorXd random_direction(detail::Uniform& u, int dim, SourceNorm kind) {
    while (true) {
        Eigen::VectorXd v = random_box(u, dim, 1.0);
        const double n = norm_of(kind, v);
        if (n > 1e-3) {
            return v / n;
        }
    }
}

// (2 − a)²·a = target on [1, 2]; the left side decreases from 1 to 0 there.
double shell_threshold(double target) {
    double lo = 1.0;
    double hi = 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = (2.0 - mid) * (2.0 - mid) * mid;
        if (v > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

}  // namespace

bool qualifies_contraction(const TruncationMap& t, double R, const Eigen::VectorXd& x, const Eigen::VectorXd& z) {
    if (!(t.M > R && R >= 1.0)) {
        return false;
    }
    if (norm_of(t.norm, x) < t.M) {
        return false;
    }
    return norm_of(t.norm, truncation_apply(t, x)) < R && norm_of(t.norm, truncation_apply(t, z)) < R;
}

TruncationCertificate truncation_certify(const TruncationMap& t, std::size_t samples, std::uint64_t seed,
                                         std::vector<double> radii, int dim) {
    if (samples < 1000) {
        throw ArgumentError("truncation certificate needs at least 1000 samples");
    }
    if (dim < 1) {
        throw ArgumentError("dimension must be at least 1");
    }
    if (!(t.M > 0.0)) {
        throw ArgumentError("truncation radius M must be positive");
    }
    if (radii.empty()) {
        for (double R = 1.0; R < t.M; R *= 2.0) {
            radii.push_back(R);
        }
    }
    TruncationCertificate cert;
    cert.M = t.M;
    cert.norm = t.norm;
    cert.dim = dim;
    cert.samples = samples;
    cert.seed = seed;

    detail::Uniform u(seed);
    const double steps[3] = {3.0 * t.M, 0.1 * t.M, 1e-3 * t.M};
    for (std::size_t s = 0; s < samples; ++s) {
        const Eigen::VectorXd x = random_box(u, dim, 3.0 * t.M);
        const Eigen::VectorXd z = x + steps[s % 3] * random_box(u, dim, 1.0);
        const double d = norm_of(t.norm, x - z);
        if (d == 0.0) continue;
        const double ratio = norm_of(t.norm, truncation_apply(t, x) - truncation_apply(t, z)) / d;
        cert.max_ratio = std::max(cert.max_ratio, ratio);
    }
    cert.lipschitz_ok = cert.max_ratio <= 5.0 + 1e-9;
    cert.passed = cert.lipschitz_ok;

    for (double R : radii) {
        ContractionClause clause;
        clause.R = R;
        clause.bound = 5.0 * R / std::sqrt(t.M);
        if (t.M > R && R >= 1.0) {
            const double a_min = shell_threshold(R / t.M);
            for (std::size_t s = 0; s < samples; ++s) {
                const double a = a_min + (2.2 - a_min) * (1.0 - u.next());
                const Eigen::VectorXd x = a * t.M * random_direction(u, dim, t.norm);
                Eigen::VectorXd z;
                switch (s % 3) {
                    case 0: z = x + 1e-3 * t.M * random_box(u, dim, 1.0); break;
                    case 1: z = R * random_box(u, dim, 1.0); break;
                    default: {
                        const double b = a_min + (2.2 - a_min) * (1.0 - u.next());
                        z = b * t.M * random_direction(u, dim, t.norm);
                    }
                }
                if (!qualifies_contraction(t, R, x, z)) continue;
                const double d = norm_of(t.norm, x - z);
                if (d == 0.0) continue;
                const double ratio = norm_of(t.norm, truncation_apply(t, x) - truncation_apply(t, z)) / d;
                clause.max_ratio = std::max(clause.max_ratio, ratio);
                ++clause.pairs;
            }
        }
        if (clause.pairs == 0) {
            clause.status = "untested";
        } else if (clause.max_ratio <= clause.bound * (1.0 + 1e-9)) {
            clause.status = "pass";
        } else {
            clause.status = "fail";
            cert.passed = false;
        }
        cert.contraction.push_back(clause);
    }
    return cert;
}

TruncationResult truncate_compose(const GridFunction& f, const TruncationMap& t) {
    const Grid& grid = f.grid;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(grid.dim());
    if (!grid.contains(zero)) {
        throw DomainError("truncation needs a grid box containing the origin");
    }
    TruncationResult res;
    res.box_contains_ball = true;
    for (int k = 0; k < grid.dim(); ++k) {
        if (grid.lower(k) > -2.0 * t.M || grid.upper(k) < 2.0 * t.M) {
            res.box_contains_ball = false;
        }
    }
    if (!res.box_contains_ball) {
        res.warnings.push_back("grid box does not contain B(0, 2M); composition evaluated on the box only");
    }
    res.g = compose(f, LipschitzMap::truncation(t), true, &res.clipped);
    if (res.clipped > 0) {
        res.warnings.push_back(std::to_string(res.clipped) + " images clipped to the box");
    }
    res.anchor = eval_interp(f, zero);
    return res;
}

// ---------------------------------------------------------------------------
// Parameter selection

ApproxPlan select_parameters(const GridFunction& f, const Modulus& m, double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw ArgumentError("epsilon must be positive");
    }
    ApproxPlan plan;
    plan.epsilon = epsilon;
    plan.doubling_constant = check_admissible(m).doubling_constant;
    plan.lip_factor = std::pow(plan.doubling_constant, 3);

    const OffsetTable table = build_offset_table(f);
    const SmallScaleSup S(table, m);
    for (std::size_t e = 0; e < table.offsets.size(); ++e) {
        const Index& d = table.offsets[e];
        if (std::all_of(d.begin(), d.end(), [](long v) { return std::labs(v) <= 1; })) {
            plan.local_lipschitz = std::max(plan.local_lipschitz, table.max_increment[e] / table.distance[e]);
        }
    }
    const double finest = S.finest_distance();
    auto extended = [&](double rho) {
        if (rho < finest) {
            return plan.local_lipschitz == 0.0 ? 0.0 : plan.local_lipschitz * rho / m(rho);
        }
        return S(rho);
    };

    const double hmin = f.grid.h_min();
    const double diam = f.grid.diameter(f.norms.source);
    const int kmax = static_cast<int>(std::floor(std::log2(diam / (5.0 * hmin))));
    bool found = false;
    for (int k = kmax; k >= -60; --k) {
        const double r = std::ldexp(hmin, k);
        const double s5 = extended(5.0 * r);
        if (plan.lip_factor * s5 <= epsilon) {
            plan.r = r;
            plan.small_sup_at_5r = s5;
            found = true;
            break;
        }
    }
    if (!found) {
        throw PlanError("eq:dens1", "no radius r down to h_min*2^-60 keeps the 5-Lipschitz small-scale sup below " +
                                        format_real(epsilon));
    }

    plan.far_evidence = far_profile(f, m, default_far_deltas(f.grid, f.norms.source), FarMode::min);
    found = false;
    for (std::size_t j = 0; j < plan.far_evidence.scales.size(); ++j) {
        if (plan.far_evidence.values[j] <= epsilon) {
            plan.far_delta = plan.far_evidence.scales[j];
            plan.far_value_at_R = plan.far_evidence.values[j];
            found = true;
            break;
        }
    }
    if (!found) {
        throw PlanError("eq:dencc", "far-scale oscillation never drops below " + format_real(epsilon) +
                                        " inside the grid box");
    }
    plan.R = std::max(1.0, plan.far_delta);

    found = false;
    const double w_r = m(plan.r);
    const double w_2R = m(2.0 * plan.R);
    for (int k = static_cast<int>(std::ceil(std::log2(2.0 * plan.R))); k <= 1023; ++k) {
        const double M = std::ldexp(1.0, k);
        const double q = std::pow(M, 0.25);
        const double slack_scale = epsilon * w_r - m(plan.R / q);
        const double slack_growth = epsilon * m(q) - w_2R;
        if (M > plan.R && slack_scale >= 0.0 && slack_growth >= 0.0) {
            plan.M = M;
            plan.slack_scale = slack_scale;
            plan.slack_growth = slack_growth;
            found = true;
            break;
        }
    }
    if (!found) {
        throw PlanError("eq:choiceofM", "no power of two up to 2^1023 satisfies the truncation radius conditions");
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Mollification

GridFunction mollify(const GridFunction& g, const MollifierSpec& spec) {
    const Grid& grid = g.grid;
    const int n = grid.dim();
    if (!(spec.radius >= grid.h_max() * (1.0 - 1e-12)) || !std::isfinite(spec.radius)) {
        throw ArgumentError("mollifier radius must be at least the largest grid spacing");
    }
    const double r = spec.radius;
    std::vector<Index> offsets;
    std::vector<double> weights;
    std::vector<long> reach(n);
    for (int k = 0; k < n; ++k) {
        reach[k] = std::min(grid.shape[k] - 1, static_cast<long>(std::floor(r / grid.spacing[k])));
    }
    Index d(n);
    for (int k = 0; k < n; ++k) d[k] = -reach[k];
    while (true) {
        double w = 0.0;
        if (spec.profile == MollifierProfile::radial) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                const double u = static_cast<double>(d[k]) * grid.spacing[k] / r;
                s += u * u;
            }
            if (s < 1.0) {
                const double b = 1.0 - s;
                w = b * b * b * b;
            }
        } else {
            w = 1.0;
            for (int k = 0; k < n; ++k) {
                const double u = static_cast<double>(d[k]) * grid.spacing[k] / r;
                const double b = 1.0 - u * u;
                w *= b > 0.0 ? b * b * b * b : 0.0;
            }
        }
        if (w > 0.0) {
            offsets.push_back(d);
            weights.push_back(w);
        }
        int k = n - 1;
        while (k >= 0 && d[k] == reach[k]) {
            d[k] = -reach[k];
            --k;
        }
        if (k < 0) break;
        ++d[k];
    }
    const auto strides = grid.strides();
    std::vector<long long> shift(offsets.size());
    for (std::size_t o = 0; o < offsets.size(); ++o) {
        long long s = 0;
        for (int k = 0; k < n; ++k) s += static_cast<long long>(offsets[o][k]) * static_cast<long long>(strides[k]);
        shift[o] = s;
    }
    const int mc = g.ycomp();
    GridFunction out = g;
    std::vector<double> acc(static_cast<std::size_t>(mc));
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Index idx = grid.multi(i);
        std::fill(acc.begin(), acc.end(), 0.0);
        double wsum = 0.0;
        for (std::size_t o = 0; o < offsets.size(); ++o) {
            bool inside = true;
            for (int k = 0; k < n; ++k) {
                const long c = idx[k] + offsets[o][k];
                if (c < 0 || c >= grid.shape[k]) {
                    inside = false;
                    break;
                }
            }
            if (!inside) continue;
            const double* v = g.at(static_cast<std::size_t>(static_cast<long long>(i) + shift[o]));
            for (int c = 0; c < mc; ++c) acc[c] += weights[o] * v[c];
            wsum += weights[o];
        }
        for (int c = 0; c < mc; ++c) {
            out.values(static_cast<Eigen::Index>(i), c) = acc[c] / wsum;
        }
    }
    return out;
}

PipelineResult pipeline_vc_to_smooth(const GridFunction& f, const Modulus& m, double epsilon, double c_pipe) {
    PipelineResult res;
    res.c_pipe = c_pipe;
    res.plan = select_parameters(f, m, epsilon);
    TruncationResult tr = truncate_compose(f, TruncationMap{res.plan.M, f.norms.source});
    res.warnings = tr.warnings;
    const GridFunction& g = tr.g;

    const OffsetTable tg = build_offset_table(g);
    const SmallScaleSup Sg(tg, m);
    const auto scales = default_scales(g.grid, g.norms.source);
    res.delta = g.grid.h_min();
    for (auto it = scales.rbegin(); it != scales.rend(); ++it) {
        if (Sg(*it) <= 0.5 * epsilon) {
            res.delta = *it;
            break;
        }
    }
    const double target = 0.5 * epsilon * m(res.delta);
    const double diam = g.grid.diameter(g.norms.source);
    double radius = g.grid.h_max();
    res.h = mollify(g, MollifierSpec{radius});
    res.sup_error_g_h = sup_distance(g, res.h);
    for (double rho = 2.0 * radius; rho <= diam; rho *= 2.0) {
        GridFunction trial = mollify(g, MollifierSpec{rho});
        const double err = sup_distance(g, trial);
        if (err > target) break;
        radius = rho;
        res.h = std::move(trial);
        res.sup_error_g_h = err;
    }
    res.plan.mollifier_radius = radius;

    res.truncation_error = holder_seminorm(difference(f, g), m);
    res.seminorm_error = holder_seminorm(difference(f, res.h), m);
    res.sup_error = sup_distance(f, res.h);
    res.within = res.seminorm_error <= c_pipe * epsilon;
    return res;
}

// ---------------------------------------------------------------------------
// Lipschitz envelope

EnvelopeParams envelope_params(const GridFunction& f, const Modulus& m, double n) {
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ArgumentError("envelope slope n must be positive");
    }
    EnvelopeParams p;
    p.n = n;
    const OffsetTable t = build_offset_table(f);
    p.threshold = 2.0 * m(1.0) * holder_seminorm(t, m);
    std::vector<std::size_t> order(t.distance.size());
    for (std::size_t e = 0; e < order.size(); ++e) order[e] = e;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t.distance[a] < t.distance[b]; });
    for (std::size_t e : order) {
        if (t.distance[e] <= 1.0) p.omega_f_one = std::max(p.omega_f_one, t.max_increment[e]);
    }
    double run = 0.0;
    for (std::size_t e : order) {
        run = std::max(run, t.max_increment[e]);
        if (t.distance[e] >= 1.0 && run > 2.0 * t.distance[e] * p.omega_f_one * (1.0 + 1e-12)) {
            p.subadditive_ok = false;
        }
    }
    if (n > p.threshold) {
        p.localization_radius = 1.0;
    }
    return p;
}

GridFunction lipschitz_envelope(const GridFunction& f, const EnvelopeParams& p) {
    if (f.ycomp() != 1) {
        throw UnsupportedError("the Lipschitz envelope is defined for scalar functions only");
    }
    if (!(p.n > 0.0)) {
        throw ArgumentError("envelope slope n must be positive");
    }
    const Grid& g = f.grid;
    const int dim = g.dim();
    const std::size_t N = f.size();
    std::vector<long> idx(N * static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < N; ++i) {
        const Index a = g.multi(i);
        std::copy(a.begin(), a.end(), idx.begin() + static_cast<std::ptrdiff_t>(i * dim));
    }
    const double* v = f.values.data();
    const double radius = p.localization_radius;
    GridFunction out = f;
    Index d(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < N; ++i) {
        double best = v[i];
        for (std::size_t j = 0; j < N; ++j) {
            if (j == i) continue;
            for (int k = 0; k < dim; ++k) d[k] = idx[j * dim + k] - idx[i * dim + k];
            const double dist = offset_distance(g, f.norms.source, d);
            if (dist > radius) continue;
            best = std::min(best, v[j] + p.n * dist);
        }
        out.values(static_cast<Eigen::Index>(i), 0) = best;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Uniform + Lipschitz convergence

ConvergenceReport uniform_lip_convergence_check(const std::vector<GridFunction>& seq, const GridFunction& f,
                                                const Modulus& m, double tolerance) {
    for (const auto& fk : seq) {
        if (!(fk.grid == f.grid) || fk.ycomp() != f.ycomp()) {
            throw ArgumentError("sequence members must share the grid of the limit");
        }
    }
    ConvergenceReport rep;
    rep.target_lipschitz = grid_lipschitz(f);

    // distinct pair distances with the running max of t/ω(t)
    std::vector<double> dist;
    for (const Index& d : detail::positive_offsets(f.grid)) {
        dist.push_back(offset_distance(f.grid, f.norms.source, d));
    }
    std::sort(dist.begin(), dist.end());
    dist.erase(std::unique(dist.begin(), dist.end()), dist.end());
    std::vector<double> slope(dist.size());
    double run = 0.0;
    for (std::size_t t = 0; t < dist.size(); ++t) {
        run = std::max(run, dist[t] / m(dist[t]));
        slope[t] = run;
    }

    for (const auto& fk : seq) {
        ConvergenceRow row;
        row.sup_error = sup_distance(fk, f);
        const OffsetTable t = build_offset_table(difference(fk, f));
        row.seminorm_error = holder_seminorm(t, m);
        row.lipschitz = grid_lipschitz(fk);
        const double L = rep.target_lipschitz + row.lipschitz;
        row.bound = dist.empty() ? 0.0 : 2.0 * row.sup_error / m(dist.front());
        for (std::size_t k = 0; k < dist.size(); ++k) {
            const double near = L * slope[k];
            const double far = k + 1 < dist.size() ? 2.0 * row.sup_error / m(dist[k + 1]) : 0.0;
            row.bound = std::min(row.bound, std::max(near, far));
        }
        row.bound_ok = row.seminorm_error <= row.bound * (1.0 + 1e-12) + 1e-15;
        rep.rows.push_back(row);
    }
    if (!rep.rows.empty()) {
        const auto& first = rep.rows.front();
        const auto& last = rep.rows.back();
        rep.uniform = last.sup_error <= 1e-12 || last.sup_error <= 0.5 * first.sup_error;
        double lmax = 0.0;
        for (const auto& r : rep.rows) lmax = std::max(lmax, r.lipschitz);
        rep.lip_bounded = lmax <= 2.0 * std::max(first.lipschitz, rep.target_lipschitz) + 1e-12;
        rep.hypothesis_holds = rep.uniform && rep.lip_bounded;
        rep.hypothesis_violated = !rep.hypothesis_holds;
        rep.converged = last.seminorm_error <= tolerance;
        rep.diverging = last.seminorm_error > first.seminorm_error;
        bool bounds = true;
        for (const auto& r : rep.rows) bounds = bounds && r.bound_ok;
        rep.implication_failure = rep.hypothesis_holds && (!rep.converged || !bounds);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Bump multiplication

namespace {

// C^∞ step from 0 (u ≤ 0) to 1 (u ≥ 1).
double smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double gexp = std::exp(1.0 / u - 1.0 / (1.0 - u));
    return 1.0 / (1.0 + gexp);
}

double smoothstep_slope(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double g = 1.0 / u - 1.0 / (1.0 - u);
    const double dg = -1.0 / (u * u) - 1.0 / ((1.0 - u) * (1.0 - u));
    const double e = std::exp(g);
    if (!std::isfinite(e)) return 0.0;
    return std::fabs(e * dg) / ((1.0 + e) * (1.0 + e));
}

void check_bump(const BumpSpec& b) {
    if (!(b.inner_radius > 0.0) || !(b.outer_radius > b.inner_radius)) {
        throw ArgumentError("bump needs 0 < inner_radius < outer_radius");
    }
}

}  // namespace

double bump_theta(const BumpSpec& b, double t) {
    check_bump(b);
    return 1.0 - smoothstep((t - b.inner_radius) / (b.outer_radius - b.inner_radius));
}

double bump_value(const BumpSpec& b, const Eigen::VectorXd& x, SourceNorm norm) {
    return bump_theta(b, source_norm(norm, x.data(), static_cast<int>(x.size())));
}

double bump_lipschitz(const BumpSpec& b) {
    check_bump(b);
    constexpr int kSamples = 100000;
    double best = 0.0;
    for (int k = 0; k < kSamples; ++k) {
        best = std::max(best, smoothstep_slope((k + 0.5) / kSamples));
    }
    best = std::max(best, smoothstep_slope(0.5));
    return best * (1.0 + 1e-6) / (b.outer_radius - b.inner_radius);
}

BumpResult bump_multiply(const GridFunction& g, const BumpSpec& b) {
    check_bump(b);
    BumpResult res;
    res.product = g;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double phi = bump_value(b, g.grid.point(i), g.norms.source);
        res.product.values.row(static_cast<Eigen::Index>(i)) *= phi;
    }
    res.bump_lipschitz = bump_lipschitz(b);
    res.input_lipschitz = grid_lipschitz(g);
    res.input_sup = sup_norm(g);
    res.product_lipschitz = grid_lipschitz(res.product);
    res.bound = res.input_lipschitz + res.bump_lipschitz * res.input_sup;
    res.bound_ok = res.product_lipschitz <= res.bound * (1.0 + 1e-12);
    return res;
}

}  // namespace holder
