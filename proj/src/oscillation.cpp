// SPDX-License-Identifier: MIT
#include "holder/oscillation.hpp"

#include "holder/errors.hpp"
#include "pairscan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace holder {

OffsetTable build_offset_table(const GridFunction& f, std::uint64_t pair_cap) {
    const Grid& g = f.grid;
    if (f.size() < 2) {
        throw ArgumentError("need at least two grid points");
    }
    OffsetTable t;
    t.offsets = detail::positive_offsets(g);
    t.total_pairs = detail::total_pairs(g);
    t.sampled = t.total_pairs > pair_cap;
    const auto strides = g.strides();
    const int m = f.ycomp();
    const TargetNorm kind = f.norms.target;
    const double* v = f.values.data();

    t.distance.reserve(t.offsets.size());
    t.max_increment.reserve(t.offsets.size());
    t.pairs.reserve(t.offsets.size());
    for (const Index& d : t.offsets) {
        const std::uint64_t pairs = detail::offset_pair_count(g, d);
        double best = 0.0;
        std::uint64_t visited = 0;
        const std::uint64_t quota = detail::offset_quota(pairs, t.total_pairs, pair_cap);
        if (m == 1) {
            visited = detail::scan_offset(g, strides, d, quota, [&](std::size_t i, std::size_t j) {
                best = std::max(best, std::fabs(v[i] - v[j]));
            });
        } else {
            visited = detail::scan_offset(g, strides, d, quota, [&](std::size_t i, std::size_t j) {
                best = std::max(best, target_distance(kind, v + i * m, v + j * m, m));
            });
        }
        t.scanned_pairs += visited;
        t.distance.push_back(offset_distance(g, f.norms.source, d));
        t.max_increment.push_back(best);
        t.pairs.push_back(pairs);
    }
    return t;
}

double holder_seminorm(const OffsetTable& table, const Modulus& m) {
    double best = 0.0;
    for (std::size_t e = 0; e < table.distance.size(); ++e) {
        best = std::max(best, table.max_increment[e] / m(table.distance[e]));
    }
    return best;
}

double holder_seminorm(const GridFunction& f, const Modulus& m) {
    if (f.size() < 2) {
        throw ArgumentError("seminorm needs at least two grid points");
    }
    return holder_seminorm(build_offset_table(f), m);
}

double grid_lipschitz(const OffsetTable& table) {
    double best = 0.0;
    for (std::size_t e = 0; e < table.distance.size(); ++e) {
        best = std::max(best, table.max_increment[e] / table.distance[e]);
    }
    return best;
}

double grid_lipschitz(const GridFunction& f) { return grid_lipschitz(build_offset_table(f)); }

SmallScaleSup::SmallScaleSup(const OffsetTable& table, const Modulus& m) {
    std::vector<std::size_t> order(table.distance.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return table.distance[a] < table.distance[b]; });
    double run = 0.0;
    for (std::size_t e : order) {
        run = std::max(run, table.max_increment[e] / m(table.distance[e]));
        dist_.push_back(table.distance[e]);
        prefix_max_.push_back(run);
    }
}

double SmallScaleSup::operator()(double rho) const {
    const auto it = std::upper_bound(dist_.begin(), dist_.end(), rho);
    if (it == dist_.begin()) {
        return 0.0;
    }
    return prefix_max_[static_cast<std::size_t>(it - dist_.begin()) - 1];
}

namespace {

void check_scales(const std::vector<double>& scales, const char* what) {
    for (std::size_t k = 0; k < scales.size(); ++k) {
        if (!(scales[k] > 0.0) || !std::isfinite(scales[k])) {
            throw ArgumentError(std::string(what) + " must be positive and finite");
        }
        if (k > 0 && !(scales[k] > scales[k - 1])) {
            throw ArgumentError(std::string(what) + " must be strictly increasing");
        }
    }
}

}  // namespace

ScaleProfile scale_profile(const OffsetTable& table, const Modulus& m, std::vector<double> scales, double band) {
    if (!(band > 0.0 && band < 0.5)) {
        throw ArgumentError("band width must lie in (0, 0.5)");
    }
    check_scales(scales, "scales");
    std::vector<double> ratio(table.distance.size());
    for (std::size_t e = 0; e < ratio.size(); ++e) {
        ratio[e] = table.max_increment[e] / m(table.distance[e]);
    }
    ScaleProfile p;
    p.band_width = band;
    p.sampled = table.sampled;
    for (double delta : scales) {
        const double lo = delta * (1.0 - band);
        const double hi = delta * (1.0 + band);
        double best = 0.0;
        std::uint64_t count = 0;
        for (std::size_t e = 0; e < ratio.size(); ++e) {
            const double d = table.distance[e];
            if (d >= lo && d <= hi) {
                best = std::max(best, ratio[e]);
                count += table.pairs[e];
            }
        }
        if (count > 0) {
            p.scales.push_back(delta);
            p.values.push_back(best);
            p.pair_counts.push_back(count);
        }
    }
    return p;
}

ScaleProfile scale_profile(const GridFunction& f, const Modulus& m, std::vector<double> scales, double band) {
    return scale_profile(build_offset_table(f), m, std::move(scales), band);
}

ScaleProfile far_profile(const GridFunction& f, const Modulus& m, std::vector<double> deltas, FarMode mode,
                         std::uint64_t pair_cap) {
    check_scales(deltas, "far deltas");
    const Grid& g = f.grid;
    const std::size_t nd = deltas.size();
    std::vector<double> norms(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        norms[i] = point_norm(g, f.norms.source, i);
    }
    // bucket b holds pairs whose key exceeds exactly deltas[0..b-1]
    std::vector<double> bucket_max(nd + 1, 0.0);
    std::vector<std::uint64_t> bucket_count(nd + 1, 0);
    const auto offsets = detail::positive_offsets(g);
    const auto strides = g.strides();
    const std::uint64_t total = detail::total_pairs(g);
    const int mcomp = f.ycomp();
    const double* v = f.values.data();
    const TargetNorm kind = f.norms.target;
    bool sampled = total > pair_cap;
    for (const Index& d : offsets) {
        const double w = m(offset_distance(g, f.norms.source, d));
        const std::uint64_t pairs = detail::offset_pair_count(g, d);
        detail::scan_offset(g, strides, d, detail::offset_quota(pairs, total, pair_cap),
                            [&](std::size_t i, std::size_t j) {
                                const double key = mode == FarMode::min ? std::min(norms[i], norms[j])
                                                                        : std::max(norms[i], norms[j]);
                                const auto b = static_cast<std::size_t>(
                                    std::lower_bound(deltas.begin(), deltas.end(), key) - deltas.begin());
                                if (b == 0) return;
                                const double r = target_distance(kind, v + i * mcomp, v + j * mcomp, mcomp) / w;
                                bucket_max[b] = std::max(bucket_max[b], r);
                                ++bucket_count[b];
                            });
    }
    ScaleProfile p;
    p.sampled = sampled;
    std::vector<double> suffix_max(nd + 2, 0.0);
    std::vector<std::uint64_t> suffix_count(nd + 2, 0);
    for (std::size_t b = nd + 1; b-- > 0;) {
        suffix_max[b] = std::max(suffix_max[b + 1], bucket_max[b]);
        suffix_count[b] = suffix_count[b + 1] + bucket_count[b];
    }
    for (std::size_t j = 0; j < nd; ++j) {
        // pairs qualify for deltas[j] when their bucket is above j
        if (suffix_count[j + 1] > 0) {
            p.scales.push_back(deltas[j]);
            p.values.push_back(suffix_max[j + 1]);
            p.pair_counts.push_back(suffix_count[j + 1]);
        }
    }
    return p;
}

std::vector<double> default_scales(const Grid& g, SourceNorm norm) {
    const double diam = g.diameter(norm) * (1.0 + 1e-12);
    std::vector<double> out;
    for (double s = g.h_min(); s <= diam; s *= 2.0) {
        out.push_back(s);
    }
    return out;
}

std::vector<double> default_far_deltas(const Grid& g, SourceNorm norm) {
    double top = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        top = std::max(top, point_norm(g, norm, i));
    }
    std::vector<double> out;
    for (double s = g.h_min(); s < top; s *= 2.0) {
        out.push_back(s);
    }
    return out;
}

VanishingVerdict classify_vanishing(const GridFunction& f, const Modulus& m, const Thresholds& eps,
                                    const ClassifyOptions& options) {
    if (!(eps.small > 0.0) || !(eps.large > 0.0) || !(eps.far > 0.0)) {
        throw ArgumentError("vanishing thresholds must be positive");
    }
    const OffsetTable table = build_offset_table(f);
    VanishingVerdict v;
    v.thresholds = eps;
    v.seminorm = holder_seminorm(table, m);
    v.sampled = table.sampled;
    auto scales = options.scales.empty() ? default_scales(f.grid, f.norms.source) : options.scales;
    auto deltas = options.deltas.empty() ? default_far_deltas(f.grid, f.norms.source) : options.deltas;
    v.profile = scale_profile(table, m, std::move(scales), options.band);
    v.far_evidence = far_profile(f, m, std::move(deltas), FarMode::min);
    v.small = !v.profile.empty() && v.profile.values.front() <= eps.small;
    v.large = !v.profile.empty() && v.profile.values.back() <= eps.large;
    v.far = !v.far_evidence.empty() && v.far_evidence.values.back() <= eps.far;
    return v;
}

PrecomposeReport lip_precompose_check(const GridFunction& f, const LipschitzMap& tau, const Modulus& m,
                                      std::vector<double> scales, double band) {
    PrecomposeReport rep;
    rep.map = tau.describe();
    rep.lipschitz = tau.lipschitz_constant(f.norms.source);
    rep.doubling_constant = check_admissible(m).doubling_constant;
    const GridFunction g = compose(f, tau);
    if (scales.empty()) {
        scales = default_scales(f.grid, f.norms.source);
    }
    const OffsetTable tf = build_offset_table(f);
    const SmallScaleSup sup_f(tf, m);
    const ScaleProfile pg = scale_profile(g, m, scales, band);
    const double cell = f.grid.cell_diameter(f.norms.source);
    const double fmax = sup_norm(f);
    rep.passed = true;
    for (std::size_t k = 0; k < pg.scales.size(); ++k) {
        PrecomposeRow row;
        row.scale = pg.scales[k];
        row.lhs = pg.values[k];
        const double lo = row.scale * (1.0 - band);
        row.reach = rep.lipschitz * row.scale * (1.0 + band) + 2.0 * cell;
        row.small_sup = sup_f(row.reach);
        const int steps = std::max(0, static_cast<int>(std::ceil(std::log2(row.reach / lo))));
        row.factor = std::pow(rep.doubling_constant, steps);
        row.rhs = row.factor * row.small_sup;
        const double slack = 1e-12 * (row.rhs + fmax / m(lo));
        row.ok = row.lhs <= row.rhs + slack;
        rep.passed = rep.passed && row.ok;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace holder
