// SPDX-License-Identifier: MIT
#include "holder/meanosc.hpp"

#include "holder/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace holder {

Index CubeLevel::anchor(std::size_t cube) const {
    Index a(cells.size());
    for (std::size_t k = cells.size(); k-- > 0;) {
        a[k] = static_cast<long>(cube % static_cast<std::size_t>(cells[k]));
        cube /= static_cast<std::size_t>(cells[k]);
    }
    return a;
}

std::size_t CubeStats::cube_of(int level, std::size_t point) const {
    const auto& cell = axis_cell.at(static_cast<std::size_t>(level - min_level));
    const CubeLevel& lv = at(level);
    const Index idx = grid.multi(point);
    std::size_t lin = 0;
    for (int k = 0; k < grid.dim(); ++k) {
        lin = lin * static_cast<std::size_t>(lv.cells[k]) + static_cast<std::size_t>(cell[k][idx[k]]);
    }
    return lin;
}

namespace {

double base_width(const Grid& g) {
    double b = 0.0;
    for (int k = 0; k < g.dim(); ++k) {
        b = std::max(b, g.width(k));
    }
    return b;
}

}  // namespace

int default_max_level(const Grid& g) {
    const double base = base_width(g);
    const double need = 2.0 * g.h_max();
    int k = 0;
    while (k < 60 && std::ldexp(base, -(k + 1)) >= need) {
        ++k;
    }
    return k;
}

CubeStats build_cube_stats(const GridFunction& f, const Modulus& m, int min_level, int max_level) {
    const Grid& g = f.grid;
    const int n = g.dim();
    if (min_level < 0 || max_level < min_level) {
        throw ArgumentError("cube levels must satisfy 0 <= min_level <= max_level");
    }
    CubeStats st;
    st.grid = g;
    st.norms = f.norms;
    st.min_level = min_level;
    st.max_level = max_level;
    st.base = base_width(g);
    if (max_level > 0 && std::ldexp(st.base, -max_level) < 2.0 * g.h_max()) {
        throw ArgumentError("max_level too deep: cubes must span at least two grid spacings on every axis");
    }
    const int mc = f.ycomp();
    for (int level = min_level; level <= max_level; ++level) {
        CubeLevel lv;
        lv.level = level;
        lv.sidelength = std::ldexp(st.base, -level);
        std::vector<std::vector<long>> cell(n);
        lv.cells.resize(n);
        lv.axis_first.resize(n);
        lv.axis_count.resize(n);
        for (int k = 0; k < n; ++k) {
            const double span = std::ldexp(g.width(k) / st.base, level);
            lv.cells[k] = std::max(1L, static_cast<long>(std::ceil(span - 1e-9)));
            lv.axis_first[k].assign(static_cast<std::size_t>(lv.cells[k]), -1);
            lv.axis_count[k].assign(static_cast<std::size_t>(lv.cells[k]), 0);
            cell[k].resize(static_cast<std::size_t>(g.shape[k]));
            for (long i = 0; i < g.shape[k]; ++i) {
                const double u = static_cast<double>(i) * g.spacing[k];
                const double q = std::ldexp(u / st.base + 1e-12, level);
                const long a = std::min(static_cast<long>(std::floor(q)), lv.cells[k] - 1);
                cell[k][static_cast<std::size_t>(i)] = a;
                if (lv.axis_first[k][static_cast<std::size_t>(a)] < 0) {
                    lv.axis_first[k][static_cast<std::size_t>(a)] = i;
                }
                ++lv.axis_count[k][static_cast<std::size_t>(a)];
            }
        }
        std::size_t cubes = 1;
        for (long c : lv.cells) cubes *= static_cast<std::size_t>(c);
        lv.count.assign(cubes, 0);
        lv.average = Values::Zero(static_cast<Eigen::Index>(cubes), mc);
        lv.mean_deviation.assign(cubes, 0.0);
        lv.mean_osc.assign(cubes, 0.0);

        std::vector<std::size_t> owner(f.size());
        for (std::size_t p = 0; p < f.size(); ++p) {
            const Index idx = g.multi(p);
            std::size_t lin = 0;
            for (int k = 0; k < n; ++k) {
                lin = lin * static_cast<std::size_t>(lv.cells[k]) + static_cast<std::size_t>(cell[k][idx[k]]);
            }
            owner[p] = lin;
            ++lv.count[lin];
            const double* v = f.at(p);
            for (int c = 0; c < mc; ++c) {
                lv.average(static_cast<Eigen::Index>(lin), c) += v[c];
            }
        }
        std::size_t empty = 0;
        for (std::size_t q = 0; q < cubes; ++q) {
            if (lv.count[q] == 0) {
                ++empty;
                continue;
            }
            for (int c = 0; c < mc; ++c) {
                lv.average(static_cast<Eigen::Index>(q), c) /= static_cast<double>(lv.count[q]);
            }
        }
        for (std::size_t p = 0; p < f.size(); ++p) {
            const std::size_t q = owner[p];
            lv.mean_deviation[q] += target_distance(f.norms.target, f.at(p), lv.average.data() + q * mc, mc);
        }
        const double w = m(lv.sidelength);
        for (std::size_t q = 0; q < cubes; ++q) {
            if (lv.count[q] == 0) continue;
            lv.mean_deviation[q] /= static_cast<double>(lv.count[q]);
            lv.mean_osc[q] = lv.mean_deviation[q] / w;
        }
        if (empty > 0) {
            st.log.push_back("level " + std::to_string(level) + ": " + std::to_string(empty) +
                             " empty cubes omitted");
        }
        st.axis_cell.push_back(std::move(cell));
        st.levels.push_back(std::move(lv));
    }
    return st;
}

CubeStats build_cube_stats(const GridFunction& f, const Modulus& m) {
    return build_cube_stats(f, m, 0, default_max_level(f.grid));
}

double bmo_norm(const CubeStats& stats) {
    if (stats.levels.empty()) {
        throw ArgumentError("empty cube tree");
    }
    double best = 0.0;
    for (const CubeLevel& lv : stats.levels) {
        for (std::size_t q = 0; q < lv.size(); ++q) {
            if (lv.count[q] > 0) {
                best = std::max(best, lv.mean_osc[q]);
            }
        }
    }
    return best;
}

VmoProfiles vmo_profiles(const CubeStats& stats, std::vector<double> deltas) {
    if (stats.levels.size() < 3) {
        throw ArgumentError("VMO profiles need a tree spanning at least three levels");
    }
    const Grid& g = stats.grid;
    if (deltas.empty()) {
        deltas = default_far_deltas(g, stats.norms.source);
    }
    VmoProfiles out;
    // finest level first so that sidelengths ascend
    for (auto it = stats.levels.rbegin(); it != stats.levels.rend(); ++it) {
        double best = 0.0;
        std::uint64_t used = 0;
        for (std::size_t q = 0; q < it->size(); ++q) {
            if (it->count[q] > 0) {
                best = std::max(best, it->mean_osc[q]);
                ++used;
            }
        }
        out.small.scales.push_back(it->sidelength);
        out.small.values.push_back(best);
        out.small.pair_counts.push_back(used);
    }
    out.large = out.small;

    std::vector<double> far_max(deltas.size(), 0.0);
    std::vector<std::uint64_t> far_count(deltas.size(), 0);
    const int n = g.dim();
    std::vector<double> comp(static_cast<std::size_t>(n));
    for (const CubeLevel& lv : stats.levels) {
        for (std::size_t q = 0; q < lv.size(); ++q) {
            if (lv.count[q] == 0) continue;
            const Index a = lv.anchor(q);
            for (int k = 0; k < n; ++k) {
                const double lo = g.origin[k] + static_cast<double>(a[k]) * lv.sidelength;
                const double hi = g.origin[k] + static_cast<double>(a[k] + 1) * lv.sidelength;
                comp[k] = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::fabs(lo), std::fabs(hi));
            }
            const double dist = source_norm(stats.norms.source, comp.data(), n);
            for (std::size_t j = 0; j < deltas.size(); ++j) {
                if (dist > deltas[j]) {
                    far_max[j] = std::max(far_max[j], lv.mean_osc[q]);
                    ++far_count[j];
                }
            }
        }
    }
    for (std::size_t j = 0; j < deltas.size(); ++j) {
        if (far_count[j] > 0) {
            out.far.scales.push_back(deltas[j]);
            out.far.values.push_back(far_max[j]);
            out.far.pair_counts.push_back(far_count[j]);
        }
    }
    return out;
}

namespace {

// (Σ over ordered pairs of the index box of ω(‖x − y‖)) / count², for a box of the given side counts.
double box_averaged_modulus(const Grid& g, SourceNorm norm, const Modulus& m, const std::vector<long>& sides) {
    const int n = g.dim();
    Index d(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        d[k] = -(sides[k] - 1);
    }
    double total = 0.0;
    double count = 1.0;
    for (long s : sides) count *= static_cast<double>(s);
    while (true) {
        double weight = 1.0;
        for (int k = 0; k < n; ++k) {
            weight *= static_cast<double>(sides[k] - std::labs(d[k]));
        }
        total += weight * m(offset_distance(g, norm, d));
        int k = n - 1;
        while (k >= 0 && d[k] == sides[k] - 1) {
            d[k] = -(sides[k] - 1);
            --k;
        }
        if (k < 0) break;
        ++d[k];
    }
    return total / (count * count);
}

}  // namespace

double averaged_modulus_ratio(const CubeStats& stats, const Modulus& m) {
    const Grid& g = stats.grid;
    const int n = g.dim();
    double best = 0.0;
    for (const CubeLevel& lv : stats.levels) {
        std::map<std::vector<long>, double> cache;
        const double w = m(lv.sidelength);
        for (std::size_t q = 0; q < lv.size(); ++q) {
            if (lv.count[q] == 0) continue;
            const Index a = lv.anchor(q);
            std::vector<long> sides(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k) {
                sides[k] = lv.axis_count[k][static_cast<std::size_t>(a[k])];
            }
            auto it = cache.find(sides);
            if (it == cache.end()) {
                it = cache.emplace(sides, box_averaged_modulus(g, stats.norms.source, m, sides)).first;
            }
            best = std::max(best, it->second / w);
        }
    }
    return best;
}

MeyersComparison meyers_compare(const GridFunction& f, const Modulus& m, const ModulusCertificate& cert,
                                std::optional<MeyersCeilings> ceilings) {
    if (!std::isfinite(cert.dini_constant)) {
        throw ArgumentError("Meyers comparison needs a modulus with finite Dini constant");
    }
    MeyersComparison out;
    const CubeStats stats = build_cube_stats(f, m);
    out.seminorm = holder_seminorm(f, m);
    out.bmo = bmo_norm(stats);
    out.dini = cert.dini_constant;
    out.averaged_modulus = averaged_modulus_ratio(stats, m);
    out.ceilings = ceilings;
    if (out.seminorm == 0.0) {
        out.degenerate = true;
        out.ratio_1 = std::nan("");
        out.ratio_2 = std::nan("");
    } else {
        out.ratio_1 = out.bmo / out.seminorm;
        out.ratio_2 = out.seminorm / (out.dini * out.bmo);
    }
    if (ceilings) {
        out.within = out.averaged_modulus <= ceilings->averaged_modulus &&
                     (out.degenerate || (out.ratio_1 <= ceilings->ratio_1 && out.ratio_2 <= ceilings->ratio_2));
    }
    return out;
}

TelescopeRecord dyadic_chain_reconstruct(const CubeStats& stats, const GridFunction& f, std::size_t x,
                                         std::size_t y) {
    if (!(f.grid == stats.grid)) {
        throw ArgumentError("cube tree was built on a different grid");
    }
    if (x >= f.size() || y >= f.size()) {
        throw ArgumentError("telescoping points must be grid points");
    }
    int top = stats.max_level + 1;
    for (int level = stats.max_level; level >= stats.min_level; --level) {
        if (stats.cube_of(level, x) == stats.cube_of(level, y)) {
            top = level;
            break;
        }
    }
    if (top > stats.max_level) {
        throw ArgumentError("points share no cube in the tree");
    }
    const int mc = f.ycomp();
    const TargetNorm kind = f.norms.target;
    TelescopeRecord rec;
    rec.top_level = top;
    rec.top_sidelength = stats.at(top).sidelength;
    {
        Index d = f.grid.multi(x);
        const Index b = f.grid.multi(y);
        for (std::size_t k = 0; k < d.size(); ++k) d[k] -= b[k];
        rec.distance = offset_distance(f.grid, f.norms.source, d);
    }
    rec.tight = rec.top_sidelength <= 2.0 * rec.distance;

    auto chain = [&](std::size_t p, std::vector<double>& inc, std::vector<double>& bound, Eigen::VectorXd& sum,
                     Eigen::VectorXd& boundary) {
        sum = Eigen::VectorXd::Zero(mc);
        bool ok = true;
        for (int level = top; level < stats.max_level; ++level) {
            const CubeLevel& parent = stats.at(level);
            const CubeLevel& child = stats.at(level + 1);
            const std::size_t qp = stats.cube_of(level, p);
            const std::size_t qc = stats.cube_of(level + 1, p);
            const double* ap = parent.average.data() + qp * mc;
            const double* ac = child.average.data() + qc * mc;
            for (int c = 0; c < mc; ++c) {
                sum[c] += ac[c] - ap[c];
            }
            const double step = target_distance(kind, ac, ap, mc);
            const double factor = static_cast<double>(parent.count[qp]) / static_cast<double>(child.count[qc]);
            const double b = factor * parent.mean_deviation[qp];
            inc.push_back(step);
            bound.push_back(b);
            ok = ok && step <= b * (1.0 + 1e-12) + 1e-15;
        }
        const CubeLevel& finest = stats.at(stats.max_level);
        const std::size_t qf = stats.cube_of(stats.max_level, p);
        boundary.resize(mc);
        for (int c = 0; c < mc; ++c) {
            boundary[c] = f.at(p)[c] - finest.average(static_cast<Eigen::Index>(qf), c);
        }
        return ok;
    };
    const bool ok_x = chain(x, rec.increments_x, rec.bounds_x, rec.sum_x, rec.boundary_x);
    const bool ok_y = chain(y, rec.increments_y, rec.bounds_y, rec.sum_y, rec.boundary_y);
    rec.bound_ok = ok_x && ok_y;

    Eigen::VectorXd lhs(mc);
    for (int c = 0; c < mc; ++c) {
        lhs[c] = f.at(x)[c] - f.at(y)[c];
    }
    const Eigen::VectorXd rhs = rec.sum_x - rec.sum_y + rec.boundary_x - rec.boundary_y;
    const Eigen::VectorXd diff = lhs - rhs;
    rec.residual = target_norm(kind, diff.data(), mc);
    rec.identity_ok = rec.residual < 1e-10;
    return rec;
}

}  // namespace holder
