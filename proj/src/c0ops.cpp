// SPDX-License-Identifier: MIT
#include "holder/c0ops.hpp"

#include "holder/errors.hpp"
#include "holder/maps.hpp"

#include <algorithm>
#include <cmath>

namespace holder {

GridFunction soft_threshold_map(const GridFunction& f, double r) {
    if (f.norms.source != SourceNorm::linf) {
        throw UnsupportedError("soft threshold locality holds in the sup-norm geometry only; use --norm-x linf");
    }
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw ArgumentError("soft threshold r must be positive");
    }
    GridFunction g = compose(f, LipschitzMap::soft_threshold(r));
    g.label = f.label.empty() ? std::string() : f.label + "∘Φ";
    return g;
}

LocalityReport local_coordinate_dependence_check(const GridFunction& g, double r,
                                                 const std::vector<std::size_t>& centers) {
    if (!(r > 0.0)) {
        throw ArgumentError("soft threshold r must be positive");
    }
    const Grid& grid = g.grid;
    const int n = grid.dim();
    LocalityReport rep;
    rep.r = r;
    rep.passed = true;
    const double half = 0.5 * r;
    for (std::size_t c : centers) {
        if (c >= g.size()) {
            throw ArgumentError("center index outside the grid");
        }
        LocalityRow row;
        row.center = c;
        row.point = grid.point(c);
        for (int k = 0; k < n; ++k) {
            if (std::fabs(row.point[k]) > half) row.axes.push_back(k);
        }
        // index window covering ‖z − x‖_∞ ≤ r/2
        const Index ci = grid.multi(c);
        Index lo(n), hi(n);
        for (int k = 0; k < n; ++k) {
            const long reach = static_cast<long>(std::floor(half / grid.spacing[k] + 1e-9));
            lo[k] = std::max(0L, ci[k] - reach);
            hi[k] = std::min(grid.shape[k] - 1, ci[k] + reach);
        }
        Index z = lo;
        while (true) {
            const std::size_t j = grid.linear(z);
            Eigen::VectorXd p = grid.point(j);
            if ((p - row.point).lpNorm<Eigen::Infinity>() <= half * (1.0 + 1e-12)) {
                Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
                for (int k : row.axes) q[k] = p[k];
                const Eigen::VectorXd gq = eval_interp(g, q);
                const double dev = (Eigen::Map<const Eigen::VectorXd>(g.at(j), g.ycomp()) - gq).lpNorm<Eigen::Infinity>();
                row.max_deviation = std::max(row.max_deviation, dev);
                ++row.checked;
            }
            int k = n - 1;
            while (k >= 0 && z[k] == hi[k]) {
                z[k] = lo[k];
                --k;
            }
            if (k < 0) break;
            ++z[k];
        }
        row.ok = row.max_deviation <= rep.tolerance;
        rep.passed = rep.passed && row.ok;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

GridFunction tensor_mollify(const GridFunction& g, double eta, const CoordinateSet& axes) {
    const Grid& grid = g.grid;
    const int n = grid.dim();
    if (!std::isfinite(eta)) {
        throw ArgumentError("eta must be finite");
    }
    for (int a : axes) {
        if (a < 0 || a >= n) {
            throw ArgumentError("axis " + std::to_string(a + 1) + " is not an axis of the grid");
        }
        if (!(eta >= grid.spacing[a] * (1.0 - 1e-12))) {
            throw ArgumentError("eta must be at least the grid spacing on every selected axis");
        }
    }
    CoordinateSet sorted = axes;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    GridFunction cur = g;
    const auto strides = grid.strides();
    const int mc = g.ycomp();
    for (int a : sorted) {
        const long reach = static_cast<long>(std::floor(eta / grid.spacing[a]));
        std::vector<double> w;
        double wsum = 0.0;
        for (long j = -reach; j <= reach; ++j) {
            const double u = static_cast<double>(j) * grid.spacing[a] / eta;
            const double b = 1.0 - u * u;
            const double v = b > 0.0 ? b * b * b * b : 0.0;
            w.push_back(v);
            wsum += v;
        }
        for (double& v : w) v /= wsum;
        const long len = grid.shape[a];
        const long long stride = static_cast<long long>(strides[a]);
        GridFunction next = cur;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const long ia = static_cast<long>((i / strides[a]) % static_cast<std::size_t>(len));
            const long long base = static_cast<long long>(i) - static_cast<long long>(ia) * stride;
            for (int c = 0; c < mc; ++c) {
                double acc = 0.0;
                for (long j = -reach; j <= reach; ++j) {
                    const long t = std::clamp(ia + j, 0L, len - 1);
                    acc += w[static_cast<std::size_t>(j + reach)] *
                           cur.values(static_cast<Eigen::Index>(base + t * stride), c);
                }
                next.values(static_cast<Eigen::Index>(i), c) = acc;
            }
        }
        cur = std::move(next);
    }
    return cur;
}

}  // namespace holder
