// SPDX-License-Identifier: MIT
#include "holder/maps.hpp"

#include "holder/errors.hpp"

#include <algorithm>
#include <cmath>

namespace holder {

Eigen::VectorXd truncation_apply(const TruncationMap& t, const Eigen::VectorXd& x) {
    if (!(t.M > 0.0) || !std::isfinite(t.M)) {
        throw ArgumentError("truncation radius M must be positive");
    }
    const double r = source_norm(t.norm, x.data(), static_cast<int>(x.size()));
    if (r < t.M) {
        return x;
    }
    if (r >= 2.0 * t.M) {
        return Eigen::VectorXd::Zero(x.size());
    }
    const double s = (2.0 * t.M - r) / t.M;
    return (s * s) * x;
}

Eigen::VectorXd soft_threshold_apply(double r, const Eigen::VectorXd& x) {
    Eigen::VectorXd y(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        y[k] = soft_threshold(x[k], r);
    }
    return y;
}

LipschitzMap LipschitzMap::identity() { return LipschitzMap(); }

LipschitzMap LipschitzMap::affine(Eigen::MatrixXd A, Eigen::VectorXd b) {
    if (A.rows() != A.cols() || A.rows() != b.size()) {
        throw ArgumentError("affine map needs a square matrix and a matching offset");
    }
    LipschitzMap m;
    m.kind_ = MapKind::affine;
    m.A_ = std::move(A);
    m.b_ = std::move(b);
    return m;
}

LipschitzMap LipschitzMap::truncation(TruncationMap t) {
    if (!(t.M > 0.0)) {
        throw ArgumentError("truncation radius M must be positive");
    }
    LipschitzMap m;
    m.kind_ = MapKind::truncation;
    m.trunc_ = t;
    return m;
}

LipschitzMap LipschitzMap::soft_threshold(double r) {
    if (!(r >= 0.0)) {
        throw ArgumentError("soft-threshold radius must be nonnegative");
    }
    LipschitzMap m;
    m.kind_ = MapKind::soft_threshold;
    m.r_ = r;
    return m;
}

LipschitzMap LipschitzMap::uncertified(std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn, std::string name) {
    LipschitzMap m;
    m.kind_ = MapKind::uncertified;
    m.fn_ = std::move(fn);
    m.name_ = std::move(name);
    return m;
}

Eigen::VectorXd LipschitzMap::operator()(const Eigen::VectorXd& x) const {
    switch (kind_) {
        case MapKind::identity: return x;
        case MapKind::affine:
            if (x.size() != b_.size()) {
                throw ArgumentError("affine map applied to a point of the wrong dimension");
            }
            return A_ * x + b_;
        case MapKind::truncation: return truncation_apply(trunc_, x);
        case MapKind::soft_threshold: return soft_threshold_apply(r_, x);
        case MapKind::uncertified: return fn_(x);
    }
    return x;
}

double LipschitzMap::lipschitz_constant(SourceNorm norm) const {
    switch (kind_) {
        case MapKind::identity: return 1.0;
        case MapKind::affine:
            if (norm == SourceNorm::l2) {
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(A_);
                return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
            }
            return A_.cwiseAbs().rowwise().sum().maxCoeff();
        case MapKind::truncation: return 5.0;
        case MapKind::soft_threshold: return 1.0;
        case MapKind::uncertified: break;
    }
    throw ArgumentError("map '" + name_ + "' carries no Lipschitz certificate");
}

std::string LipschitzMap::describe() const {
    switch (kind_) {
        case MapKind::identity: return "identity";
        case MapKind::affine: return "affine";
        case MapKind::truncation: return "truncation";
        case MapKind::soft_threshold: return "soft_threshold";
        case MapKind::uncertified: return "uncertified:" + name_;
    }
    return "?";
}

GridFunction compose(const GridFunction& f, const LipschitzMap& tau, bool clip, std::size_t* clipped) {
    const Grid& g = f.grid;
    GridFunction out = f;
    std::size_t count = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        Eigen::VectorXd y = tau(g.point(i));
        if (!g.contains(y)) {
            if (!clip) {
                throw DomainError("composed map leaves the grid box");
            }
            for (int k = 0; k < g.dim(); ++k) {
                y[k] = std::clamp(y[k], g.lower(k), g.upper(k));
            }
            ++count;
        }
        out.values.row(static_cast<Eigen::Index>(i)) = eval_interp(f, y).transpose();
    }
    if (clipped) {
        *clipped = count;
    }
    return out;
}

}  // namespace holder
