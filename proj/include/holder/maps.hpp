// SPDX-License-Identifier: MIT
//
// Lipschitz self-maps of R^n used to precompose grid functions.
#pragma once

#include "holder/grid.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace holder {

/// τ_M(x) = x for ‖x‖ < M, ((2M − ‖x‖)/M)² x for M ≤ ‖x‖ < 2M, 0 beyond.
struct TruncationMap {
    double M = 1.0;
    SourceNorm norm = SourceNorm::l2;
};

[[nodiscard]] Eigen::VectorXd truncation_apply(const TruncationMap& t, const Eigen::VectorXd& x);

/// φ_r(t): t + r for t ≤ −r, 0 on [−r, r], t − r for t ≥ r.
[[nodiscard]] inline double soft_threshold(double t, double r) {
    if (t >= r) return t - r;
    if (t <= -r) return t + r;
    return 0.0;
}

/// Φ_r(x) = (φ_r(x_α))_α.
[[nodiscard]] Eigen::VectorXd soft_threshold_apply(double r, const Eigen::VectorXd& x);

enum class MapKind { identity, affine, truncation, soft_threshold, uncertified };

/// A self-map of R^n together with what is known about its Lipschitz constant.
class LipschitzMap {
public:
    static LipschitzMap identity();
    static LipschitzMap affine(Eigen::MatrixXd A, Eigen::VectorXd b);
    static LipschitzMap truncation(TruncationMap t);
    static LipschitzMap soft_threshold(double r);
    /// Arbitrary map without a Lipschitz certificate; rejected by the precomposition check.
    static LipschitzMap uncertified(std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn, std::string name);

    [[nodiscard]] MapKind kind() const noexcept { return kind_; }
    [[nodiscard]] Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
    /// Certified Lipschitz constant in the given source norm. Throws ArgumentError when uncertified.
    [[nodiscard]] double lipschitz_constant(SourceNorm norm) const;
    [[nodiscard]] std::string describe() const;

private:
    MapKind kind_ = MapKind::identity;
    Eigen::MatrixXd A_;
    Eigen::VectorXd b_;
    TruncationMap trunc_;
    double r_ = 0.0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn_;
    std::string name_;
};

/// x ↦ f(τ(x)) by multilinear interpolation. Points whose image leaves the box are clipped to
/// the box when `clip` is set and raise DomainError otherwise; `clipped` counts them.
[[nodiscard]] GridFunction compose(const GridFunction& f, const LipschitzMap& tau, bool clip = false,
                                   std::size_t* clipped = nullptr);

}  // namespace holder
