// SPDX-License-Identifier: MIT
//
// Sup-norm constructions on R^n viewed as c₀ over a finite index set:
// coordinatewise soft threshold, finite-coordinate locality and tensor mollification.
#pragma once

#include "holder/grid.hpp"
#include "holder/modulus.hpp"

#include <vector>

namespace holder {

/// Zero-based axis indices.
using CoordinateSet = std::vector<int>;

/// g = f∘Φ with Φ(x)_α = φ_r(x_α). Requires the linf source norm (UnsupportedError otherwise).
[[nodiscard]] GridFunction soft_threshold_map(const GridFunction& f, double r);

struct LocalityRow {
    std::size_t center = 0;
    Eigen::VectorXd point;
    CoordinateSet axes;         ///< S_x = {α : |x_α| > r/2}
    std::size_t checked = 0;    ///< grid points z with ‖z − x‖_∞ ≤ r/2
    double max_deviation = 0.0; ///< max ‖g(z) − g(P_S z)‖
    bool ok = false;
};

struct LocalityReport {
    double r = 0.0;
    double tolerance = 1e-10;
    std::vector<LocalityRow> rows;
    bool passed = false;
};

/// Checks g(z) = g(P_{S_x} z) near each center; g(P_S z) is read by interpolation.
[[nodiscard]] LocalityReport local_coordinate_dependence_check(const GridFunction& g, double r,
                                                               const std::vector<std::size_t>& centers);

/// Separable convolution along `axes` with the normalised 1-D weights (1 − (t/η)²)⁴ on (−η, η).
/// Values beyond the box are taken from the nearest face (coordinatewise clamping).
/// Throws ArgumentError when η is below the spacing of a selected axis or an axis is out of range.
[[nodiscard]] GridFunction tensor_mollify(const GridFunction& g, double eta, const CoordinateSet& axes);

}  // namespace holder
