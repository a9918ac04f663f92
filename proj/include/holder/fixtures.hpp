// SPDX-License-Identifier: MIT
//
// Deterministic fixture families on regular grids.
#pragma once

#include "holder/grid.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace holder {

/// family[:key=value,...]. Grid keys: dim, lo, hi, h (h also accepts p/q).
/// Families and their parameters (defaults in parentheses):
///   tent        width (1)          max(0, 1 − ‖x‖/width)             [−8, 8],  h = 1/64
///   root_tent   width (4)          ‖x‖^{1/2}·max(0, 1 − ‖x‖/width)   [−8, 8],  h = 1/64
///   appendix_a2 n (1), alpha (0.5) x/n on [0, n], (2n − x)/n on [n, 2n] [0, 2n], h = 1/64, 1-D
///   appendix_a3 n (4)              n^{-1/2}·max(0, 1 − n|x|)         [−1, 1],  h = 1/(4n), 1-D
///   affine      slope (1)          slope·Σ x_k                       [−8, 8],  h = 1/16
///   sin_decay   freq (1)           sin(freq·x₁)/(1 + ‖x‖)            [−20, 20], h = 1/16
///   random_smooth seed (1), smoothness (2), terms (8)
///                                  Σ_j a_j sin(⟨k_j, x⟩ + φ_j)       [−2, 2],  h = 1/64
///   constant    value (1)                                            [−8, 8],  h = 1/16
/// Norms inside the closed forms are Euclidean.
struct FixtureSpec {
    std::string family;
    std::map<std::string, double> params;
    int dim = 1;
    double lo = 0.0;
    double hi = 0.0;
    double h = 0.0;

    [[nodiscard]] std::string describe() const;
};

/// Throws ArgumentError for unknown families or keys and invalid values.
[[nodiscard]] FixtureSpec parse_fixture_spec(const std::string& text);
[[nodiscard]] std::vector<std::string> fixture_families();

/// Grid with `round((hi − lo)/h) + 1` nodes per axis starting at lo with spacing h.
[[nodiscard]] Grid fixture_grid(const FixtureSpec& spec);
[[nodiscard]] GridFunction make_fixture(const FixtureSpec& spec, NormSpec norms = {});

}  // namespace holder
