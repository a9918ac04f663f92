// SPDX-License-Identifier: MIT
//
// Dyadic cube statistics: averages and modulus-weighted mean oscillation,
// BMO/VMO functionals, and the grid-scale Meyers comparison.
#pragma once

#include "holder/grid.hpp"
#include "holder/modulus.hpp"
#include "holder/oscillation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace holder {

/// One level of the dyadic tree. Cubes are stored densely, row-major over `cells`.
struct CubeLevel {
    int level = 0;
    double sidelength = 0.0;
    std::vector<long> cells;                  ///< cubes per axis
    std::vector<std::size_t> count;           ///< grid points per cube
    Values average;                           ///< ⟨f⟩_Q, one row per cube
    std::vector<double> mean_deviation;       ///< ⨍_Q ‖f − ⟨f⟩_Q‖
    std::vector<double> mean_osc;             ///< mean_deviation / ω(ℓ(Q))
    std::vector<std::vector<long>> axis_first;  ///< per axis and cell: first grid index inside
    std::vector<std::vector<long>> axis_count;  ///< per axis and cell: grid indices inside

    [[nodiscard]] std::size_t size() const noexcept { return count.size(); }
    [[nodiscard]] Index anchor(std::size_t cube) const;
};

/// Cubes are anchored at the grid origin with base sidelength equal to the largest axis width;
/// ℓ_k = base·2^{-k}. Along each axis a grid coordinate u = i·h belongs to cell
/// min(floor(2^k (u/base + 1e-12)), cells_k − 1), so cells are half-open except that the
/// upper box face joins the last cell.
struct CubeStats {
    Grid grid;
    NormSpec norms;
    int min_level = 0;
    int max_level = 0;
    double base = 0.0;
    std::vector<CubeLevel> levels;  ///< levels[k − min_level]
    std::vector<std::vector<std::vector<long>>> axis_cell;  ///< [level − min][axis][grid index]
    std::vector<std::string> log;

    [[nodiscard]] const CubeLevel& at(int level) const { return levels.at(static_cast<std::size_t>(level - min_level)); }
    /// Linear index of the level-k cube containing grid point `point`.
    [[nodiscard]] std::size_t cube_of(int level, std::size_t point) const;
};

/// Deepest level whose sidelength is at least twice every grid spacing.
[[nodiscard]] int default_max_level(const Grid& g);

[[nodiscard]] CubeStats build_cube_stats(const GridFunction& f, const Modulus& m, int min_level, int max_level);
[[nodiscard]] CubeStats build_cube_stats(const GridFunction& f, const Modulus& m);

/// max over nonempty cubes of 𝒪^ω(f; Q).
[[nodiscard]] double bmo_norm(const CubeStats& stats);

struct VmoProfiles {
    ScaleProfile small;  ///< per-level max keyed by sidelength, ascending
    ScaleProfile large;  ///< same data; the large-scale verdict reads the coarsest entry
    ScaleProfile far;    ///< per δ, max over cubes with dist(Q, 0) > δ
};

/// dist(Q, 0) uses the cube's closed hull in the source norm.
[[nodiscard]] VmoProfiles vmo_profiles(const CubeStats& stats, std::vector<double> deltas = {});

/// max over nonempty cubes of (discrete ⨍_Q⨍_Q ω(‖x − y‖)) / ω(ℓ(Q)).
[[nodiscard]] double averaged_modulus_ratio(const CubeStats& stats, const Modulus& m);

struct MeyersCeilings {
    double ratio_1 = 0.0;
    double ratio_2 = 0.0;
    double averaged_modulus = 0.0;
};

struct MeyersComparison {
    double seminorm = 0.0;
    double bmo = 0.0;
    double dini = 0.0;
    double averaged_modulus = 0.0;
    bool degenerate = false;  ///< zero seminorm: both ratios are 0/0
    double ratio_1 = 0.0;     ///< bmo / seminorm
    double ratio_2 = 0.0;     ///< seminorm / (dini · bmo)
    std::optional<MeyersCeilings> ceilings;
    bool within = true;       ///< all quantities below the ceilings (true when no ceilings given)
};

/// Both sides of the Meyers equivalence on the default cube tree. Requires a finite Dini constant.
[[nodiscard]] MeyersComparison meyers_compare(const GridFunction& f, const Modulus& m, const ModulusCertificate& cert,
                                              std::optional<MeyersCeilings> ceilings = std::nullopt);

struct TelescopeRecord {
    int top_level = 0;
    double top_sidelength = 0.0;
    double distance = 0.0;
    bool tight = false;  ///< ℓ(Q₀) ≤ 2‖x − y‖
    std::vector<double> increments_x;  ///< ‖⟨f⟩_{Q_{k+1}(x)} − ⟨f⟩_{Q_k(x)}‖
    std::vector<double> increments_y;
    std::vector<double> bounds_x;      ///< count(Q_k)/count(Q_{k+1}) · 𝒪^ω(f; Q_k) · ω(ℓ(Q_k))
    std::vector<double> bounds_y;
    Eigen::VectorXd sum_x;
    Eigen::VectorXd sum_y;
    Eigen::VectorXd boundary_x;  ///< f(x) − ⟨f⟩_{Q_max(x)}
    Eigen::VectorXd boundary_y;
    double residual = 0.0;       ///< ‖f(x) − f(y) − (sum_x − sum_y + boundary_x − boundary_y)‖
    bool identity_ok = false;    ///< residual < 1e-10
    bool bound_ok = false;
};

/// Telescopes f(x) − f(y) through the averages of the nested cubes below the smallest common
/// ancestor Q₀. Throws ArgumentError when x and y share no cube in the tree.
[[nodiscard]] TelescopeRecord dyadic_chain_reconstruct(const CubeStats& stats, const GridFunction& f,
                                                       std::size_t x, std::size_t y);

}  // namespace holder
