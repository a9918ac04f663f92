// SPDX-License-Identifier: MIT
//
// Hölder seminorms, per-scale oscillation profiles and the vanishing
// classification (small, large and far scales) on grids.
#pragma once

#include "holder/grid.hpp"
#include "holder/maps.hpp"
#include "holder/modulus.hpp"

#include <cstdint>
#include <vector>

namespace holder {

/// Pair scans beyond this many pairs are subsampled.
inline constexpr std::uint64_t kPairCap = 400'000'000;

/// Per index offset d (lexicographically positive): the distance ‖d ∘ h‖, the largest
/// increment ‖f(x_{i+d}) − f(x_i)‖ and the number of pairs realising d.
struct OffsetTable {
    std::vector<Index> offsets;
    std::vector<double> distance;
    std::vector<double> max_increment;
    std::vector<std::uint64_t> pairs;
    std::uint64_t total_pairs = 0;
    std::uint64_t scanned_pairs = 0;
    bool sampled = false;  ///< true when the scan was subsampled (results are lower bounds)
};

[[nodiscard]] OffsetTable build_offset_table(const GridFunction& f, std::uint64_t pair_cap = kPairCap);

/// Exact sup of pair_oscillation over distinct grid pairs (a lower bound when sampled).
[[nodiscard]] double holder_seminorm(const GridFunction& f, const Modulus& m);
[[nodiscard]] double holder_seminorm(const OffsetTable& table, const Modulus& m);

/// Largest increment-to-distance ratio over grid pairs.
[[nodiscard]] double grid_lipschitz(const GridFunction& f);
[[nodiscard]] double grid_lipschitz(const OffsetTable& table);

/// S(ρ) = sup of pair_oscillation over grid pairs at distance ≤ ρ (0 when there are none).
class SmallScaleSup {
public:
    SmallScaleSup(const OffsetTable& table, const Modulus& m);
    [[nodiscard]] double operator()(double rho) const;
    [[nodiscard]] double finest_distance() const { return dist_.empty() ? 0.0 : dist_.front(); }

private:
    std::vector<double> dist_;
    std::vector<double> prefix_max_;
};

struct ScaleProfile {
    std::vector<double> scales;
    std::vector<double> values;
    std::vector<std::uint64_t> pair_counts;
    double band_width = 0.0;
    bool sampled = false;

    [[nodiscard]] bool empty() const noexcept { return scales.empty(); }
};

/// Suprema over pairs with ‖x − y‖ ∈ [δ(1 − η), δ(1 + η)]; scales without pairs are omitted.
[[nodiscard]] ScaleProfile scale_profile(const GridFunction& f, const Modulus& m, std::vector<double> scales,
                                         double band = 0.25);
[[nodiscard]] ScaleProfile scale_profile(const OffsetTable& table, const Modulus& m, std::vector<double> scales,
                                         double band = 0.25);

enum class FarMode { min, max };

/// For each δ, sup of pair_oscillation over pairs with min (or max) of ‖x‖, ‖y‖ above δ.
[[nodiscard]] ScaleProfile far_profile(const GridFunction& f, const Modulus& m, std::vector<double> deltas,
                                       FarMode mode = FarMode::min, std::uint64_t pair_cap = kPairCap);

/// h_min·2^k, k ≥ 0, up to the grid diameter.
[[nodiscard]] std::vector<double> default_scales(const Grid& g, SourceNorm norm);
/// h_min·2^k, k ≥ 0, strictly below the largest point norm.
[[nodiscard]] std::vector<double> default_far_deltas(const Grid& g, SourceNorm norm);

struct Thresholds {
    double small = 0.1;
    double large = 0.1;
    double far = 0.1;
};

struct ClassifyOptions {
    std::vector<double> scales;  ///< empty: default_scales
    std::vector<double> deltas;  ///< empty: default_far_deltas
    double band = 0.25;
};

struct VanishingVerdict {
    bool small = false;
    bool large = false;
    bool far = false;
    Thresholds thresholds;
    ScaleProfile profile;
    ScaleProfile far_evidence;
    double seminorm = 0.0;
    bool sampled = false;
};

/// small: profile at the finest reported scale ≤ ε_small; large: at the coarsest ≤ ε_large;
/// far: min-mode far profile at the largest reported δ ≤ ε_far (false when no δ has pairs).
[[nodiscard]] VanishingVerdict classify_vanishing(const GridFunction& f, const Modulus& m, const Thresholds& eps,
                                                  const ClassifyOptions& options = {});

struct PrecomposeRow {
    double scale = 0.0;
    double lhs = 0.0;          ///< profile of f∘τ at the scale
    double reach = 0.0;        ///< ρ = Lip(τ)·δ(1 + η) + 2·cell diameter
    double small_sup = 0.0;    ///< S_f(ρ)
    double factor = 0.0;       ///< C_db^k with ω(ρ) ≤ C_db^k ω(δ(1 − η))
    double rhs = 0.0;
    bool ok = false;
};

struct PrecomposeReport {
    std::string map;
    double lipschitz = 0.0;
    double doubling_constant = 0.0;
    std::vector<PrecomposeRow> rows;
    bool passed = false;
};

/// Checks profile(f∘τ, δ) ≤ C·S_f(Lip(τ)·δ(1+η) + 2·cell) over the given scales, where the
/// doubling factor C comes from the modulus certificate. Uncertified maps raise ArgumentError.
[[nodiscard]] PrecomposeReport lip_precompose_check(const GridFunction& f, const LipschitzMap& tau, const Modulus& m,
                                                    std::vector<double> scales = {}, double band = 0.25);

}  // namespace holder
