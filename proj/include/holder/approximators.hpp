// SPDX-License-Identifier: MIT
//
// Constructive approximation operators: truncation τ_M, parameter selection,
// mollification, the truncate-then-mollify pipeline, Lipschitz envelopes,
// the uniform-plus-Lipschitz convergence check and bump multiplication.
#pragma once

#include "holder/grid.hpp"
#include "holder/maps.hpp"
#include "holder/modulus.hpp"
#include "holder/oscillation.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace holder {

// ---------------------------------------------------------------------------
// Truncation

struct ContractionClause {
    double R = 0.0;
    double bound = 0.0;      ///< 5R/√M
    double max_ratio = 0.0;  ///< max ‖τx − τz‖/‖x − z‖ over qualifying pairs
    std::size_t pairs = 0;
    std::string status;      ///< "pass", "fail" or "untested"
};

struct TruncationCertificate {
    double M = 0.0;
    SourceNorm norm = SourceNorm::l2;
    int dim = 2;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double max_ratio = 0.0;  ///< over all sampled pairs; must stay ≤ 5
    bool lipschitz_ok = false;
    std::vector<ContractionClause> contraction;
    bool passed = false;
};

/// True when (x, z) satisfies M > R ≥ 1, ‖x‖ ≥ M and τx, τz ∈ B(0, R).
[[nodiscard]] bool qualifies_contraction(const TruncationMap& t, double R, const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& z);

/// Seeded random certificate of the Lipschitz bound 5 and, for each R in `radii` (default:
/// powers of two in [1, M)), of the contraction bound 5R/√M on constructed qualifying pairs.
[[nodiscard]] TruncationCertificate truncation_certify(const TruncationMap& t, std::size_t samples,
                                                       std::uint64_t seed, std::vector<double> radii = {},
                                                       int dim = 2);

struct TruncationResult {
    GridFunction g;
    Eigen::VectorXd anchor;     ///< f(0); g − f(0) vanishes outside B(0, 2M)
    bool box_contains_ball = false;
    std::size_t clipped = 0;
    std::vector<std::string> warnings;
};

/// g(x) = f(τ_M(x)) by interpolation. Throws DomainError when the box does not contain 0.
[[nodiscard]] TruncationResult truncate_compose(const GridFunction& f, const TruncationMap& t);

// ---------------------------------------------------------------------------
// Parameter selection

struct ApproxPlan {
    double epsilon = 0.0;
    double r = 0.0;
    double R = 0.0;
    double M = 0.0;
    double mollifier_radius = 0.0;
    double doubling_constant = 0.0;
    double lip_factor = 0.0;         ///< C_db^{⌈log₂5⌉}
    double small_sup_at_5r = 0.0;    ///< S(5r), extended below the grid spacing
    double far_value_at_R = 0.0;     ///< min-mode far profile at the selected δ
    double far_delta = 0.0;          ///< δ before rounding R up to 1
    double local_lipschitz = 0.0;
    double slack_scale = 0.0;        ///< ε·ω(r) − ω(R·M^{-1/4})
    double slack_growth = 0.0;       ///< ε·ω(M^{1/4}) − ω(2R)
    ScaleProfile far_evidence;
};

/// r: largest h·2^k with C_db³·S(5r) ≤ ε; R: smallest far δ with min-mode value ≤ ε, at least 1;
/// M: least power of two ≥ 2R meeting M > R, ω(R·M^{-1/4}) ≤ ε·ω(r), ω(2R) ≤ ε·ω(M^{1/4}).
/// Below the grid spacing S(ρ) is extended by L·ρ/ω(ρ), L the nearest-neighbour slope.
/// Throws PlanError naming the failing clause ("eq:dens1", "eq:dencc", "eq:choiceofM").
[[nodiscard]] ApproxPlan select_parameters(const GridFunction& f, const Modulus& m, double epsilon);

// ---------------------------------------------------------------------------
// Mollification

enum class MollifierProfile { radial, tensor };

/// Weights (1 − (‖u‖/r)²)⁴ (radial, Euclidean ‖u‖) or ∏_k (1 − (u_k/r)²)⁴ (tensor), normalised
/// to sum to 1 over the stencil points inside the box.
struct MollifierSpec {
    double radius = 0.0;
    MollifierProfile profile = MollifierProfile::radial;
};

/// Throws ArgumentError when the radius is below the largest grid spacing.
[[nodiscard]] GridFunction mollify(const GridFunction& g, const MollifierSpec& spec);

struct PipelineResult {
    GridFunction h;
    ApproxPlan plan;
    double delta = 0.0;            ///< scale splitting the seminorm estimate
    double sup_error_g_h = 0.0;    ///< sup|g − h|
    double truncation_error = 0.0; ///< ‖f − g‖_{C^{0,ω}}
    double seminorm_error = 0.0;   ///< ‖f − h‖_{C^{0,ω}}
    double sup_error = 0.0;        ///< sup|f − h| after removing the mean offset at the origin
    double c_pipe = 0.0;
    bool within = false;           ///< seminorm_error ≤ c_pipe·ε
    std::vector<std::string> warnings;
};

/// h = mollify(f∘τ_M, η_ρ) with ρ the largest h_max·2^j keeping sup|g − h| ≤ ½ε·ω(δ).
[[nodiscard]] PipelineResult pipeline_vc_to_smooth(const GridFunction& f, const Modulus& m, double epsilon,
                                                   double c_pipe);

// ---------------------------------------------------------------------------
// Lipschitz envelope

struct EnvelopeParams {
    double n = 1.0;
    double localization_radius = std::numeric_limits<double>::infinity();
    double threshold = 0.0;      ///< 2·ω(1)·‖f‖_{C^{0,ω}}
    double omega_f_one = 0.0;    ///< minimal modulus ω_f(1) on the grid
    bool subadditive_ok = true;  ///< ω_f(t) ≤ 2t·ω_f(1) at every grid distance t ≥ 1
};

/// Sets localization_radius = 1 when n exceeds the threshold.
[[nodiscard]] EnvelopeParams envelope_params(const GridFunction& f, const Modulus& m, double n);

/// f_n(x) = min over grid y (within the localization radius) of f(y) + n‖x − y‖. Scalar f only.
[[nodiscard]] GridFunction lipschitz_envelope(const GridFunction& f, const EnvelopeParams& p);

// ---------------------------------------------------------------------------
// Uniform + Lipschitz convergence

struct ConvergenceRow {
    double sup_error = 0.0;
    double lipschitz = 0.0;
    double seminorm_error = 0.0;
    double bound = 0.0;  ///< min over δ of max((L_f + L_k)·δ/ω(δ), 2·sup_error/ω(δ⁺))
    bool bound_ok = false;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double target_lipschitz = 0.0;
    bool uniform = false;              ///< sup errors fall to at most half the first value (or vanish)
    bool lip_bounded = false;          ///< max_k L_k ≤ 2·max(L_1, L_f)
    bool hypothesis_holds = false;
    bool hypothesis_violated = false;
    bool converged = false;            ///< last seminorm error ≤ tolerance
    bool diverging = false;            ///< last seminorm error exceeds the first
    bool implication_failure = false;        ///< hypotheses hold but the seminorm error did not converge
};

[[nodiscard]] ConvergenceReport uniform_lip_convergence_check(const std::vector<GridFunction>& seq,
                                                              const GridFunction& f, const Modulus& m,
                                                              double tolerance = 1e-3);

// ---------------------------------------------------------------------------
// Bump multiplication

/// φ(x) = θ(‖x‖) with θ = 1 on [0, inner], 0 on [outer, ∞) and the C^∞ smoothstep between.
struct BumpSpec {
    double inner_radius = 1.0;
    double outer_radius = 2.0;
};

[[nodiscard]] double bump_theta(const BumpSpec& b, double t);
[[nodiscard]] double bump_value(const BumpSpec& b, const Eigen::VectorXd& x, SourceNorm norm);
/// Lipschitz constant of θ, certified on a dense sample of the transition (≈ 2/(outer − inner)).
[[nodiscard]] double bump_lipschitz(const BumpSpec& b);

struct BumpResult {
    GridFunction product;
    double bump_lipschitz = 0.0;
    double input_lipschitz = 0.0;   ///< grid Lipschitz constant of g
    double input_sup = 0.0;
    double product_lipschitz = 0.0;
    double bound = 0.0;             ///< input_lipschitz + bump_lipschitz·input_sup
    bool bound_ok = false;
};

[[nodiscard]] BumpResult bump_multiply(const GridFunction& g, const BumpSpec& b);

}  // namespace holder
