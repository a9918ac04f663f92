// SPDX-License-Identifier: MIT
//
// Moduli of continuity and the numerical certificates the approximation
// results depend on: doubling constant, Dini constant, and the limit
// behaviour at 0 and infinity.
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace holder {

enum class ModulusKind { power, log_type, tabulated };

/// What a tabulated modulus does outside its knot range.
enum class Extrapolation {
    none,   ///< range error outside [t_first, t_last]
    power,  ///< continue with the log-log slope of the end segment
};

/// A non-decreasing modulus of continuity ω on [0, ∞) with ω(0) = 0.
///
/// Three families are supported:
///  - power:     ω(t) = t^α, α ∈ (0, 1]
///  - log-type:  ω(t) = c·log(1/t)^(-p) for t ≤ 1/e, continued by its tangent
///               line c·(1 + p·e·(t − 1/e)) beyond 1/e
///  - tabulated: knots (t_i, ω_i) with ω linear in log t between knots
class Modulus {
public:
    static Modulus power(double alpha);
    static Modulus log_type(double c = 1.0, double p = 1.0);
    static Modulus tabulated(std::vector<std::pair<double, double>> knots,
                             Extrapolation policy = Extrapolation::power);

    /// ω(t). Throws DomainError for t < 0 and RangeError for a strict table queried out of range.
    [[nodiscard]] double operator()(double t) const;

    [[nodiscard]] ModulusKind kind() const noexcept;
    /// Exponent of a power modulus; 0 for the other kinds.
    [[nodiscard]] double alpha() const noexcept;
    [[nodiscard]] const std::vector<std::pair<double, double>>& knots() const;
    /// Canonical literal, e.g. "power:0.5" or "log:c=1,p=1". Tables render as "table:<n knots>".
    [[nodiscard]] std::string describe() const;

private:
    struct Power {
        double alpha;
    };
    struct LogType {
        double c;
        double p;
    };
    struct Table {
        std::vector<std::pair<double, double>> knots;
        Extrapolation policy;
        double slope_low;
        double slope_high;
    };

    explicit Modulus(std::variant<Power, LogType, Table> rep) : rep_(std::move(rep)) {}

    std::variant<Power, LogType, Table> rep_;
};

[[nodiscard]] inline double eval_modulus(const Modulus& m, double t) { return m(t); }

/// max over t in `t_grid` of ω(2t)/ω(t).
[[nodiscard]] double doubling_constant(const Modulus& m, std::span<const double> t_grid);

/// sup over s in `s_grid` of (1/ω(s)) ∫₀^s ω(t) dt/t.
///
/// The integral is taken in u = log(s/t) on dyadic panels [0,1], [1,2], ..., [256,512]
/// with `quadrature_points` Gauss-Legendre nodes per panel (table knots are added as
/// panel breaks). If the last panel still carries more than 1e-3 of the total the
/// integral is treated as divergent and +infinity is returned.
[[nodiscard]] double dini_constant(const Modulus& m, std::span<const double> s_grid,
                                   int quadrature_points = 32);

/// One limit probe of `check_admissible`.
struct ProbeRecord {
    std::string condition;
    double t_near = 0.0;   ///< probe point at depth/2
    double value_near = 0.0;
    double t_far = 0.0;    ///< probe point at full depth
    double value_far = 0.0;
    bool passed = false;

    bool operator==(const ProbeRecord&) const = default;
};

struct ModulusCertificate {
    double doubling_constant = 0.0;
    double dini_constant = 0.0;  ///< +infinity when the Dini integral diverges
    bool doubling = false;
    bool coercive_zero = false;   ///< ω(t) → 0 as t → 0
    bool coercive_infty = false;  ///< ω(t) → ∞ as t → ∞
    bool sublinear_zero = false;  ///< t/ω(t) → 0 as t → 0
    double t_min = 0.0;
    double t_max = 0.0;
    std::vector<ProbeRecord> probes;

    bool operator==(const ModulusCertificate&) const = default;
};

struct ProbeConfig {
    int depth = 40;  ///< probes at 2^{±k}, k = 0..depth
    int quadrature_points = 32;
};

/// Numerical check of the standing assumptions on ω. Limit probes compare the
/// dyadic sequences at k = depth/2 and k = depth; a limit counts as established
/// when the sequence moved by at least a factor 3/4 (or 4/3) between them.
[[nodiscard]] ModulusCertificate check_admissible(const Modulus& m, const ProbeConfig& config = {});

/// Parses `power:0.5`, `log:c=1`, `log:c=1,p=2`, `table:path.csv` (power extrapolation)
/// or `table-strict:path.csv` (no extrapolation).
[[nodiscard]] Modulus parse_modulus(std::string_view literal);

/// Reads a `t,omega` CSV table.
[[nodiscard]] Modulus load_modulus_table(const std::filesystem::path& path,
                                         Extrapolation policy = Extrapolation::power);

/// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
[[nodiscard]] std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int points);

}  // namespace holder
