// SPDX-License-Identifier: MIT
//
// Sampled maps f: box ⊂ R^n → R^m on regular grids, with the target and
// source norms that enter every seminorm computation.
#pragma once

#include "holder/modulus.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace holder {

enum class TargetNorm { l2, linf, l1 };
enum class SourceNorm { l2, linf };

struct NormSpec {
    TargetNorm target = TargetNorm::l2;  ///< ‖·‖_Y on R^m
    SourceNorm source = SourceNorm::l2;  ///< ‖·‖_X on R^n
};

TargetNorm parse_target_norm(std::string_view name);
SourceNorm parse_source_norm(std::string_view name);
std::string to_string(TargetNorm n);
std::string to_string(SourceNorm n);

using Index = std::vector<long>;

/// Row-major regular grid: point(i) = origin + i ∘ spacing.
struct Grid {
    std::vector<double> origin;
    std::vector<double> spacing;
    std::vector<long> shape;

    Grid() = default;
    Grid(std::vector<double> origin, std::vector<double> spacing, std::vector<long> shape);

    /// Uniform grid on [lo, hi]^dim with `points` nodes per axis.
    static Grid uniform(int dim, double lo, double hi, long points);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(shape.size()); }
    [[nodiscard]] std::size_t size() const noexcept;
    [[nodiscard]] std::size_t linear(std::span<const long> idx) const;
    [[nodiscard]] Index multi(std::size_t linear) const;
    [[nodiscard]] std::vector<std::size_t> strides() const;
    [[nodiscard]] Eigen::VectorXd point(std::size_t linear) const;
    [[nodiscard]] double lower(int axis) const { return origin[axis]; }
    [[nodiscard]] double upper(int axis) const { return origin[axis] + static_cast<double>(shape[axis] - 1) * spacing[axis]; }
    [[nodiscard]] double width(int axis) const { return static_cast<double>(shape[axis] - 1) * spacing[axis]; }
    [[nodiscard]] double h_min() const;
    [[nodiscard]] double h_max() const;
    /// Distance between the extreme corners in the given source norm.
    [[nodiscard]] double diameter(SourceNorm norm) const;
    /// Diameter of one grid cell in the given source norm.
    [[nodiscard]] double cell_diameter(SourceNorm norm) const;
    [[nodiscard]] bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;

    bool operator==(const Grid&) const = default;
};

using Values = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// f sampled on a grid; row i of `values` is f(point(i)) ∈ R^m.
struct GridFunction {
    Grid grid;
    Values values;
    NormSpec norms;
    std::string label;

    GridFunction() = default;
    GridFunction(Grid g, Values v, NormSpec n = {}, std::string label = {});

    [[nodiscard]] int ycomp() const noexcept { return static_cast<int>(values.cols()); }
    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(values.rows()); }
    [[nodiscard]] const double* at(std::size_t linear) const { return values.data() + linear * values.cols(); }
};

/// ‖v‖_Y for an m-vector.
[[nodiscard]] double target_norm(TargetNorm kind, const double* v, int m);
/// ‖a − b‖_Y, accumulated in component order.
[[nodiscard]] double target_distance(TargetNorm kind, const double* a, const double* b, int m);
/// ‖x‖_X for an n-vector.
[[nodiscard]] double source_norm(SourceNorm kind, const double* x, int n);
/// ‖d ∘ spacing‖_X for an index offset d; l2 sums squares in axis order.
[[nodiscard]] double offset_distance(const Grid& g, SourceNorm kind, std::span<const long> d);
/// ‖point(i)‖_X.
[[nodiscard]] double point_norm(const Grid& g, SourceNorm kind, std::size_t linear);

/// Reads the `# key=value` CSV format. Throws ParseError naming the line.
[[nodiscard]] GridFunction load_grid_function(const std::filesystem::path& path);
void save_grid_function(const GridFunction& f, const std::filesystem::path& path);
[[nodiscard]] GridFunction parse_grid_function(std::istream& in);
void write_grid_function(const GridFunction& f, std::ostream& out);

/// Multilinear interpolation; coordinates within 1e-9 cells of a node snap to it.
/// Throws DomainError outside the closed box.
[[nodiscard]] Eigen::VectorXd eval_interp(const GridFunction& f, const Eigen::VectorXd& x);

/// ‖f(x_i) − f(x_j)‖_Y / ω(‖x_i − x_j‖_X) with the distance taken from i − j.
[[nodiscard]] double pair_oscillation(const GridFunction& f, const Modulus& m, std::span<const long> i,
                                      std::span<const long> j);
[[nodiscard]] double pair_oscillation(const GridFunction& f, const Modulus& m, std::size_t i, std::size_t j);

/// sup_x ‖f(x) − g(x)‖_Y over the grid; grids must match.
[[nodiscard]] double sup_distance(const GridFunction& f, const GridFunction& g);
/// sup_x ‖f(x)‖_Y.
[[nodiscard]] double sup_norm(const GridFunction& f);
/// f − g pointwise (same grid).
[[nodiscard]] GridFunction difference(const GridFunction& f, const GridFunction& g);

}  // namespace holder
