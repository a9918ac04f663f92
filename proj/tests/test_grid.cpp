// SPDX-License-Identifier: MIT
#include "doctest.h"
#include "oracles.hpp"

#include "holder/errors.hpp"
#include "holder/grid.hpp"
#include "holder/maps.hpp"

#include <filesystem>
#include <sstream>

using namespace holder;

namespace {

GridFunction line(double lo, double hi, long n) {
    const Grid g = Grid::uniform(1, lo, hi, n);
    Values v(n, 1);
    for (long i = 0; i < n; ++i) v(i, 0) = g.point(i)[0];
    return GridFunction(g, v);
}

GridFunction parse(const std::string& text) {
    std::istringstream in(text);
    return parse_grid_function(in);
}

}  // namespace

TEST_CASE("grid geometry") {
    const Grid g({-1.0, 0.0}, {0.5, 0.25}, {5, 3});
    CHECK(g.size() == 15);
    CHECK(g.upper(0) == 1.0);
    CHECK(g.upper(1) == 0.5);
    CHECK(g.h_min() == 0.25);
    CHECK(g.h_max() == 0.5);
    CHECK(g.multi(7) == Index{2, 1});
    CHECK(g.linear(Index{2, 1}) == 7);
    CHECK(g.point(7)[0] == 0.0);
    CHECK(g.point(7)[1] == 0.25);
    CHECK(g.diameter(SourceNorm::linf) == 2.0);
    CHECK(g.diameter(SourceNorm::l2) == doctest::Approx(std::sqrt(4.25)));
    CHECK_THROWS_AS(Grid({0.0}, {-1.0}, {3}), ArgumentError);
    CHECK_THROWS_AS(Grid({0.0}, {1.0}, {0}), ArgumentError);
}

TEST_CASE("CSV parsing") {
    const GridFunction f = parse("# dim=1\n# shape=3\n# origin=0\n# spacing=0.5\n# ycomp=1\n1\n2\n4\n");
    CHECK(f.grid.shape == std::vector<long>{3});
    CHECK(f.values(2, 0) == 4.0);

    try {
        (void)parse("# dim=1\n# shape=3\n# origin=0\n# spacing=0.5\n# ycomp=1\n1\nnan\n4\n");
        FAIL("NaN accepted");
    } catch (const ParseError& e) {
        CHECK(e.line() == 7);
    }
    CHECK_THROWS_AS(parse("# dim=1\n# shape=3\n# origin=0\n# spacing=0.5\n# ycomp=1\n1\n2\n"), ParseError);
    CHECK_THROWS_AS(parse("# dim=1\n# shape=2\n# origin=0\n# spacing=0.5\n# ycomp=1\n1\n2\n3\n"), ParseError);
    CHECK_THROWS_AS(parse("# dim=1\n# shape=2\n# origin=0\n# spacing=0.5\n# ycomp=2\n1\n2\n"), ParseError);
    CHECK_THROWS_AS(parse("# dim=1\n# shape=2\n# origin=0\n# spacing=0.5\n# colour=red\n1\n2\n"), ParseError);
    CHECK_THROWS_AS(parse("# dim=1\n# shape=2\n# origin=0\n# origin=1\n# spacing=0.5\n1\n2\n"), ParseError);
    CHECK_THROWS_AS(parse("# dim=x\n"), ParseError);
}

TEST_CASE("save and load round trip") {
    const GridFunction f = oracle::random_function(5, 2);
    const auto path = std::filesystem::temp_directory_path() / "holder_roundtrip.csv";
    save_grid_function(f, path);
    const GridFunction g = load_grid_function(path);
    std::filesystem::remove(path);
    CHECK(g.grid == f.grid);
    CHECK(g.values == f.values);
}

TEST_CASE("multilinear interpolation") {
    const GridFunction f = line(0.0, 1.0, 5);
    CHECK(eval_interp(f, Eigen::VectorXd::Constant(1, 0.5))[0] == 0.5);
    CHECK(eval_interp(f, Eigen::VectorXd::Constant(1, 0.375))[0] == 0.375);
    CHECK_THROWS_AS((void)eval_interp(f, Eigen::VectorXd::Constant(1, 1.5)), DomainError);

    // f(x, y) = xy on the unit square corners; bilinear value at (1/4, 3/4) is 3/16
    const Grid g({0.0, 0.0}, {1.0, 1.0}, {2, 2});
    Values v(4, 1);
    v << 0, 0, 0, 1;
    const GridFunction b(g, v);
    CHECK(eval_interp(b, Eigen::Vector2d(0.25, 0.75))[0] == doctest::Approx(0.1875).epsilon(1e-15));
    CHECK(eval_interp(b, Eigen::Vector2d(1.0, 1.0))[0] == 1.0);

    const GridFunction r = oracle::random_function(8, 3);
    for (std::size_t i = 0; i < r.size(); i += 7) {
        CHECK((eval_interp(r, r.grid.point(i)) - r.values.row(i).transpose()).norm() == 0.0);
    }
}

TEST_CASE("pair oscillation") {
    const GridFunction f = line(0.0, 1.0, 5);
    const Modulus m = Modulus::power(0.5);
    CHECK(pair_oscillation(f, m, 0, 1) == 0.5);
    CHECK_THROWS_AS((void)pair_oscillation(f, m, 2, 2), ArgumentError);

    const GridFunction r = oracle::random_function(3, 1);
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j)
            if (i != j) CHECK(pair_oscillation(r, m, i, j) == oracle::quotient(r, m, i, j));
}

TEST_CASE("norms") {
    const double v[3] = {3.0, -4.0, 1.0};
    CHECK(target_norm(TargetNorm::linf, v, 3) == 4.0);
    CHECK(target_norm(TargetNorm::l1, v, 3) == 8.0);
    CHECK(target_norm(TargetNorm::l2, v, 2) == 5.0);
    CHECK(parse_target_norm("l1") == TargetNorm::l1);
    CHECK(parse_source_norm("linf") == SourceNorm::linf);
    CHECK_THROWS_AS(parse_source_norm("l1"), ArgumentError);
}

TEST_CASE("truncation map") {
    const TruncationMap t{1.0, SourceNorm::l2};
    CHECK(truncation_apply(t, Eigen::Vector2d(0.3, 0.4)) == Eigen::Vector2d(0.3, 0.4));
    CHECK(truncation_apply(t, Eigen::Vector2d(3.0, 0.0)) == Eigen::Vector2d(0.0, 0.0));
    CHECK(truncation_apply(t, Eigen::Vector2d(1.5, 0.0)) == Eigen::Vector2d(0.375, 0.0));
}

TEST_CASE("Lipschitz maps and composition") {
    CHECK(LipschitzMap::identity().lipschitz_constant(SourceNorm::l2) == 1.0);
    CHECK(LipschitzMap::truncation({2.0, SourceNorm::l2}).lipschitz_constant(SourceNorm::l2) == 5.0);
    Eigen::Matrix2d A;
    A << 0.5, 0, 0, 0.5;
    CHECK(LipschitzMap::affine(A, Eigen::Vector2d::Zero()).lipschitz_constant(SourceNorm::linf) == 0.5);
    const auto u = LipschitzMap::uncertified([](const Eigen::VectorXd& x) { return x; }, "copy");
    CHECK_THROWS_AS((void)u.lipschitz_constant(SourceNorm::l2), ArgumentError);

    const GridFunction f = line(-1.0, 1.0, 9);
    const GridFunction g = compose(f, LipschitzMap::soft_threshold(0.25));
    CHECK(g.values(0, 0) == -0.75);
    CHECK(g.values(4, 0) == 0.0);
    CHECK(g.values(3, 0) == 0.0);
    CHECK(g.values(8, 0) == 0.75);
    Eigen::MatrixXd B = Eigen::MatrixXd::Constant(1, 1, 2.0);
    CHECK_THROWS_AS((void)compose(f, LipschitzMap::affine(B, Eigen::VectorXd::Zero(1))), DomainError);
    std::size_t clipped = 0;
    (void)compose(f, LipschitzMap::affine(B, Eigen::VectorXd::Zero(1)), true, &clipped);
    CHECK(clipped == 4);
}

TEST_CASE("sup distance and difference") {
    const GridFunction f = line(0.0, 1.0, 5);
    GridFunction g = f;
    g.values(2, 0) += 0.5;
    CHECK(sup_distance(f, g) == 0.5);
    CHECK(sup_norm(difference(g, f)) == 0.5);
    CHECK(sup_norm(f) == 1.0);
}
