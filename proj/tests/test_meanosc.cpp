// SPDX-License-Identifier: MIT
#include "doctest.h"
#include "oracles.hpp"

#include "holder/errors.hpp"
#include "holder/fixtures.hpp"
#include "holder/meanosc.hpp"

#include <cmath>

using namespace holder;

namespace {

GridFunction line01(long n) {
    const Grid g = Grid::uniform(1, 0, 1, n);
    Values v(n, 1);
    for (long i = 0; i < n; ++i) v(i, 0) = g.point(i)[0];
    return GridFunction(g, v);
}

GridFunction constant(const Grid& g, double c) {
    return GridFunction(g, Values::Constant(static_cast<Eigen::Index>(g.size()), 1, c));
}

}  // namespace

TEST_CASE("cube statistics equal the membership oracle bit for bit") {
    const Modulus m = Modulus::power(0.5);
    for (std::uint64_t seed = 91; seed <= 120; ++seed) {
        const GridFunction f = oracle::random_function(seed);
        CAPTURE(seed);
        if (default_max_level(f.grid) < 0) continue;
        const CubeStats st = build_cube_stats(f, m);
        for (int level = st.min_level; level <= st.max_level; ++level) {
            const CubeLevel& lv = st.at(level);
            const auto cubes = oracle::cubes_at(f, level);
            REQUIRE(cubes.size() == lv.size());
            for (std::size_t q = 0; q < cubes.size(); ++q) {
                CHECK(lv.anchor(q) == cubes[q].anchor);
                CHECK(lv.count[q] == cubes[q].count);
                if (cubes[q].count == 0) continue;
                for (int c = 0; c < f.ycomp(); ++c) CHECK(lv.average(q, c) == cubes[q].average[c]);
                CHECK(lv.mean_deviation[q] == cubes[q].mean_deviation);
                CHECK(lv.mean_osc[q] == cubes[q].mean_deviation / m(lv.sidelength));
            }
        }
    }
}

TEST_CASE("parent averages re-aggregate from children") {
    const GridFunction f = oracle::random_function(4, 2);
    const CubeStats st = build_cube_stats(f, Modulus::power(0.5));
    for (int level = st.min_level; level < st.max_level; ++level) {
        const CubeLevel& parent = st.at(level);
        const CubeLevel& child = st.at(level + 1);
        std::vector<double> sum(parent.size(), 0.0);
        std::vector<std::size_t> count(parent.size(), 0);
        for (std::size_t p = 0; p < f.size(); ++p) {
            const std::size_t c = st.cube_of(level + 1, p);
            const std::size_t q = st.cube_of(level, p);
            // children nest inside one parent
            for (std::size_t p2 = 0; p2 < f.size(); ++p2)
                if (st.cube_of(level + 1, p2) == c) CHECK(st.cube_of(level, p2) == q);
            (void)child;
            sum[q] += f.values(p, 0);
            ++count[q];
        }
        for (std::size_t q = 0; q < parent.size(); ++q) {
            if (count[q] == 0) continue;
            CHECK(parent.count[q] == count[q]);
            CHECK(parent.average(q, 0) == doctest::Approx(sum[q] / count[q]).epsilon(1e-12));
        }
    }
}

TEST_CASE("bmo norm") {
    const Modulus m = Modulus::power(0.5);
    CHECK(bmo_norm(build_cube_stats(constant(Grid::uniform(2, -1, 1, 17), 3.0), m)) == 0.0);

    const GridFunction a2 = make_fixture(parse_fixture_spec("appendix_a2:n=1"));
    const CubeStats st = build_cube_stats(a2, m, 0, 4);
    double brute = 0.0;
    for (int level = 0; level <= 4; ++level)
        for (const auto& c : oracle::cubes_at(a2, level))
            if (c.count > 0) brute = std::max(brute, c.mean_deviation / m(std::ldexp(2.0, -level)));
    CHECK(bmo_norm(st) == brute);

    const GridFunction f = oracle::random_function(9, 1);
    GridFunction f2 = f, f3 = f;
    f2.values *= 2.0;
    f3.values *= 3.0;
    const double b = bmo_norm(build_cube_stats(f, m));
    CHECK(bmo_norm(build_cube_stats(f2, m)) == 2.0 * b);
    CHECK(bmo_norm(build_cube_stats(f3, m)) == doctest::Approx(3.0 * b).epsilon(1e-14));
}

TEST_CASE("cube tree depth limits") {
    const GridFunction f = line01(17);
    CHECK(default_max_level(f.grid) == 3);
    CHECK(build_cube_stats(f, Modulus::power(0.5), 0, 0).max_level == 0);
    CHECK_THROWS_AS((void)build_cube_stats(f, Modulus::power(0.5), 0, 4), ArgumentError);
    CHECK_THROWS_AS((void)build_cube_stats(f, Modulus::power(0.5), 2, 1), ArgumentError);
}

TEST_CASE("vmo profiles") {
    const Modulus m = Modulus::power(0.5);
    const VmoProfiles c = vmo_profiles(build_cube_stats(constant(Grid::uniform(1, -4, 4, 129), 1.0), m));
    for (double v : c.small.values) CHECK(v == 0.0);
    for (double v : c.far.values) CHECK(v == 0.0);

    // f(x) = x: mean deviation ℓ/4 so the weighted value is √ℓ/4
    const VmoProfiles l = vmo_profiles(build_cube_stats(line01(1025), m));
    CHECK(l.small.values.front() < l.large.values.back());
    for (std::size_t i = 0; i < l.small.scales.size(); ++i) {
        CHECK(l.small.values[i] == doctest::Approx(std::sqrt(l.small.scales[i]) / 4).epsilon(0.05));
    }

    const GridFunction t = make_fixture(parse_fixture_spec("tent:width=1,lo=-8,hi=8,h=1/16"));
    const VmoProfiles tp = vmo_profiles(build_cube_stats(t, m), {0.5, 2.0, 4.0});
    CHECK(tp.far.values.back() == 0.0);
    CHECK(tp.far.values.front() > 0.0);
}

TEST_CASE("Meyers comparison") {
    const Modulus m = Modulus::power(0.5);
    const ModulusCertificate cert = check_admissible(m);
    const MeyersComparison c = meyers_compare(constant(Grid::uniform(1, 0, 1, 33), 2.0), m, cert);
    CHECK(c.degenerate);
    CHECK(std::isnan(c.ratio_1));
    const MeyersComparison r = meyers_compare(oracle::random_function(12, 1), m, cert);
    CHECK_FALSE(r.degenerate);
    CHECK(r.ratio_1 == r.bmo / r.seminorm);
    CHECK(r.dini == cert.dini_constant);
    CHECK(r.averaged_modulus > 0.0);
    CHECK_THROWS_AS((void)meyers_compare(line01(9), Modulus::log_type(), check_admissible(Modulus::log_type())),
                    ArgumentError);
}

TEST_CASE("averaged modulus matches a direct double sum") {
    const Modulus m = Modulus::power(0.5);
    const GridFunction f = oracle::random_function(21, 2);
    const CubeStats st = build_cube_stats(f, m);
    double best = 0.0;
    for (int level = st.min_level; level <= st.max_level; ++level) {
        const CubeLevel& lv = st.at(level);
        for (std::size_t q = 0; q < lv.size(); ++q) {
            std::vector<std::size_t> pts;
            for (std::size_t p = 0; p < f.size(); ++p)
                if (st.cube_of(level, p) == q) pts.push_back(p);
            if (pts.empty()) continue;
            double s = 0.0;
            for (auto a : pts)
                for (auto b : pts) s += a == b ? 0.0 : m(oracle::distance(f.grid, f.norms.source, a, b));
            best = std::max(best, s / double(pts.size() * pts.size()) / m(lv.sidelength));
        }
    }
    CHECK(averaged_modulus_ratio(st, m) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("dyadic telescoping on f(x) = x") {
    const GridFunction f = line01(17);
    const CubeStats st = build_cube_stats(f, Modulus::power(0.5));
    REQUIRE(st.max_level == 3);
    const TelescopeRecord r = dyadic_chain_reconstruct(st, f, 0, 16);
    CHECK(r.top_level == 0);
    // level averages: x side 0.5, 0.21875, 0.09375, 0.03125; y side 0.5, 0.75, 0.875, 0.9375
    CHECK(r.increments_x == std::vector<double>{0.28125, 0.125, 0.0625});
    CHECK(r.increments_y == std::vector<double>{0.25, 0.125, 0.0625});
    CHECK(r.sum_x[0] == -0.46875);
    CHECK(r.sum_y[0] == 0.4375);
    CHECK(r.boundary_x[0] == -0.03125);
    CHECK(r.boundary_y[0] == 0.0625);
    CHECK(r.residual == 0.0);
    CHECK(r.identity_ok);
    CHECK(r.bound_ok);
}

TEST_CASE("telescoping identity on random functions") {
    const Modulus m = Modulus::power(0.5);
    const GridFunction c = constant(Grid::uniform(2, 0, 1, 9), 5.0);
    const TelescopeRecord rc = dyadic_chain_reconstruct(build_cube_stats(c, m), c, 0, 80);
    for (double v : rc.increments_x) CHECK(v == 0.0);
    CHECK(rc.identity_ok);
    for (std::uint64_t seed = 200; seed < 210; ++seed) {
        const GridFunction f = oracle::random_function(seed);
        if (default_max_level(f.grid) < 1) continue;
        const CubeStats st = build_cube_stats(f, m);
        std::mt19937_64 eng(seed);
        for (int k = 0; k < 20; ++k) {
            const std::size_t x = eng() % f.size(), y = eng() % f.size();
            const TelescopeRecord r = dyadic_chain_reconstruct(st, f, x, y);
            CHECK(r.residual < 1e-10);
            CHECK(r.bound_ok);
        }
    }
    CHECK_THROWS_AS((void)dyadic_chain_reconstruct(build_cube_stats(c, m, 1, 2), c, 0, 80), ArgumentError);
}
