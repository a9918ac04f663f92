// SPDX-License-Identifier: MIT
#include "holder/fixtures.hpp"

#include "holder/errors.hpp"
#include "rng.hpp"
#include "text.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace holder {

namespace {

struct Family {
    const char* name;
    std::map<std::string, double> params;
    double lo, hi, h;
    bool one_d;
};

const std::vector<Family>& families() {
    static const std::vector<Family> table = {
        {"tent", {{"width", 1.0}}, -8.0, 8.0, 1.0 / 64, false},
        {"root_tent", {{"width", 4.0}}, -8.0, 8.0, 1.0 / 64, false},
        {"appendix_a2", {{"n", 1.0}, {"alpha", 0.5}}, 0.0, 2.0, 1.0 / 64, true},
        {"appendix_a3", {{"n", 4.0}}, -1.0, 1.0, 1.0 / 16, true},
        {"affine", {{"slope", 1.0}}, -8.0, 8.0, 1.0 / 16, false},
        {"sin_decay", {{"freq", 1.0}}, -20.0, 20.0, 1.0 / 16, false},
        {"random_smooth", {{"seed", 1.0}, {"smoothness", 2.0}, {"terms", 8.0}}, -2.0, 2.0, 1.0 / 64, false},
        {"constant", {{"value", 1.0}}, -8.0, 8.0, 1.0 / 16, false},
    };
    return table;
}

const Family& find_family(const std::string& name) {
    for (const auto& f : families()) {
        if (name == f.name) return f;
    }
    throw ArgumentError("unknown fixture family '" + name + "'");
}

double parse_value(const std::string& key, const std::string& text) {
    try {
        const auto slash = text.find('/');
        if (slash != std::string::npos) {
            const double num = parse_real(text.substr(0, slash), 0);
            const double den = parse_real(text.substr(slash + 1), 0);
            if (den == 0.0) throw ArgumentError("zero denominator");
            return num / den;
        }
        return parse_real(text, 0);
    } catch (const Error&) {
        throw ArgumentError("fixture parameter " + key + ": malformed value '" + text + "'");
    }
}

double euclid(const Eigen::VectorXd& x) { return x.norm(); }

}  // namespace

std::vector<std::string> fixture_families() {
    std::vector<std::string> out;
    for (const auto& f : families()) out.emplace_back(f.name);
    return out;
}

std::string FixtureSpec::describe() const {
    std::string s = family + ":";
    bool first = true;
    auto add = [&](const std::string& k, double v) {
        s += (first ? "" : ",") + k + "=" + format_real(v);
        first = false;
    };
    for (const auto& [k, v] : params) add(k, v);
    add("dim", dim);
    add("lo", lo);
    add("hi", hi);
    add("h", h);
    return s;
}

FixtureSpec parse_fixture_spec(const std::string& text) {
    const auto colon = text.find(':');
    FixtureSpec spec;
    spec.family = trim(text.substr(0, colon));
    const Family& fam = find_family(spec.family);
    spec.params = fam.params;
    std::map<std::string, double> given;
    if (colon != std::string::npos && !trim(text.substr(colon + 1)).empty()) {
        for (const auto& item : split(text.substr(colon + 1), ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) {
                throw ArgumentError("fixture parameter '" + item + "' is not key=value");
            }
            const std::string key = trim(item.substr(0, eq));
            if (given.count(key)) {
                throw ArgumentError("duplicate fixture parameter " + key);
            }
            given[key] = parse_value(key, trim(item.substr(eq + 1)));
        }
    }
    for (const auto& [k, v] : given) {
        if (k != "dim" && k != "lo" && k != "hi" && k != "h" && !fam.params.count(k)) {
            throw ArgumentError("fixture family " + spec.family + " has no parameter " + k);
        }
        if (fam.params.count(k)) spec.params[k] = v;
    }
    spec.lo = fam.lo;
    spec.hi = fam.hi;
    spec.h = fam.h;
    if (spec.family == "appendix_a2") {
        spec.hi = 2.0 * spec.params["n"];
    } else if (spec.family == "appendix_a3") {
        spec.h = 1.0 / (4.0 * spec.params["n"]);
    }
    if (given.count("dim")) {
        const double d = given["dim"];
        if (d != std::floor(d) || d < 1 || d > 8) throw ArgumentError("fixture dim must be an integer in [1, 8]");
        spec.dim = static_cast<int>(d);
    }
    if (fam.one_d && spec.dim != 1) {
        throw ArgumentError("fixture family " + spec.family + " is one-dimensional");
    }
    if (given.count("lo")) spec.lo = given["lo"];
    if (given.count("hi")) spec.hi = given["hi"];
    if (given.count("h")) spec.h = given["h"];
    if (!(spec.hi > spec.lo) || !(spec.h > 0.0)) {
        throw ArgumentError("fixture grid needs lo < hi and h > 0");
    }
    for (const char* k : {"n", "width"}) {
        if (spec.params.count(k) && !(spec.params[k] > 0.0)) {
            throw ArgumentError(std::string("fixture parameter ") + k + " must be positive");
        }
    }
    if (spec.family == "random_smooth") {
        const double seed = spec.params["seed"];
        const double terms = spec.params["terms"];
        if (seed != std::floor(seed) || seed < 0) throw ArgumentError("seed must be a non-negative integer");
        if (terms != std::floor(terms) || terms < 1 || terms > 1000) throw ArgumentError("terms must be an integer in [1, 1000]");
    }
    return spec;
}

Grid fixture_grid(const FixtureSpec& spec) {
    const double steps = std::round((spec.hi - spec.lo) / spec.h);
    if (steps < 1 || steps > 1e8) {
        throw ArgumentError("fixture grid has an unreasonable number of points");
    }
    const long points = static_cast<long>(steps) + 1;
    return Grid(std::vector<double>(spec.dim, spec.lo), std::vector<double>(spec.dim, spec.h),
                std::vector<long>(spec.dim, points));
}

GridFunction make_fixture(const FixtureSpec& spec, NormSpec norms) {
    const Grid grid = fixture_grid(spec);
    const auto& p = spec.params;
    const int n = spec.dim;
    Values v(static_cast<Eigen::Index>(grid.size()), 1);

    // random_smooth coefficients, drawn in a fixed order
    std::vector<double> amp, phase;
    std::vector<Eigen::VectorXd> freq;
    if (spec.family == "random_smooth") {
        detail::Uniform u(static_cast<std::uint64_t>(p.at("seed")));
        const int terms = static_cast<int>(p.at("terms"));
        for (int j = 1; j <= terms; ++j) {
            amp.push_back((2.0 * u.next() - 1.0) / std::pow(j, p.at("smoothness")));
            Eigen::VectorXd k(n);
            for (int a = 0; a < n; ++a) k[a] = (2.0 * u.next() - 1.0) * j * std::numbers::pi / 2.0;
            freq.push_back(k);
            phase.push_back(2.0 * std::numbers::pi * u.next());
        }
    }

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Eigen::VectorXd x = grid.point(i);
        double y = 0.0;
        if (spec.family == "tent") {
            y = std::max(0.0, 1.0 - euclid(x) / p.at("width"));
        } else if (spec.family == "root_tent") {
            const double r = euclid(x);
            y = std::sqrt(r) * std::max(0.0, 1.0 - r / p.at("width"));
        } else if (spec.family == "appendix_a2") {
            const double m = p.at("n");
            y = x[0] <= m ? x[0] / m : (2.0 * m - x[0]) / m;
        } else if (spec.family == "appendix_a3") {
            const double m = p.at("n");
            y = std::max(0.0, 1.0 - m * std::fabs(x[0])) / std::sqrt(m);
        } else if (spec.family == "affine") {
            y = p.at("slope") * x.sum();
        } else if (spec.family == "sin_decay") {
            y = std::sin(p.at("freq") * x[0]) / (1.0 + euclid(x));
        } else if (spec.family == "random_smooth") {
            for (std::size_t j = 0; j < amp.size(); ++j) y += amp[j] * std::sin(freq[j].dot(x) + phase[j]);
        } else {
            y = p.at("value");
        }
        v(static_cast<Eigen::Index>(i), 0) = y;
    }
    return GridFunction(grid, std::move(v), norms, spec.describe());
}

}  // namespace holder
