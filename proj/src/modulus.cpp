// SPDX-License-Identifier: MIT
#include "holder/modulus.hpp"

#include "holder/errors.hpp"
#include "text.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace holder {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Modulus Modulus::power(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ArgumentError("power modulus exponent must lie in (0, 1], got " + format_real(alpha));
    }
    return Modulus(Power{alpha});
}

Modulus Modulus::log_type(double c, double p) {
    if (!(c > 0.0 && std::isfinite(c)) || !(p > 0.0 && std::isfinite(p))) {
        throw ArgumentError("log-type modulus needs c > 0 and p > 0");
    }
    return Modulus(LogType{c, p});
}

Modulus Modulus::tabulated(std::vector<std::pair<double, double>> knots, Extrapolation policy) {
    if (knots.size() < 2) {
        throw ArgumentError("tabulated modulus needs at least two knots");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const auto [t, w] = knots[i];
        if (!(t > 0.0 && std::isfinite(t)) || !(w > 0.0 && std::isfinite(w))) {
            throw ArgumentError("tabulated modulus knots must be positive and finite");
        }
        if (i > 0 && !(t > knots[i - 1].first)) {
            throw ArgumentError("tabulated modulus knots must be strictly increasing in t");
        }
        if (i > 0 && w < knots[i - 1].second) {
            throw ArgumentError("tabulated modulus values must be non-decreasing");
        }
    }
    auto log_slope = [](const std::pair<double, double>& a, const std::pair<double, double>& b) {
        return std::log(b.second / a.second) / std::log(b.first / a.first);
    };
    const double low = log_slope(knots[0], knots[1]);
    const double high = log_slope(knots[knots.size() - 2], knots.back());
    return Modulus(Table{std::move(knots), policy, low, high});
}

double Modulus::operator()(double t) const {
    if (std::isnan(t) || t < 0.0) {
        throw DomainError("modulus evaluated at negative or NaN argument");
    }
    if (t == 0.0) {
        return 0.0;
    }
    return std::visit(
        Overloaded{
            [t](const Power& p) { return p.alpha == 1.0 ? t : std::pow(t, p.alpha); },
            [t](const LogType& l) {
                constexpr double kKnee = 1.0 / std::numbers::e;
                if (t <= kKnee) {
                    return l.c * std::pow(std::log(1.0 / t), -l.p);
                }
                return l.c * (1.0 + l.p * std::numbers::e * (t - kKnee));
            },
            [t](const Table& tab) {
                const auto& k = tab.knots;
                if (t < k.front().first || t > k.back().first) {
                    if (tab.policy == Extrapolation::none) {
                        throw RangeError("tabulated modulus queried at t = " + format_real(t) +
                                         " outside [" + format_real(k.front().first) + ", " +
                                         format_real(k.back().first) + "]");
                    }
                    if (t < k.front().first) {
                        return k.front().second * std::pow(t / k.front().first, tab.slope_low);
                    }
                    return k.back().second * std::pow(t / k.back().first, tab.slope_high);
                }
                auto it = std::upper_bound(k.begin(), k.end(), t,
                                           [](double v, const auto& knot) { return v < knot.first; });
                if (it == k.end()) {
                    return k.back().second;
                }
                const auto& hi = *it;
                const auto& lo = *(it - 1);
                if (t == lo.first) {
                    return lo.second;
                }
                const double frac = std::log(t / lo.first) / std::log(hi.first / lo.first);
                return lo.second + (hi.second - lo.second) * frac;
            },
        },
        rep_);
}

ModulusKind Modulus::kind() const noexcept {
    return std::visit(Overloaded{
                          [](const Power&) { return ModulusKind::power; },
                          [](const LogType&) { return ModulusKind::log_type; },
                          [](const Table&) { return ModulusKind::tabulated; },
                      },
                      rep_);
}

double Modulus::alpha() const noexcept {
    if (const auto* p = std::get_if<Power>(&rep_)) {
        return p->alpha;
    }
    return 0.0;
}

const std::vector<std::pair<double, double>>& Modulus::knots() const {
    if (const auto* tab = std::get_if<Table>(&rep_)) {
        return tab->knots;
    }
    throw ArgumentError("only tabulated moduli have knots");
}

std::string Modulus::describe() const {
    return std::visit(
        Overloaded{
            [](const Power& p) { return "power:" + format_real(p.alpha); },
            [](const LogType& l) { return "log:c=" + format_real(l.c) + ",p=" + format_real(l.p); },
            [](const Table& t) {
                return std::string(t.policy == Extrapolation::none ? "table-strict:" : "table:") +
                       std::to_string(t.knots.size()) + " knots";
            },
        },
        rep_);
}

double doubling_constant(const Modulus& m, std::span<const double> t_grid) {
    if (t_grid.empty()) {
        throw ArgumentError("doubling_constant needs a nonempty grid");
    }
    double best = 0.0;
    for (double t : t_grid) {
        if (!(t > 0.0)) {
            throw ArgumentError("doubling_constant grid must be positive");
        }
        best = std::max(best, m(2.0 * t) / m(t));
    }
    return best;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int points) {
    if (points < 1) {
        throw ArgumentError("Gauss-Legendre rule needs at least one point");
    }
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(points, points);
    for (int k = 1; k < points; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    std::vector<double> nodes(points);
    std::vector<double> weights(points);
    for (int k = 0; k < points; ++k) {
        nodes[k] = solver.eigenvalues()(k);
        const double v = solver.eigenvectors()(0, k);
        weights[k] = 2.0 * v * v;
    }
    return {nodes, weights};
}

double dini_constant(const Modulus& m, std::span<const double> s_grid, int quadrature_points) {
    if (quadrature_points < 16) {
        throw ArgumentError("dini_constant needs at least 16 quadrature points");
    }
    if (s_grid.empty()) {
        throw ArgumentError("dini_constant needs a nonempty scale grid");
    }
    const auto [nodes, weights] = gauss_legendre(quadrature_points);
    constexpr double kUMax = 512.0;

    double best = 0.0;
    for (double s : s_grid) {
        if (!(s > 0.0)) {
            throw ArgumentError("dini_constant scales must be positive");
        }
        std::vector<double> breaks{0.0};
        for (double u = 1.0; u <= kUMax; u *= 2.0) {
            breaks.push_back(u);
        }
        if (m.kind() == ModulusKind::tabulated) {
            for (const auto& [t, w] : m.knots()) {
                const double u = std::log(s / t);
                if (u > 0.0 && u < kUMax) {
                    breaks.push_back(u);
                }
            }
            std::sort(breaks.begin(), breaks.end());
            breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        }

        double total = 0.0;
        double tail = 0.0;  // contribution of the last dyadic panel [256, 512]
        for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
            const double a = breaks[p];
            const double b = breaks[p + 1];
            const double half = 0.5 * (b - a);
            const double mid = 0.5 * (a + b);
            double panel = 0.0;
            for (std::size_t q = 0; q < nodes.size(); ++q) {
                const double u = mid + half * nodes[q];
                panel += weights[q] * m(s * std::exp(-u));
            }
            panel *= half;
            total += panel;
            if (a >= kUMax / 2.0) {
                tail += panel;
            }
        }
        if (tail > 1e-3 * total) {
            return kInf;
        }
        best = std::max(best, total / m(s));
    }
    return best;
}

namespace {

std::vector<double> dyadic_probes(int depth) {
    std::vector<double> out;
    for (int k = -depth; k <= depth; ++k) {
        out.push_back(std::ldexp(1.0, k));
    }
    return out;
}

}  // namespace

ModulusCertificate check_admissible(const Modulus& m, const ProbeConfig& config) {
    if (config.depth < 2) {
        throw ArgumentError("probe depth must be at least 2");
    }
    ModulusCertificate cert;
    const int depth = config.depth;
    const int half = depth / 2;
    cert.t_min = std::ldexp(1.0, -depth);
    cert.t_max = std::ldexp(1.0, depth);

    // Limit probe: compares the sequence at 2^{sign·half} and 2^{sign·depth}.
    auto probe = [&](const std::string& name, int sign, auto&& g, bool decreasing) {
        ProbeRecord rec;
        rec.condition = name;
        rec.t_near = std::ldexp(1.0, sign * half);
        rec.t_far = std::ldexp(1.0, sign * depth);
        try {
            rec.value_near = g(rec.t_near);
            rec.value_far = g(rec.t_far);
            bool monotone = true;
            double prev = g(1.0);
            for (int k = 1; k <= depth; ++k) {
                const double v = g(std::ldexp(1.0, sign * k));
                monotone = monotone && (decreasing ? v <= prev : v >= prev);
                prev = v;
            }
            rec.passed = monotone && (decreasing ? rec.value_far <= 0.75 * rec.value_near
                                                 : rec.value_far >= (4.0 / 3.0) * rec.value_near);
        } catch (const Error&) {
            rec.passed = false;
        }
        cert.probes.push_back(rec);
        return rec.passed;
    };

    cert.coercive_zero = probe("coercive_zero", -1, [&](double t) { return m(t); }, true);
    cert.coercive_infty = probe("coercive_infty", +1, [&](double t) { return m(t); }, false);
    cert.sublinear_zero = probe("sublinear_zero", -1, [&](double t) { return t / m(t); }, true);

    const auto grid = dyadic_probes(depth);
    try {
        cert.doubling_constant = doubling_constant(m, grid);
    } catch (const Error&) {
        cert.doubling_constant = kInf;
    }
    cert.doubling = std::isfinite(cert.doubling_constant);
    try {
        cert.dini_constant = dini_constant(m, grid, config.quadrature_points);
    } catch (const Error&) {
        cert.dini_constant = kInf;
    }
    return cert;
}

Modulus parse_modulus(std::string_view literal) {
    const auto colon = literal.find(':');
    if (colon == std::string_view::npos) {
        throw ArgumentError("modulus literal must look like kind:params, got '" + std::string(literal) + "'");
    }
    const std::string kind(literal.substr(0, colon));
    const std::string body(literal.substr(colon + 1));
    if (kind == "power") {
        auto params = parse_key_values(body, "alpha");
        if (params.size() != 1 || !params.contains("alpha")) {
            throw ArgumentError("power modulus takes a single exponent, e.g. power:0.5");
        }
        return Modulus::power(params.at("alpha"));
    }
    if (kind == "log") {
        auto params = parse_key_values(body, "c");
        double c = 1.0;
        double p = 1.0;
        for (const auto& [key, value] : params) {
            if (key == "c") {
                c = value;
            } else if (key == "p") {
                p = value;
            } else {
                throw ArgumentError("unknown log modulus parameter '" + key + "'");
            }
        }
        return Modulus::log_type(c, p);
    }
    if (kind == "table") {
        return load_modulus_table(body, Extrapolation::power);
    }
    if (kind == "table-strict") {
        return load_modulus_table(body, Extrapolation::none);
    }
    throw ArgumentError("unknown modulus kind '" + kind + "'");
}

Modulus load_modulus_table(const std::filesystem::path& path, Extrapolation policy) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(0, "cannot open modulus table " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::pair<double, double>> knots;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (!header) {
            if (line != "t,omega") {
                throw ParseError(line_no, "expected header 't,omega'");
            }
            header = true;
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 2) {
            throw ParseError(line_no, "expected two columns");
        }
        knots.emplace_back(parse_real(fields[0], line_no), parse_real(fields[1], line_no));
    }
    if (!header) {
        throw ParseError(line_no, "empty modulus table");
    }
    try {
        return Modulus::tabulated(std::move(knots), policy);
    } catch (const ArgumentError& e) {
        throw ParseError(0, e.what());
    }
}

}  // namespace holder
