// SPDX-License-Identifier: MIT
#include "holder/report.hpp"

#include "holder/errors.hpp"
#include "text.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace holder {

Json real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

Json reals(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(real(x));
    return a;
}

std::string sha256_bytes(const std::string& bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
        throw Error("SHA-256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ArgumentError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return sha256_bytes(ss.str());
}

Json report_header(const std::string& command) {
    return Json{{"schema", 1}, {"version", kVersion}, {"command", command}};
}

Json to_json(const ModulusCertificate& c) {
    Json probes = Json::array();
    for (const auto& p : c.probes) {
        probes.push_back({{"condition", p.condition}, {"t_near", real(p.t_near)}, {"value_near", real(p.value_near)},
                          {"t_far", real(p.t_far)}, {"value_far", real(p.value_far)}, {"passed", p.passed}});
    }
    return Json{{"doubling", c.doubling},
                {"coercive_zero", c.coercive_zero},
                {"coercive_infty", c.coercive_infty},
                {"sublinear_zero", c.sublinear_zero},
                {"doubling_constant", real(c.doubling_constant)},
                {"dini_constant", real(c.dini_constant)},
                {"t_min", real(c.t_min)},
                {"t_max", real(c.t_max)},
                {"probes", probes}};
}

Json to_json(const ScaleProfile& p) {
    Json counts = Json::array();
    for (auto c : p.pair_counts) counts.push_back(c);
    return Json{{"scales", reals(p.scales)},
                {"values", reals(p.values)},
                {"pair_counts", counts},
                {"band", real(p.band_width)},
                {"sampled", p.sampled}};
}

Json to_json(const VanishingVerdict& v) {
    return Json{{"small", v.small},
                {"large", v.large},
                {"far", v.far},
                {"thresholds", {{"small", real(v.thresholds.small)}, {"large", real(v.thresholds.large)},
                                {"far", real(v.thresholds.far)}}},
                {"seminorm", real(v.seminorm)},
                {"sampled", v.sampled},
                {"profile", to_json(v.profile)},
                {"far_profile", to_json(v.far_evidence)}};
}

Json to_json(const MeyersComparison& m) {
    Json j{{"seminorm", real(m.seminorm)},
           {"bmo", real(m.bmo)},
           {"dini", real(m.dini)},
           {"averaged_modulus", real(m.averaged_modulus)},
           {"degenerate", m.degenerate},
           {"ratio_1", real(m.ratio_1)},
           {"ratio_2", real(m.ratio_2)},
           {"within", m.within}};
    if (m.ceilings) {
        j["ceilings"] = {{"ratio_1", real(m.ceilings->ratio_1)},
                         {"ratio_2", real(m.ceilings->ratio_2)},
                         {"averaged_modulus", real(m.ceilings->averaged_modulus)}};
    }
    return j;
}

Json to_json(const ApproxPlan& p) {
    return Json{{"epsilon", real(p.epsilon)},
                {"r", real(p.r)},
                {"R", real(p.R)},
                {"M", real(p.M)},
                {"mollifier_radius", real(p.mollifier_radius)},
                {"doubling_constant", real(p.doubling_constant)},
                {"lip_factor", real(p.lip_factor)},
                {"small_sup_at_5r", real(p.small_sup_at_5r)},
                {"far_delta", real(p.far_delta)},
                {"far_value_at_R", real(p.far_value_at_R)},
                {"local_lipschitz", real(p.local_lipschitz)},
                {"slack_scale", real(p.slack_scale)},
                {"slack_growth", real(p.slack_growth)}};
}

Json to_json(const TruncationCertificate& c) {
    Json clauses = Json::array();
    for (const auto& k : c.contraction) {
        clauses.push_back({{"R", real(k.R)}, {"bound", real(k.bound)}, {"max_ratio", real(k.max_ratio)},
                           {"pairs", k.pairs}, {"status", k.status}});
    }
    return Json{{"M", real(c.M)},           {"norm", to_string(c.norm)}, {"dim", c.dim},
                {"samples", c.samples},     {"seed", c.seed},            {"max_ratio", real(c.max_ratio)},
                {"lipschitz_ok", c.lipschitz_ok}, {"contraction", clauses}, {"passed", c.passed}};
}

void write_json(const Json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ArgumentError("cannot write " + path.string());
    }
    out << j.dump(2) << "\n";
}

namespace {

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

std::string render_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<Series>& series, bool logx, bool logy) {
    constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
    auto tx = [&](double v) { return logx ? std::log10(v) : v; };
    auto ty = [&](double v) { return logy ? std::log10(v) : v; };
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!logx || x > 0) && (!logy || y > 0);
    };
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!usable(s.x[i], s.y[i])) continue;
            x0 = std::min(x0, tx(s.x[i]));
            x1 = std::max(x1, tx(s.x[i]));
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    }
    if (!(x0 <= x1)) { x0 = 0; x1 = 1; }
    if (!(y0 <= y1)) { y0 = 0; y1 = 1; }
    if (x0 == x1) { x0 -= 0.5; x1 += 0.5; }
    if (y0 == y1) { y0 -= 0.5; y1 += 0.5; }
    auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(title) << "</text>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = x0 + (x1 - x0) * k / 4.0;
        const double fy = y0 + (y1 - y0) * k / 4.0;
        const double vx = logx ? std::pow(10.0, fx) : fx;
        const double vy = logy ? std::pow(10.0, fy) : fy;
        const double sx = L + (W - L - R) * k / 4.0;
        const double sy = H - B - (H - T - B) * k / 4.0;
        o << "<text x=\"" << fixed(sx) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << tick(vx) << "</text>\n";
        o << "<text x=\"" << L - 6 << "\" y=\"" << fixed(sy + 4) << "\" text-anchor=\"end\">" << tick(vy) << "</text>\n";
    }
    o << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape_xml(xlabel) << "</text>\n";
    o << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << H / 2 << ")\">"
      << escape_xml(ylabel) << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = colors[s % 6];
        std::string pts;
        for (std::size_t i = 0; i < std::min(series[s].x.size(), series[s].y.size()); ++i) {
            if (!usable(series[s].x[i], series[s].y[i])) continue;
            pts += fixed(px(series[s].x[i])) + "," + fixed(py(series[s].y[i])) + " ";
        }
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
        o << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 * (s + 1) << "\" text-anchor=\"end\" fill=\"" << color << "\">"
          << escape_xml(series[s].name) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace holder
