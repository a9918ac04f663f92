// SPDX-License-Identifier: MIT
#include "holder/calibration.hpp"

#include "holder/approximators.hpp"
#include "holder/errors.hpp"
#include "holder/fixtures.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef HOLDER_DATA_DIR
#define HOLDER_DATA_DIR "data"
#endif

namespace holder {

namespace {

constexpr double kEpsilons[3] = {0.2, 0.1, 0.05};

MeyersCeilings ceil_all(const MeyersCeilings& m, double margin) {
    return {round_up_3(m.ratio_1 * margin), round_up_3(m.ratio_2 * margin), round_up_3(m.averaged_modulus * margin)};
}

}  // namespace

const MeyersCeilings& CalibrationTable::ceilings(int dim) const {
    const auto it = dims.find(dim);
    if (it == dims.end()) {
        throw ArgumentError("no calibration ceilings for dimension " + std::to_string(dim));
    }
    return it->second.ceilings;
}

std::vector<std::string> calibration_suite(int dim) {
    std::vector<std::string> out;
    if (dim == 1) {
        for (int s = 101; s <= 120; ++s) out.push_back("random_smooth:seed=" + std::to_string(s) + ",lo=-2,hi=2,h=1/64");
    } else if (dim == 2) {
        for (int s = 101; s <= 110; ++s) out.push_back("random_smooth:seed=" + std::to_string(s) + ",dim=2,lo=-1,hi=1,h=1/16");
    } else if (dim == 3) {
        for (int s = 101; s <= 105; ++s) out.push_back("random_smooth:seed=" + std::to_string(s) + ",dim=3,lo=-1,hi=1,h=1/4");
    } else {
        throw ArgumentError("calibration covers dimensions 1 to 3");
    }
    return out;
}

std::vector<std::string> pipeline_calibration_suite() {
    return {"tent:width=1,lo=-8,hi=8,h=1/64", "tent:width=2,lo=-16,hi=16,h=1/64", "tent:width=1,lo=-4,hi=4,h=1/128"};
}

double round_up_3(double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        return v;
    }
    const int e = static_cast<int>(std::floor(std::log10(v)));
    for (int exp10 = e - 2; exp10 <= e - 1; ++exp10) {
        const double step = std::pow(10.0, exp10);
        const long long k = static_cast<long long>(std::ceil(v / step));
        char buf[64];
        std::snprintf(buf, sizeof buf, "%llde%d", k, exp10);
        const double r = std::strtod(buf, nullptr);
        if (r >= v && k < 1000) {
            return r;
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%de%d", 1, e + 1);
    return std::strtod(buf, nullptr);
}

CalibrationTable compute_calibration() {
    CalibrationTable t;
    const Modulus m = parse_modulus(t.modulus);
    const ModulusCertificate cert = check_admissible(m);
    for (int dim = 1; dim <= 3; ++dim) {
        DimensionCalibration dc;
        dc.dim = dim;
        for (const auto& spec : calibration_suite(dim)) {
            const GridFunction f = make_fixture(parse_fixture_spec(spec));
            const MeyersComparison mc = meyers_compare(f, m, cert);
            if (mc.degenerate) continue;
            dc.entries.push_back({spec, mc.ratio_1, mc.ratio_2, mc.averaged_modulus});
            dc.observed.ratio_1 = std::max(dc.observed.ratio_1, mc.ratio_1);
            dc.observed.ratio_2 = std::max(dc.observed.ratio_2, mc.ratio_2);
            dc.observed.averaged_modulus = std::max(dc.observed.averaged_modulus, mc.averaged_modulus);
        }
        dc.ceilings = ceil_all(dc.observed, t.margin);
        t.dims[dim] = dc;
    }
    for (const auto& spec : pipeline_calibration_suite()) {
        const GridFunction f = make_fixture(parse_fixture_spec(spec));
        for (double eps : kEpsilons) {
            const PipelineResult r = pipeline_vc_to_smooth(f, m, eps, std::numeric_limits<double>::infinity());
            t.pipeline.push_back({spec, eps, r.seminorm_error});
            t.c_pipe_observed = std::max(t.c_pipe_observed, r.seminorm_error / eps);
        }
    }
    t.c_pipe = round_up_3(t.c_pipe_observed * t.margin);
    return t;
}

std::string calibration_to_json(const CalibrationTable& t) {
    nlohmann::json j;
    j["schema"] = 1;
    j["modulus"] = t.modulus;
    j["margin"] = t.margin;
    for (const auto& [dim, dc] : t.dims) {
        nlohmann::json d;
        d["ceilings"] = {{"ratio_1", dc.ceilings.ratio_1}, {"ratio_2", dc.ceilings.ratio_2},
                         {"averaged_modulus", dc.ceilings.averaged_modulus}};
        d["observed"] = {{"ratio_1", dc.observed.ratio_1}, {"ratio_2", dc.observed.ratio_2},
                         {"averaged_modulus", dc.observed.averaged_modulus}};
        for (const auto& e : dc.entries) {
            d["fixtures"].push_back({{"fixture", e.fixture}, {"ratio_1", e.ratio_1}, {"ratio_2", e.ratio_2},
                                     {"averaged_modulus", e.averaged_modulus}});
        }
        j["dimensions"][std::to_string(dim)] = d;
    }
    j["pipeline"]["c_pipe"] = t.c_pipe;
    j["pipeline"]["observed"] = t.c_pipe_observed;
    for (const auto& e : t.pipeline) {
        j["pipeline"]["runs"].push_back({{"fixture", e.fixture}, {"epsilon", e.epsilon}, {"seminorm_error", e.seminorm_error}});
    }
    return j.dump(2) + "\n";
}

CalibrationTable calibration_from_json(const std::string& text) {
    CalibrationTable t;
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.at("schema").get<int>() != 1) {
            throw ArgumentError("unsupported calibration schema");
        }
        t.modulus = j.at("modulus").get<std::string>();
        t.margin = j.at("margin").get<double>();
        for (const auto& [key, d] : j.at("dimensions").items()) {
            DimensionCalibration dc;
            dc.dim = std::stoi(key);
            const auto& c = d.at("ceilings");
            dc.ceilings = {c.at("ratio_1").get<double>(), c.at("ratio_2").get<double>(),
                           c.at("averaged_modulus").get<double>()};
            const auto& o = d.at("observed");
            dc.observed = {o.at("ratio_1").get<double>(), o.at("ratio_2").get<double>(),
                           o.at("averaged_modulus").get<double>()};
            if (d.contains("fixtures")) {
                for (const auto& e : d.at("fixtures")) {
                    dc.entries.push_back({e.at("fixture").get<std::string>(), e.at("ratio_1").get<double>(),
                                          e.at("ratio_2").get<double>(), e.at("averaged_modulus").get<double>()});
                }
            }
            t.dims[dc.dim] = dc;
        }
        const auto& p = j.at("pipeline");
        t.c_pipe = p.at("c_pipe").get<double>();
        t.c_pipe_observed = p.at("observed").get<double>();
        if (p.contains("runs")) {
            for (const auto& e : p.at("runs")) {
                t.pipeline.push_back({e.at("fixture").get<std::string>(), e.at("epsilon").get<double>(),
                                      e.at("seminorm_error").get<double>()});
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(std::string("malformed calibration file: ") + e.what());
    }
    return t;
}

CalibrationTable load_calibration(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ArgumentError("cannot open calibration file " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return calibration_from_json(ss.str());
}

std::filesystem::path default_calibration_path() {
    return std::filesystem::path(HOLDER_DATA_DIR) / "calibration.json";
}

}  // namespace holder
