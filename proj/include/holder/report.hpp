// SPDX-License-Identifier: MIT
//
// JSON reports, input digests and a minimal SVG line plot.
#pragma once

#include "holder/approximators.hpp"
#include "holder/meanosc.hpp"
#include "holder/modulus.hpp"
#include "holder/oscillation.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace holder {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::json;

/// Finite values as numbers; ±inf as "inf"/"-inf" and NaN as "nan".
[[nodiscard]] Json real(double v);
[[nodiscard]] Json reals(const std::vector<double>& v);

/// Lower-case hex SHA-256 of a file's bytes.
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);
[[nodiscard]] std::string sha256_bytes(const std::string& bytes);

/// {"schema": 1, "version": ..., "command": ...}
[[nodiscard]] Json report_header(const std::string& command);

[[nodiscard]] Json to_json(const ModulusCertificate& c);
[[nodiscard]] Json to_json(const ScaleProfile& p);
[[nodiscard]] Json to_json(const VanishingVerdict& v);
[[nodiscard]] Json to_json(const MeyersComparison& m);
[[nodiscard]] Json to_json(const ApproxPlan& p);
[[nodiscard]] Json to_json(const TruncationCertificate& c);

/// Pretty-printed with sorted keys and a trailing newline.
void write_json(const Json& j, const std::filesystem::path& path);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Static SVG with linear or log₁₀ axes. Non-finite and (on log axes) non-positive points are skipped.
[[nodiscard]] std::string render_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                                     const std::vector<Series>& series, bool logx = false, bool logy = false);

}  // namespace holder
