// SPDX-License-Identifier: MIT
//
// Pinned constants for the Meyers comparison and the approximation pipeline.
#pragma once

#include "holder/meanosc.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace holder {

struct CalibrationEntry {
    std::string fixture;
    double ratio_1 = 0.0;
    double ratio_2 = 0.0;
    double averaged_modulus = 0.0;
};

struct DimensionCalibration {
    int dim = 1;
    MeyersCeilings ceilings;
    MeyersCeilings observed;  ///< suite maxima before the margin
    std::vector<CalibrationEntry> entries;
};

struct PipelineEntry {
    std::string fixture;
    double epsilon = 0.0;
    double seminorm_error = 0.0;
};

struct CalibrationTable {
    std::string modulus = "power:0.5";
    double margin = 1.5;
    std::map<int, DimensionCalibration> dims;
    double c_pipe = 0.0;
    double c_pipe_observed = 0.0;
    std::vector<PipelineEntry> pipeline;

    /// Throws ArgumentError for dimensions outside the table.
    [[nodiscard]] const MeyersCeilings& ceilings(int dim) const;
};

/// Fixture specs of the calibration suite for one dimension (1, 2 or 3).
[[nodiscard]] std::vector<std::string> calibration_suite(int dim);
[[nodiscard]] std::vector<std::string> pipeline_calibration_suite();

/// Smallest number with three significant digits that is ≥ v.
[[nodiscard]] double round_up_3(double v);

/// Runs the suites; deterministic.
[[nodiscard]] CalibrationTable compute_calibration();

[[nodiscard]] std::string calibration_to_json(const CalibrationTable& t);
[[nodiscard]] CalibrationTable calibration_from_json(const std::string& text);
[[nodiscard]] CalibrationTable load_calibration(const std::filesystem::path& path);

/// data/calibration.json of the source tree.
[[nodiscard]] std::filesystem::path default_calibration_path();

}  // namespace holder
