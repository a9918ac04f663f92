// SPDX-License-Identifier: MIT
// Platform-independent uniform draws. std::uniform_real_distribution is
// implementation-defined, so fixtures and certificates take raw engine bits.
#pragma once

#include <cstdint>
#include <random>

namespace holder::detail {

class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double next(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace holder::detail
