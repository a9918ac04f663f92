// SPDX-License-Identifier: MIT
// Enumeration of grid pairs grouped by index offset. Not part of the public API.
#pragma once

#include "holder/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace holder::detail {

/// All offsets d ≠ 0 with |d_k| < shape_k whose first nonzero entry is positive, in odometer order.
inline std::vector<Index> positive_offsets(const Grid& g) {
    const int n = g.dim();
    std::vector<Index> out;
    Index d(n);
    for (int k = 0; k < n; ++k) {
        d[k] = -(g.shape[k] - 1);
    }
    while (true) {
        int first = 0;
        while (first < n && d[first] == 0) ++first;
        if (first < n && d[first] > 0) {
            out.push_back(d);
        }
        int k = n - 1;
        while (k >= 0 && d[k] == g.shape[k] - 1) {
            d[k] = -(g.shape[k] - 1);
            --k;
        }
        if (k < 0) break;
        ++d[k];
    }
    return out;
}

inline std::uint64_t offset_pair_count(const Grid& g, const Index& d) {
    std::uint64_t c = 1;
    for (int k = 0; k < g.dim(); ++k) {
        c *= static_cast<std::uint64_t>(g.shape[k] - std::labs(d[k]));
    }
    return c;
}

/// Calls visit(i, j) for pairs (x_i, x_{i+d}). With quota < pair count, visits `quota`
/// base points picked by a golden-ratio Weyl sequence instead. Returns the number visited.
template <class Visit>
std::uint64_t scan_offset(const Grid& g, const std::vector<std::size_t>& strides, const Index& d,
                          std::uint64_t quota, Visit&& visit) {
    const int n = g.dim();
    std::vector<long> lo(n), len(n);
    long long delta = 0;
    for (int k = 0; k < n; ++k) {
        lo[k] = d[k] < 0 ? -d[k] : 0;
        len[k] = g.shape[k] - std::labs(d[k]);
        delta += static_cast<long long>(d[k]) * static_cast<long long>(strides[k]);
    }
    const std::uint64_t total = offset_pair_count(g, d);
    if (quota >= total) {
        std::vector<long> idx(lo.begin(), lo.end());
        while (true) {
            std::size_t row = 0;
            for (int k = 0; k + 1 < n; ++k) {
                row += static_cast<std::size_t>(idx[k]) * strides[k];
            }
            const std::size_t first = row + static_cast<std::size_t>(lo[n - 1]);
            const std::size_t last = first + static_cast<std::size_t>(len[n - 1]);
            for (std::size_t i = first; i < last; ++i) {
                visit(i, static_cast<std::size_t>(static_cast<long long>(i) + delta));
            }
            int k = n - 2;
            while (k >= 0 && idx[k] == lo[k] + len[k] - 1) {
                idx[k] = lo[k];
                --k;
            }
            if (k < 0) break;
            ++idx[k];
        }
        return total;
    }
    constexpr double kGolden = 0.6180339887498949;
    for (std::uint64_t s = 0; s < quota; ++s) {
        const double u = std::fmod(0.5 + static_cast<double>(s) * kGolden, 1.0);
        std::uint64_t rank = static_cast<std::uint64_t>(u * static_cast<double>(total));
        if (rank >= total) rank = total - 1;
        std::size_t i = 0;
        for (int k = n - 1; k >= 0; --k) {
            const auto l = static_cast<std::uint64_t>(len[k]);
            i += static_cast<std::size_t>(lo[k] + static_cast<long>(rank % l)) * strides[k];
            rank /= l;
        }
        visit(i, static_cast<std::size_t>(static_cast<long long>(i) + delta));
    }
    return quota;
}

/// Per-offset quota so that the whole scan stays under `cap` pairs.
inline std::uint64_t offset_quota(std::uint64_t pairs, std::uint64_t total, std::uint64_t cap) {
    if (total <= cap) return pairs;
    const double share = static_cast<double>(pairs) * (static_cast<double>(cap) / static_cast<double>(total));
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(share));
}

inline std::uint64_t total_pairs(const Grid& g) {
    const auto n = static_cast<std::uint64_t>(g.size());
    return n * (n - 1) / 2;
}

}  // namespace holder::detail
