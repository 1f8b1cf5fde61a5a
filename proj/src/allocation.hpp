#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "mtd/errors.hpp"

namespace mtd::detail {

// Largest-remainder split of target items across buckets, proportional to
// bucket sizes, with a per-bucket minimum and the bucket size as cap.
// Deterministic: remainder ties go to the lower bucket index.
inline std::vector<std::size_t> proportional_counts(const std::vector<std::size_t>& sizes,
                                                    std::size_t target, std::size_t min_per_bucket) {
    const std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    if (target > total) {
        throw ConfigError("allocation target exceeds available samples");
    }
    if (min_per_bucket * sizes.size() > target) {
        throw ConfigError("allocation target too small to give every bucket its minimum");
    }

    const std::size_t n = sizes.size();
    std::vector<std::size_t> counts(n);
    std::vector<double> fractional(n);
    std::size_t assigned = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (sizes[j] < min_per_bucket) {
            throw ConfigError("bucket " + std::to_string(j) + " smaller than required minimum");
        }
        const double share = static_cast<double>(target) * static_cast<double>(sizes[j]) /
                             static_cast<double>(total);
        counts[j] = std::min(sizes[j], std::max(min_per_bucket,
                                                static_cast<std::size_t>(share)));
        fractional[j] = share - static_cast<double>(counts[j]);
        assigned += counts[j];
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fractional[a] > fractional[b]; });

    // Hand out what is left, largest remainder first; if the floors plus
    // minimums overshot, trim from the smallest remainders.
    std::size_t guard = 0;
    while (assigned < target && guard++ < total) {
        for (std::size_t j : order) {
            if (assigned == target) break;
            if (counts[j] < sizes[j]) {
                ++counts[j];
                ++assigned;
            }
        }
    }
    guard = 0;
    while (assigned > target && guard++ < total) {
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            if (assigned == target) break;
            if (counts[*it] > min_per_bucket) {
                --counts[*it];
                --assigned;
            }
        }
    }
    if (assigned != target) {
        throw ConfigError("allocation infeasible under the per-bucket minimum");
    }
    return counts;
}

}  // namespace mtd::detail
