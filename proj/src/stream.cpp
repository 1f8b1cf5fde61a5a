#include "mtd/stream.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "allocation.hpp"
#include "mtd/errors.hpp"

namespace mtd {

StreamPlan make_plan(const Dataset& ds, double pretrain_fraction, int chunk_count,
                     std::uint64_t seed) {
    if (!(pretrain_fraction > 0.0 && pretrain_fraction < 1.0)) {
        throw ConfigError("pretrain_fraction must lie in (0, 1), got " +
                          std::to_string(pretrain_fraction));
    }
    if (chunk_count < 1) {
        throw ConfigError("chunk_count must be >= 1, got " + std::to_string(chunk_count));
    }
    validate_dataset(ds);

    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(ds.class_count));
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        by_class[static_cast<std::size_t>(ds.samples[i].label)].push_back(i);
    }
    for (std::size_t j = 0; j < by_class.size(); ++j) {
        if (by_class[j].empty()) {
            throw ConfigError("class " + std::to_string(j) +
                              " has no samples; every class must reach the pretrain split");
        }
    }

    const auto target = static_cast<std::size_t>(
        std::llround(pretrain_fraction * static_cast<double>(ds.size())));
    const std::size_t streamed = ds.size() - target;
    if (streamed < static_cast<std::size_t>(chunk_count)) {
        throw ConfigError("split infeasible: " + std::to_string(streamed) +
                          " streamed samples cannot fill " + std::to_string(chunk_count) +
                          " non-empty chunks");
    }

    std::vector<std::size_t> sizes(by_class.size());
    for (std::size_t j = 0; j < by_class.size(); ++j) sizes[j] = by_class[j].size();
    const std::vector<std::size_t> counts = detail::proportional_counts(sizes, target, 1);

    StreamPlan plan;
    plan.pretrain_fraction = pretrain_fraction;
    plan.chunk_count = chunk_count;
    plan.seed = seed;
    plan.pretrain_indices.reserve(target);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> pool;
    pool.reserve(streamed);
    for (std::size_t j = 0; j < by_class.size(); ++j) {
        std::shuffle(by_class[j].begin(), by_class[j].end(), rng);
        plan.pretrain_indices.insert(plan.pretrain_indices.end(), by_class[j].begin(),
                                     by_class[j].begin() + static_cast<std::ptrdiff_t>(counts[j]));
        pool.insert(pool.end(), by_class[j].begin() + static_cast<std::ptrdiff_t>(counts[j]),
                    by_class[j].end());
    }
    std::sort(plan.pretrain_indices.begin(), plan.pretrain_indices.end());

    // One shuffle fixes the stream order for every method run on this plan.
    std::shuffle(pool.begin(), pool.end(), rng);

    plan.chunks.resize(static_cast<std::size_t>(chunk_count));
    const std::size_t base = streamed / static_cast<std::size_t>(chunk_count);
    const std::size_t extra = streamed % static_cast<std::size_t>(chunk_count);
    std::size_t cursor = 0;
    for (std::size_t k = 0; k < plan.chunks.size(); ++k) {
        const std::size_t len = base + (k < extra ? 1 : 0);
        plan.chunks[k].assign(pool.begin() + static_cast<std::ptrdiff_t>(cursor),
                              pool.begin() + static_cast<std::ptrdiff_t>(cursor + len));
        cursor += len;
    }
    return plan;
}

std::uint64_t plan_hash(const StreamPlan& plan) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    auto mix = [&h](std::uint64_t value) {
        for (int b = 0; b < 8; ++b) {
            h ^= (value >> (8 * b)) & 0xffULL;
            h *= 0x100000001b3ULL;
        }
    };
    mix(plan.pretrain_indices.size());
    for (std::size_t idx : plan.pretrain_indices) mix(idx);
    mix(plan.chunks.size());
    for (const auto& chunk : plan.chunks) {
        mix(chunk.size());
        for (std::size_t idx : chunk) mix(idx);
    }
    return h;
}

std::vector<LabeledSample> gather(const Dataset& ds, std::span<const std::size_t> indices) {
    std::vector<LabeledSample> out;
    out.reserve(indices.size());
    for (std::size_t idx : indices) {
        if (idx >= ds.samples.size()) {
            throw ConfigError("plan index " + std::to_string(idx) + " outside dataset of size " +
                              std::to_string(ds.samples.size()));
        }
        out.push_back(ds.samples[idx]);
    }
    return out;
}

}  // namespace mtd
