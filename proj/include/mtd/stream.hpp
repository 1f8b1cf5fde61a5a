#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mtd/dataset.hpp"

namespace mtd {

// Seeded partition of a dataset into a pretraining subset and chunk_count
// ordered chunks. Pretrain and chunk indices are disjoint and together cover
// the dataset; chunk sizes differ by at most one; the pretrain subset keeps
// every class at a share close to the overall fraction.
struct StreamPlan {
    double pretrain_fraction = 0.0;
    int chunk_count = 0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> pretrain_indices;
    std::vector<std::vector<std::size_t>> chunks;
};

StreamPlan make_plan(const Dataset& ds, double pretrain_fraction, int chunk_count,
                     std::uint64_t seed);

// FNV-1a over the plan's index lists; two reports carrying the same hash
// were produced from the same partition and stream order.
std::uint64_t plan_hash(const StreamPlan& plan);

std::vector<LabeledSample> gather(const Dataset& ds, std::span<const std::size_t> indices);

}  // namespace mtd
