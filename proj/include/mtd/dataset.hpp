#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mtd/model.hpp"

namespace mtd {

struct Dataset {
    std::string name;
    int class_count = 0;
    int width = 0;
    std::vector<LabeledSample> samples;

    std::size_t size() const { return samples.size(); }
};

// Checks every sample against the declared geometry: feature length, label
// range, finite entries. Throws DimensionError naming the first bad sample.
void validate_dataset(const Dataset& ds);

// class_count Gaussian clusters around unit-norm mean directions kept at
// least 45 degrees apart, per_class samples each, per-coordinate sigma
// cluster_spread. Deterministic for a fixed seed. Throws ConfigError when
// that many separated directions cannot be placed in R^width.
Dataset generate_synthetic(int class_count, int width, int per_class, double cluster_spread,
                           std::uint64_t seed);

// FEATSET v1 text format:
//   FEATSET v1 c=<int> l=<int> n=<int>
//   <label>,<f_1>,...,<f_l>        (n data records)
// Rejects wrong token counts, labels outside [0,c), non-finite values and
// record-count mismatches, naming the offending record.
Dataset load_features(const std::filesystem::path& path);

// Writes the FEATSET v1 file atomically (temp file + rename). Doubles are
// printed in shortest round-trip form, so save/load is lossless.
void save_features(const Dataset& ds, const std::filesystem::path& path);

// Seeded stratified split into (remainder, held-out eval set). Class shares
// follow the overall eval_fraction up to rounding.
std::pair<Dataset, Dataset> split_holdout(const Dataset& ds, double eval_fraction,
                                          std::uint64_t seed);

}  // namespace mtd
