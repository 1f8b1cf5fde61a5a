#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mtd/model.hpp"

namespace mtd {

enum class UpdateVariant { Plain, Projected };

struct UpdateConfig {
    double epsilon = 1e-4;  // step size, must lie in (0, 1)
    UpdateVariant variant = UpdateVariant::Projected;
};

struct UpdateStats {
    std::size_t applied = 0;
    std::size_t skipped_degenerate = 0;  // projected updates with a zero-norm feature or row
};

// Throws ConfigError unless epsilon lies in (0, 1). Every update entry point
// calls this; exposed so front ends can validate before running anything.
void check_epsilon(double epsilon);

// Row snapshots taken when a stream starts plus every (class, feature) move
// actually applied, in order. Enough to replay any single row through the
// closed-form expansion.
struct UpdateTrace {
    std::vector<std::vector<double>> checkpoint_rows;
    std::vector<std::pair<int, FeatureVector>> steps;
};

// Moves the labeled class row straight toward the feature vector:
//   w' = w + (v - w) * epsilon.
// Always applies; returns true.
bool move_to_data_plain(LastLayer& model, const LabeledSample& sample, const UpdateConfig& cfg);

// Moves the labeled class row toward the feature direction scaled to the
// row's own norm:
//   w' = w + (|w| * v/|v| - w) * epsilon.
// Skips (returns false) when the feature or the row has zero norm.
bool move_to_data_projected(LastLayer& model, const LabeledSample& sample, const UpdateConfig& cfg);

// Dispatches on cfg.variant.
bool move_to_data(LastLayer& model, const LabeledSample& sample, const UpdateConfig& cfg);

// Folds the single-sample update over the stream in order. Errors carry the
// offending sample's position.
UpdateStats apply_stream(LastLayer& model, std::span<const LabeledSample> samples,
                         const UpdateConfig& cfg, UpdateTrace* trace = nullptr);

// Non-recursive expansion of n plain moves on one row:
//   w_n = (1-eps)^n w0 + sum_{i=1..n} eps (1-eps)^{n-i} v_i.
// Evaluated term by term, independently of the sequential fold.
std::vector<double> closed_form_oracle(std::span<const double> w0,
                                       std::span<const FeatureVector> vs, double epsilon);

}  // namespace mtd
