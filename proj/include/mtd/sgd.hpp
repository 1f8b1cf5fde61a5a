#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mtd/model.hpp"

namespace mtd {

struct SgdConfig {
    double initial_lr = 1e-3;
    double decay = 1e-6;     // time-based learning-rate decay
    int epochs = 20;         // pretraining passes over the data
    std::uint64_t seed = 0;  // pretraining shuffle seed
};

// Numerically stable softmax (max-subtracted).
std::vector<double> softmax(std::span<const double> logits);

// -log(probs[label]) with a 1e-15 floor inside the log.
double cross_entropy(std::span<const double> probs, int label);

// Cross-entropy of the model's softmax output on one sample.
double sample_loss(const LastLayer& model, const LabeledSample& sample);

// initial_lr / (1 + decay * iteration); non-increasing for decay >= 0.
double lr_schedule(const SgdConfig& cfg, long long iteration);

// One batch-size-1 step on the softmax cross-entropy:
//   W <- W - lr * (softmax(W v) - onehot(label)) v^T.
// Touches every row, unlike the move-to-data update.
void sgd_step(LastLayer& model, const LabeledSample& sample, double lr);

struct PretrainResult {
    LastLayer model;
    double final_mean_loss = 0.0;  // mean cross-entropy over the training samples
};

// Trains a zero-initialized layer with cfg.epochs passes of seeded, shuffled
// single-sample SGD under lr_schedule. Deterministic for a fixed seed.
PretrainResult pretrain(std::span<const LabeledSample> samples, int class_count, int width,
                        const SgdConfig& cfg);

// One pass over the chunk in arrival order (stream semantics, no shuffling).
// `iteration` is the global step counter the schedule continues from; the
// advanced counter is returned so it can be threaded across chunks.
long long fine_tune_chunk(LastLayer& model, std::span<const LabeledSample> chunk,
                          const SgdConfig& cfg, long long iteration);

}  // namespace mtd
