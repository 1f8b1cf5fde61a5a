#include "mtd/sgd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "mtd/errors.hpp"

namespace mtd {

namespace {

constexpr double kLossFloor = 1e-15;

void check_sgd_config(const SgdConfig& cfg) {
    if (!(cfg.initial_lr > 0.0)) {
        throw ConfigError("initial_lr must be positive, got " + std::to_string(cfg.initial_lr));
    }
    if (cfg.decay < 0.0) {
        throw ConfigError("decay must be non-negative, got " + std::to_string(cfg.decay));
    }
    if (cfg.epochs < 1) {
        throw ConfigError("epochs must be >= 1, got " + std::to_string(cfg.epochs));
    }
}

}  // namespace

std::vector<double> softmax(std::span<const double> logits) {
    for (double z : logits) {
        if (!std::isfinite(z)) throw DimensionError("softmax: non-finite logit");
    }
    const double zmax = *std::max_element(logits.begin(), logits.end());
    std::vector<double> probs(logits.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < logits.size(); ++j) {
        probs[j] = std::exp(logits[j] - zmax);
        sum += probs[j];
    }
    for (double& p : probs) p /= sum;
    return probs;
}

double cross_entropy(std::span<const double> probs, int label) {
    if (label < 0 || label >= static_cast<int>(probs.size())) {
        throw DimensionError("cross_entropy: label " + std::to_string(label) + " outside [0, " +
                             std::to_string(probs.size()) + ")");
    }
    return -std::log(std::max(probs[static_cast<std::size_t>(label)], kLossFloor));
}

double sample_loss(const LastLayer& model, const LabeledSample& sample) {
    check_sample(model, sample);
    return cross_entropy(softmax(forward(model, sample.features)), sample.label);
}

double lr_schedule(const SgdConfig& cfg, long long iteration) {
    return cfg.initial_lr / (1.0 + cfg.decay * static_cast<double>(iteration));
}

void sgd_step(LastLayer& model, const LabeledSample& sample, double lr) {
    check_sample(model, sample);
    if (!(lr > 0.0)) {
        throw ConfigError("sgd_step: learning rate must be positive, got " + std::to_string(lr));
    }
    const std::vector<double> probs = softmax(forward(model, sample.features));
    const FeatureVector& v = sample.features;
    for (int j = 0; j < model.class_count(); ++j) {
        const double grad_logit = probs[j] - (j == sample.label ? 1.0 : 0.0);
        std::span<double> w = model.row(j);
        for (std::size_t i = 0; i < w.size(); ++i) {
            w[i] -= lr * grad_logit * v[i];
        }
    }
}

PretrainResult pretrain(std::span<const LabeledSample> samples, int class_count, int width,
                        const SgdConfig& cfg) {
    check_sgd_config(cfg);
    if (samples.empty()) {
        throw ConfigError("pretrain: empty sample set");
    }
    PretrainResult result{LastLayer(class_count, width), 0.0};
    LastLayer& model = result.model;

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(cfg.seed);

    long long iteration = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t idx : order) {
            sgd_step(model, samples[idx], lr_schedule(cfg, iteration));
            ++iteration;
        }
    }

    double total = 0.0;
    for (const LabeledSample& s : samples) total += sample_loss(model, s);
    result.final_mean_loss = total / static_cast<double>(samples.size());
    return result;
}

long long fine_tune_chunk(LastLayer& model, std::span<const LabeledSample> chunk,
                          const SgdConfig& cfg, long long iteration) {
    check_sgd_config(cfg);
    for (const LabeledSample& s : chunk) {
        sgd_step(model, s, lr_schedule(cfg, iteration));
        ++iteration;
    }
    return iteration;
}

}  // namespace mtd
