#include "mtd/update.hpp"

#include <cmath>
#include <string>

#include "mtd/errors.hpp"

namespace mtd {

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw ConfigError("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
    }
}

bool move_to_data_plain(LastLayer& model, const LabeledSample& sample, const UpdateConfig& cfg) {
    check_epsilon(cfg.epsilon);
    check_sample(model, sample);
    std::span<double> w = model.row(sample.label);
    const FeatureVector& v = sample.features;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] += (v[i] - w[i]) * cfg.epsilon;
    }
    return true;
}

bool move_to_data_projected(LastLayer& model, const LabeledSample& sample, const UpdateConfig& cfg) {
    check_epsilon(cfg.epsilon);
    check_sample(model, sample);
    std::span<double> w = model.row(sample.label);
    const FeatureVector& v = sample.features;
    const double w_norm = norm(w);
    const double v_norm = norm(v);
    if (w_norm == 0.0 || v_norm == 0.0) {
        return false;  // projection target undefined; leave the row alone
    }
    const double scale = w_norm / v_norm;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] += (scale * v[i] - w[i]) * cfg.epsilon;
    }
    return true;
}

bool move_to_data(LastLayer& model, const LabeledSample& sample, const UpdateConfig& cfg) {
    return cfg.variant == UpdateVariant::Plain ? move_to_data_plain(model, sample, cfg)
                                               : move_to_data_projected(model, sample, cfg);
}

UpdateStats apply_stream(LastLayer& model, std::span<const LabeledSample> samples,
                         const UpdateConfig& cfg, UpdateTrace* trace) {
    check_epsilon(cfg.epsilon);
    if (trace) {
        trace->checkpoint_rows.clear();
        trace->steps.clear();
        for (int j = 0; j < model.class_count(); ++j) {
            const auto row = model.row(j);
            trace->checkpoint_rows.emplace_back(row.begin(), row.end());
        }
    }
    UpdateStats stats;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        try {
            check_sample(model, samples[i]);
        } catch (const DimensionError& e) {
            throw DimensionError("stream position " + std::to_string(i) + ": " + e.what());
        }
        if (move_to_data(model, samples[i], cfg)) {
            ++stats.applied;
            if (trace) trace->steps.emplace_back(samples[i].label, samples[i].features);
        } else {
            ++stats.skipped_degenerate;
        }
    }
    return stats;
}

std::vector<double> closed_form_oracle(std::span<const double> w0,
                                       std::span<const FeatureVector> vs, double epsilon) {
    check_epsilon(epsilon);
    const std::size_t n = vs.size();
    std::vector<double> out(w0.size());
    const double keep = std::pow(1.0 - epsilon, static_cast<double>(n));
    for (std::size_t k = 0; k < w0.size(); ++k) out[k] = keep * w0[k];
    for (std::size_t i = 0; i < n; ++i) {
        if (vs[i].size() != w0.size()) {
            throw DimensionError("oracle: vector " + std::to_string(i) + " has length " +
                                 std::to_string(vs[i].size()) + ", expected " +
                                 std::to_string(w0.size()));
        }
        const double coef = epsilon * std::pow(1.0 - epsilon, static_cast<double>(n - 1 - i));
        for (std::size_t k = 0; k < w0.size(); ++k) out[k] += coef * vs[i][k];
    }
    return out;
}

}  // namespace mtd
