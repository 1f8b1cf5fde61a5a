#include "mtd/model.hpp"

#include <cmath>
#include <string>

#include "mtd/errors.hpp"

namespace mtd {

LastLayer::LastLayer(int class_count, int width)
    : class_count_(class_count),
      width_(width),
      weights_(static_cast<std::size_t>(class_count) * width, 0.0) {
    if (class_count < 1 || width < 1) {
        throw ConfigError("LastLayer needs class_count >= 1 and width >= 1, got c=" +
                          std::to_string(class_count) + " l=" + std::to_string(width));
    }
}

LastLayer LastLayer::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) {
        throw ConfigError("from_rows: empty weight matrix");
    }
    LastLayer layer(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].size() != rows.front().size()) {
            throw DimensionError("from_rows: ragged row " + std::to_string(j));
        }
        std::copy(rows[j].begin(), rows[j].end(), layer.row(static_cast<int>(j)).begin());
    }
    return layer;
}

double dot(std::span<const double> u, std::span<const double> w) {
    if (u.size() != w.size()) {
        throw DimensionError("dot: length mismatch " + std::to_string(u.size()) + " vs " +
                             std::to_string(w.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * w[i];
    return acc;
}

double norm(std::span<const double> u) {
    double acc = 0.0;
    for (double x : u) acc += x * x;
    return std::sqrt(acc);
}

double cosine(std::span<const double> u, std::span<const double> w) {
    const double nu = norm(u);
    const double nw = norm(w);
    if (nu == 0.0 || nw == 0.0) {
        throw DegenerateVectorError("cosine: zero-norm input");
    }
    return dot(u, w) / (nu * nw);
}

std::vector<double> forward(const LastLayer& model, std::span<const double> v) {
    if (static_cast<int>(v.size()) != model.width()) {
        throw DimensionError("forward: feature length " + std::to_string(v.size()) +
                             " does not match layer width " + std::to_string(model.width()));
    }
    std::vector<double> logits(model.class_count());
    for (int j = 0; j < model.class_count(); ++j) {
        logits[j] = dot(model.row(j), v);
    }
    return logits;
}

int predict(const LastLayer& model, std::span<const double> v) {
    const std::vector<double> logits = forward(model, v);
    int best = 0;
    for (int j = 1; j < static_cast<int>(logits.size()); ++j) {
        if (logits[j] > logits[best]) best = j;  // strict: ties keep the lowest index
    }
    return best;
}

void check_sample(const LastLayer& model, const LabeledSample& sample) {
    if (static_cast<int>(sample.features.size()) != model.width()) {
        throw DimensionError("sample feature length " + std::to_string(sample.features.size()) +
                             " does not match layer width " + std::to_string(model.width()));
    }
    if (sample.label < 0 || sample.label >= model.class_count()) {
        throw DimensionError("sample label " + std::to_string(sample.label) +
                             " outside [0, " + std::to_string(model.class_count()) + ")");
    }
}

}  // namespace mtd
