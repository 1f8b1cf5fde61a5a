#pragma once

#include <span>
#include <vector>

namespace mtd {

// Penultimate-layer activation of one input sample.
using FeatureVector = std::vector<double>;

struct LabeledSample {
    FeatureVector features;
    int label = 0;  // class index in [0, class_count)
};

// Final fully-connected layer: class_count rows of width entries, no bias.
// Row j is the weight vector of class j; the forward pass is logits = W v.
class LastLayer {
public:
    LastLayer() = default;
    LastLayer(int class_count, int width);  // zero-initialized weights

    static LastLayer from_rows(const std::vector<std::vector<double>>& rows);

    int class_count() const { return class_count_; }
    int width() const { return width_; }

    std::span<double> row(int j) {
        return {weights_.data() + static_cast<std::size_t>(j) * width_,
                static_cast<std::size_t>(width_)};
    }
    std::span<const double> row(int j) const {
        return {weights_.data() + static_cast<std::size_t>(j) * width_,
                static_cast<std::size_t>(width_)};
    }

    std::vector<double>& weights() { return weights_; }
    const std::vector<double>& weights() const { return weights_; }

    bool operator==(const LastLayer&) const = default;

private:
    int class_count_ = 0;
    int width_ = 0;
    std::vector<double> weights_;  // row-major, class_count x width
};

double dot(std::span<const double> u, std::span<const double> w);
double norm(std::span<const double> u);

// dot(u, w) / (|u| |w|); throws DegenerateVectorError on a zero-norm input.
double cosine(std::span<const double> u, std::span<const double> w);

// logits = W v, one entry per class.
std::vector<double> forward(const LastLayer& model, std::span<const double> v);

// argmax of the logits; ties go to the lowest class index.
int predict(const LastLayer& model, std::span<const double> v);

// Throws DimensionError when the sample does not fit the model geometry.
void check_sample(const LastLayer& model, const LabeledSample& sample);

}  // namespace mtd
