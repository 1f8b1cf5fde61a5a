#include "mtd/eval.hpp"

#include <cstddef>
#include <string>

#include "mtd/errors.hpp"
#include "mtd/sgd.hpp"

namespace mtd {

namespace {

// All throwing checks happen here, before any parallel region.
void check_eval_input(const LastLayer& model, const Dataset& eval_set) {
    if (eval_set.samples.empty()) {
        throw ConfigError("evaluation set is empty");
    }
    if (eval_set.width != model.width() || eval_set.class_count != model.class_count()) {
        throw DimensionError("evaluation set is c=" + std::to_string(eval_set.class_count) +
                             " l=" + std::to_string(eval_set.width) + ", model is c=" +
                             std::to_string(model.class_count()) + " l=" +
                             std::to_string(model.width()));
    }
    validate_dataset(eval_set);
}

}  // namespace

double accuracy(const LastLayer& model, const Dataset& eval_set) {
    check_eval_input(model, eval_set);
    const auto n = static_cast<std::ptrdiff_t>(eval_set.samples.size());
    long long correct = 0;
#pragma omp parallel for schedule(static) reduction(+ : correct)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const LabeledSample& s = eval_set.samples[static_cast<std::size_t>(i)];
        correct += predict(model, s.features) == s.label ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(n);
}

double mean_loss(const LastLayer& model, const Dataset& eval_set) {
    check_eval_input(model, eval_set);
    const auto n = static_cast<std::ptrdiff_t>(eval_set.samples.size());
    // Per-sample losses land in a buffer and are summed in index order, so
    // the value is identical for any worker count.
    std::vector<double> losses(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        losses[static_cast<std::size_t>(i)] =
            sample_loss(model, eval_set.samples[static_cast<std::size_t>(i)]);
    }
    double total = 0.0;
    for (double x : losses) total += x;
    return total / static_cast<double>(n);
}

namespace serial {

double accuracy(const LastLayer& model, const Dataset& eval_set) {
    check_eval_input(model, eval_set);
    long long correct = 0;
    for (const LabeledSample& s : eval_set.samples) {
        correct += predict(model, s.features) == s.label ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(eval_set.samples.size());
}

double mean_loss(const LastLayer& model, const Dataset& eval_set) {
    check_eval_input(model, eval_set);
    double total = 0.0;
    for (const LabeledSample& s : eval_set.samples) {
        total += sample_loss(model, s);
    }
    return total / static_cast<double>(eval_set.samples.size());
}

}  // namespace serial

}  // namespace mtd
