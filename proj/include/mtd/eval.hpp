#pragma once

#include "mtd/dataset.hpp"
#include "mtd/model.hpp"

namespace mtd {

// Read-only metrics over an evaluation set. Parallelized over samples with
// OpenMP when available; counts and per-sample losses are reduced in index
// order, so results do not depend on the worker count.

// Fraction of samples whose predicted class equals the label.
double accuracy(const LastLayer& model, const Dataset& eval_set);

// Mean softmax cross-entropy over the set.
double mean_loss(const LastLayer& model, const Dataset& eval_set);

// Scalar single-thread kernels, kept as the reference the parallel versions
// are tested and benchmarked against.
namespace serial {
double accuracy(const LastLayer& model, const Dataset& eval_set);
double mean_loss(const LastLayer& model, const Dataset& eval_set);
}  // namespace serial

}  // namespace mtd
