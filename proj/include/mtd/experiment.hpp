#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mtd/dataset.hpp"
#include "mtd/sgd.hpp"
#include "mtd/stream.hpp"
#include "mtd/update.hpp"

namespace mtd {

struct MtdMethod {
    UpdateConfig update;
};

struct FineTuneMethod {
    SgdConfig sgd;  // learning-rate schedule continues across chunks
};

// Walks every chunk without touching the weights; measures the loop floor
// the adaptation timers sit on.
struct NoOpMethod {};

using Method = std::variant<MtdMethod, FineTuneMethod, NoOpMethod>;

std::string method_name(const Method& method);

struct RunReport {
    std::string method;
    std::optional<UpdateConfig> update_config;  // echoed for mtd runs
    std::optional<SgdConfig> sgd_config;        // echoed for finetune runs
    SgdConfig pretrain_config;
    std::string dataset_name;
    std::uint64_t plan_seed = 0;
    std::uint64_t plan_hash = 0;
    double initial_accuracy = 0.0;
    std::vector<double> per_chunk_accuracy;
    std::vector<double> per_chunk_wall_time;  // seconds, adaptation loop only
    std::vector<double> per_chunk_mean_loss;
    UpdateStats update_stats;  // mtd runs: applied/skipped counters
};

// Pretrains on the plan's pretrain split, records initial accuracy on
// eval_set, then adapts on each chunk in order with the chosen method.
// Only the adaptation loop is timed; evaluation happens outside the timer.
RunReport run_experiment(const Dataset& train, const StreamPlan& plan, const Method& method,
                         const Dataset& eval_set, const SgdConfig& pretrain_cfg);

}  // namespace mtd
