#include "mtd/experiment.hpp"

#include <chrono>
#include <numeric>
#include <string>

#include "mtd/errors.hpp"
#include "mtd/eval.hpp"

namespace mtd {

namespace {

using Clock = std::chrono::steady_clock;

void check_plan_against(const Dataset& ds, const StreamPlan& plan) {
    std::size_t covered = plan.pretrain_indices.size();
    for (const auto& chunk : plan.chunks) covered += chunk.size();
    if (covered != ds.size()) {
        throw ConfigError("plan covers " + std::to_string(covered) + " indices, dataset has " +
                          std::to_string(ds.size()));
    }
}

}  // namespace

std::string method_name(const Method& method) {
    if (std::holds_alternative<MtdMethod>(method)) return "mtd";
    if (std::holds_alternative<FineTuneMethod>(method)) return "finetune";
    return "noop";
}

RunReport run_experiment(const Dataset& train, const StreamPlan& plan, const Method& method,
                         const Dataset& eval_set, const SgdConfig& pretrain_cfg) {
    check_plan_against(train, plan);
    if (train.width != eval_set.width || train.class_count != eval_set.class_count) {
        throw DimensionError("train and eval sets disagree on geometry");
    }

    RunReport report;
    report.method = method_name(method);
    if (const auto* m = std::get_if<MtdMethod>(&method)) report.update_config = m->update;
    if (const auto* f = std::get_if<FineTuneMethod>(&method)) report.sgd_config = f->sgd;
    report.pretrain_config = pretrain_cfg;
    report.dataset_name = train.name;
    report.plan_seed = plan.seed;
    report.plan_hash = plan_hash(plan);

    const std::vector<LabeledSample> pretrain_samples = gather(train, plan.pretrain_indices);
    LastLayer model =
        pretrain(pretrain_samples, train.class_count, train.width, pretrain_cfg).model;
    report.initial_accuracy = accuracy(model, eval_set);

    long long ft_iteration = 0;
    for (std::size_t k = 0; k < plan.chunks.size(); ++k) {
        const std::vector<LabeledSample> chunk = gather(train, plan.chunks[k]);

        const Clock::time_point t0 = Clock::now();
        try {
            if (const auto* m = std::get_if<MtdMethod>(&method)) {
                const UpdateStats stats = apply_stream(model, chunk, m->update);
                report.update_stats.applied += stats.applied;
                report.update_stats.skipped_degenerate += stats.skipped_degenerate;
            } else if (const auto* f = std::get_if<FineTuneMethod>(&method)) {
                ft_iteration = fine_tune_chunk(model, chunk, f->sgd, ft_iteration);
            } else {
                volatile double sink = 0.0;  // keep the walk from being optimized out
                for (const LabeledSample& s : chunk) {
                    sink = sink + (s.features.empty() ? 0.0 : s.features.front());
                }
            }
        } catch (const DimensionError& e) {
            throw DimensionError("chunk " + std::to_string(k + 1) + ": " + e.what());
        } catch (const ConfigError& e) {
            throw ConfigError("chunk " + std::to_string(k + 1) + ": " + e.what());
        }
        const Clock::time_point t1 = Clock::now();

        report.per_chunk_wall_time.push_back(std::chrono::duration<double>(t1 - t0).count());
        report.per_chunk_accuracy.push_back(accuracy(model, eval_set));
        report.per_chunk_mean_loss.push_back(mean_loss(model, eval_set));
    }
    return report;
}

}  // namespace mtd
