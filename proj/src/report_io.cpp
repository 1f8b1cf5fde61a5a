#include "mtd/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "mtd/errors.hpp"
#include "mtd/io_util.hpp"

namespace mtd {

namespace {

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::json sgd_to_json(const SgdConfig& cfg) {
    return {{"initial_lr", cfg.initial_lr},
            {"decay", cfg.decay},
            {"epochs", cfg.epochs},
            {"seed", cfg.seed}};
}

}  // namespace

TimingSummary summarize_timing(const RunReport& report) {
    TimingSummary s;
    const auto& t = report.per_chunk_wall_time;
    if (t.empty()) return s;
    for (double x : t) s.mean += x;
    s.mean /= static_cast<double>(t.size());
    double var = 0.0;
    for (double x : t) var += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(var / static_cast<double>(t.size()));
    return s;
}

nlohmann::json report_to_json(const RunReport& report) {
    nlohmann::json j;
    j["method"] = report.method;
    if (report.update_config) {
        j["epsilon"] = report.update_config->epsilon;
        j["variant"] =
            report.update_config->variant == UpdateVariant::Plain ? "plain" : "projected";
        j["update_stats"] = {{"applied", report.update_stats.applied},
                             {"skipped_degenerate", report.update_stats.skipped_degenerate}};
    }
    if (report.sgd_config) {
        j["sgd"] = sgd_to_json(*report.sgd_config);
    }
    j["pretrain"] = sgd_to_json(report.pretrain_config);
    j["dataset"] = report.dataset_name;
    j["plan_seed"] = report.plan_seed;
    j["plan_hash"] = hash_hex(report.plan_hash);
    j["initial_accuracy"] = report.initial_accuracy;
    j["per_chunk_accuracy"] = report.per_chunk_accuracy;
    j["per_chunk_wall_time"] = report.per_chunk_wall_time;
    j["per_chunk_mean_loss"] = report.per_chunk_mean_loss;
    return j;
}

void write_report_json(const RunReport& report, const std::filesystem::path& path) {
    write_text_atomic(path, report_to_json(report).dump(2) + "\n");
}

void write_report_csv(const RunReport& report, const std::filesystem::path& path) {
    std::string body = "chunk,accuracy,seconds,mean_loss\n";
    for (std::size_t k = 0; k < report.per_chunk_accuracy.size(); ++k) {
        body += std::to_string(k + 1);
        body += ',';
        body += format_double(report.per_chunk_accuracy[k]);
        body += ',';
        body += format_double(report.per_chunk_wall_time[k]);
        body += ',';
        body += format_double(report.per_chunk_mean_loss[k]);
        body += '\n';
    }
    write_text_atomic(path, body);
}

void write_sweep_csv(const std::vector<std::pair<double, RunReport>>& runs,
                     const std::filesystem::path& path) {
    std::string body = "epsilon,chunk,accuracy\n";
    for (const auto& [epsilon, report] : runs) {
        for (std::size_t k = 0; k < report.per_chunk_accuracy.size(); ++k) {
            body += format_double(epsilon);
            body += ',';
            body += std::to_string(k + 1);
            body += ',';
            body += format_double(report.per_chunk_accuracy[k]);
            body += '\n';
        }
    }
    write_text_atomic(path, body);
}

void write_sweep_json(const std::vector<std::pair<double, RunReport>>& runs,
                      const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [epsilon, report] : runs) {
        j.push_back({{"epsilon", epsilon}, {"report", report_to_json(report)}});
    }
    write_text_atomic(path, j.dump(2) + "\n");
}

nlohmann::json comparison_to_json(const RunReport& mtd_report, const RunReport& finetune_report) {
    if (mtd_report.plan_hash != finetune_report.plan_hash) {
        throw ConfigError("comparison requires both runs on the same plan; hashes differ");
    }
    const TimingSummary mtd_t = summarize_timing(mtd_report);
    const TimingSummary ft_t = summarize_timing(finetune_report);
    nlohmann::json j;
    j["plan_hash"] = hash_hex(mtd_report.plan_hash);
    j["mtd"] = report_to_json(mtd_report);
    j["finetune"] = report_to_json(finetune_report);
    j["timing"] = {{"mtd_mean_seconds", mtd_t.mean},
                   {"mtd_std_seconds", mtd_t.stddev},
                   {"finetune_mean_seconds", ft_t.mean},
                   {"finetune_std_seconds", ft_t.stddev},
                   {"speedup", mtd_t.mean > 0.0 ? ft_t.mean / mtd_t.mean : 0.0}};
    return j;
}

void write_compare_json(const RunReport& mtd_report, const RunReport& finetune_report,
                        const std::filesystem::path& path) {
    write_text_atomic(path, comparison_to_json(mtd_report, finetune_report).dump(2) + "\n");
}

void write_compare_csv(const RunReport& mtd_report, const RunReport& finetune_report,
                       const std::filesystem::path& path) {
    if (mtd_report.per_chunk_accuracy.size() != finetune_report.per_chunk_accuracy.size()) {
        throw ConfigError("comparison runs have different chunk counts");
    }
    std::string body = "chunk,mtd_accuracy,mtd_seconds,finetune_accuracy,finetune_seconds\n";
    for (std::size_t k = 0; k < mtd_report.per_chunk_accuracy.size(); ++k) {
        body += std::to_string(k + 1);
        body += ',';
        body += format_double(mtd_report.per_chunk_accuracy[k]);
        body += ',';
        body += format_double(mtd_report.per_chunk_wall_time[k]);
        body += ',';
        body += format_double(finetune_report.per_chunk_accuracy[k]);
        body += ',';
        body += format_double(finetune_report.per_chunk_wall_time[k]);
        body += '\n';
    }
    write_text_atomic(path, body);
}

}  // namespace mtd
