#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mtd/experiment.hpp"

namespace mtd {

struct TimingSummary {
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation across chunks
};

TimingSummary summarize_timing(const RunReport& report);

nlohmann::json report_to_json(const RunReport& report);

// All writers go through write_text_atomic.
void write_report_json(const RunReport& report, const std::filesystem::path& path);

// One row per chunk: chunk,accuracy,seconds,mean_loss
void write_report_csv(const RunReport& report, const std::filesystem::path& path);

// Sweep rows: epsilon,chunk,accuracy
void write_sweep_csv(const std::vector<std::pair<double, RunReport>>& runs,
                     const std::filesystem::path& path);
void write_sweep_json(const std::vector<std::pair<double, RunReport>>& runs,
                      const std::filesystem::path& path);

// Side-by-side rows plus a timing block with the fine-tune/mtd speedup.
nlohmann::json comparison_to_json(const RunReport& mtd_report, const RunReport& finetune_report);
void write_compare_json(const RunReport& mtd_report, const RunReport& finetune_report,
                        const std::filesystem::path& path);
void write_compare_csv(const RunReport& mtd_report, const RunReport& finetune_report,
                       const std::filesystem::path& path);

}  // namespace mtd
