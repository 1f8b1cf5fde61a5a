#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "mtd/dataset.hpp"
#include "mtd/errors.hpp"
#include "mtd/experiment.hpp"
#include "mtd/report_io.hpp"
#include "mtd/stream.hpp"
#include "mtd/update.hpp"

namespace {

using namespace mtd;

struct GenFlags {
    int classes = 10;
    int width = 64;
    int per_class = 600;
    double spread = 0.35;
    std::uint64_t seed = 0;
    std::string output;
};

struct RunFlags {
    std::string input;
    std::string eval_path;           // optional explicit eval file
    double eval_fraction = 1.0 / 6;  // held-out share when no eval file is given
    std::string method = "mtd";
    std::vector<double> epsilons;  // sweep only
    double epsilon = 1e-4;
    std::string variant = "projected";
    double lr = 1e-3;
    double decay = 1e-6;
    int pretrain_epochs = 20;
    int chunks = 10;
    double fraction = 0.1;
    std::uint64_t seed = 0;
    std::string output;
    std::string format = "both";
};

const CLI::Validator OpenUnit(
    [](std::string& s) -> std::string {
        try {
            const double v = std::stod(s);
            if (v > 0.0 && v < 1.0) return {};
        } catch (const std::exception&) {
        }
        return std::string("Value ") + s + " must lie strictly between 0 and 1";
    },
    "FLOAT in (0,1)");

UpdateVariant parse_variant(const std::string& name) {
    return name == "plain" ? UpdateVariant::Plain : UpdateVariant::Projected;
}

bool wants_json(const RunFlags& f) { return f.format != "csv"; }
bool wants_csv(const RunFlags& f) { return f.format != "json"; }

// Loads the training pool and the eval set: either an explicit eval file with
// matching geometry, or a seeded stratified holdout of the input.
std::pair<Dataset, Dataset> load_split(const RunFlags& f) {
    Dataset pool = load_features(f.input);
    if (f.eval_path.empty()) {
        return split_holdout(pool, f.eval_fraction, f.seed);
    }
    Dataset eval_set = load_features(f.eval_path);
    if (eval_set.class_count != pool.class_count || eval_set.width != pool.width) {
        throw ConfigError("eval set is c=" + std::to_string(eval_set.class_count) +
                          " l=" + std::to_string(eval_set.width) + " but input is c=" +
                          std::to_string(pool.class_count) + " l=" + std::to_string(pool.width));
    }
    return {std::move(pool), std::move(eval_set)};
}

SgdConfig pretrain_config(const RunFlags& f) {
    return {f.lr, f.decay, f.pretrain_epochs, f.seed};
}

Method make_method(const RunFlags& f, double epsilon) {
    if (f.method == "finetune") {
        return FineTuneMethod{{f.lr, f.decay, 1, f.seed}};
    }
    check_epsilon(epsilon);
    return MtdMethod{{epsilon, parse_variant(f.variant)}};
}

void print_report(const RunReport& rep) {
    std::printf("method=%s dataset=%s plan_seed=%llu\n", rep.method.c_str(),
                rep.dataset_name.c_str(), static_cast<unsigned long long>(rep.plan_seed));
    std::printf("initial accuracy: %.4f\n", rep.initial_accuracy);
    std::printf("chunk  accuracy  seconds      mean_loss\n");
    for (std::size_t k = 0; k < rep.per_chunk_accuracy.size(); ++k) {
        std::printf("%5zu  %8.4f  %11.6f  %9.4f\n", k + 1, rep.per_chunk_accuracy[k],
                    rep.per_chunk_wall_time[k], rep.per_chunk_mean_loss[k]);
    }
}

int cmd_gen_data(const GenFlags& f) {
    const Dataset ds = generate_synthetic(f.classes, f.width, f.per_class, f.spread, f.seed);
    save_features(ds, f.output);
    std::printf("wrote %s: n=%zu c=%d l=%d\n", f.output.c_str(), ds.size(), ds.class_count,
                ds.width);
    return 0;
}

int cmd_run(const RunFlags& f) {
    const auto [train, eval_set] = load_split(f);
    const StreamPlan plan = make_plan(train, f.fraction, f.chunks, f.seed);
    const RunReport rep =
        run_experiment(train, plan, make_method(f, f.epsilon), eval_set, pretrain_config(f));
    print_report(rep);
    if (wants_json(f)) {
        write_report_json(rep, f.output + ".json");
        std::printf("wrote %s.json\n", f.output.c_str());
    }
    if (wants_csv(f)) {
        write_report_csv(rep, f.output + ".csv");
        std::printf("wrote %s.csv\n", f.output.c_str());
    }
    return 0;
}

int cmd_sweep(const RunFlags& f) {
    for (double eps : f.epsilons) check_epsilon(eps);
    const auto [train, eval_set] = load_split(f);
    const StreamPlan plan = make_plan(train, f.fraction, f.chunks, f.seed);
    std::vector<std::pair<double, RunReport>> runs;
    for (double eps : f.epsilons) {
        std::printf("--- epsilon=%g ---\n", eps);
        RunReport rep =
            run_experiment(train, plan, make_method(f, eps), eval_set, pretrain_config(f));
        print_report(rep);
        runs.emplace_back(eps, std::move(rep));
    }
    if (wants_json(f)) {
        write_sweep_json(runs, f.output + ".json");
        std::printf("wrote %s.json\n", f.output.c_str());
    }
    if (wants_csv(f)) {
        write_sweep_csv(runs, f.output + ".csv");
        std::printf("wrote %s.csv\n", f.output.c_str());
    }
    return 0;
}

int cmd_compare(const RunFlags& f) {
    check_epsilon(f.epsilon);
    const auto [train, eval_set] = load_split(f);
    const StreamPlan plan = make_plan(train, f.fraction, f.chunks, f.seed);
    const SgdConfig pre = pretrain_config(f);

    const Method mtd_method = MtdMethod{{f.epsilon, parse_variant(f.variant)}};
    const Method ft_method = FineTuneMethod{{f.lr, f.decay, 1, f.seed}};
    const RunReport mtd_rep = run_experiment(train, plan, mtd_method, eval_set, pre);
    const RunReport ft_rep = run_experiment(train, plan, ft_method, eval_set, pre);

    std::printf("chunk  mtd_acc  ft_acc   mtd_sec      ft_sec\n");
    for (std::size_t k = 0; k < mtd_rep.per_chunk_accuracy.size(); ++k) {
        std::printf("%5zu  %7.4f  %7.4f  %11.6f  %11.6f\n", k + 1,
                    mtd_rep.per_chunk_accuracy[k], ft_rep.per_chunk_accuracy[k],
                    mtd_rep.per_chunk_wall_time[k], ft_rep.per_chunk_wall_time[k]);
    }
    const TimingSummary mt = summarize_timing(mtd_rep);
    const TimingSummary ft = summarize_timing(ft_rep);
    std::printf("mtd      %.6f +/- %.6f s per chunk\n", mt.mean, mt.stddev);
    std::printf("finetune %.6f +/- %.6f s per chunk\n", ft.mean, ft.stddev);
    if (mt.mean > 0.0) std::printf("speedup  %.2fx\n", ft.mean / mt.mean);

    if (wants_json(f)) {
        write_compare_json(mtd_rep, ft_rep, f.output + ".json");
        std::printf("wrote %s.json\n", f.output.c_str());
    }
    if (wants_csv(f)) {
        write_compare_csv(mtd_rep, ft_rep, f.output + ".csv");
        std::printf("wrote %s.csv\n", f.output.c_str());
    }
    return 0;
}

// Flags shared by run/sweep/compare. `with_method` gates the flags that only
// make sense when the user picks one method.
void add_run_flags(CLI::App& cmd, RunFlags& f, bool with_method) {
    cmd.add_option("-i,--input", f.input, "FEATSET v1 feature file")->required();
    cmd.add_option("--eval", f.eval_path, "separate FEATSET eval file (default: holdout split)");
    cmd.add_option("--eval-fraction", f.eval_fraction, "holdout share when no --eval is given")
        ->capture_default_str()
        ->check(OpenUnit);
    if (with_method) {
        cmd.add_option("--method", f.method, "adaptation method")
            ->check(CLI::IsMember({"mtd", "finetune"}))
            ->capture_default_str();
    }
    cmd.add_option("--variant", f.variant, "move-to-data update variant")
        ->check(CLI::IsMember({"plain", "projected"}))
        ->capture_default_str();
    cmd.add_option("--lr", f.lr, "SGD initial learning rate")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--decay", f.decay, "SGD time-based learning-rate decay")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd.add_option("--pretrain-epochs", f.pretrain_epochs, "pretraining passes")
        ->capture_default_str()
        ->check(CLI::Range(1, 100000));
    cmd.add_option("-N,--chunks", f.chunks, "number of stream chunks")
        ->capture_default_str()
        ->check(CLI::Range(1, 1000000));
    cmd.add_option("--fraction", f.fraction, "pretraining fraction of the training pool")
        ->capture_default_str()
        ->check(OpenUnit);
    cmd.add_option("--seed", f.seed, "seed for split, plan and pretraining")
        ->capture_default_str();
    cmd.add_option("-o,--output", f.output, "report base path (suffixes .json/.csv appended)")
        ->required();
    cmd.add_option("--format", f.format, "which report files to write")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continual last-layer adaptation: move-to-data vs SGD fine-tuning"};
    app.require_subcommand(1);

    GenFlags gen;
    CLI::App* gen_cmd = app.add_subcommand("gen-data", "generate a synthetic feature file");
    gen_cmd->add_option("-c,--classes", gen.classes)->capture_default_str()->check(
        CLI::Range(2, 100000));
    gen_cmd->add_option("-l,--width", gen.width)->capture_default_str()->check(
        CLI::Range(2, 1000000));
    gen_cmd->add_option("-p,--per-class", gen.per_class)->capture_default_str()->check(
        CLI::Range(1, 10000000));
    gen_cmd->add_option("-s,--spread", gen.spread, "per-coordinate cluster sigma")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
    gen_cmd->add_option("-o,--output", gen.output, "FEATSET file to write")->required();

    RunFlags run_f;
    CLI::App* run_cmd = app.add_subcommand("run", "run one adaptation experiment");
    add_run_flags(*run_cmd, run_f, true);
    run_cmd->add_option("--epsilon", run_f.epsilon, "move-to-data step size")
        ->capture_default_str()
        ->check(OpenUnit);

    RunFlags sweep_f;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "run move-to-data across several epsilon values");
    add_run_flags(*sweep_cmd, sweep_f, false);
    sweep_cmd
        ->add_option("--epsilon", sweep_f.epsilons,
                     "epsilon values to sweep (default 0.1 0.01 0.001 0.0001)")
        ->check(OpenUnit);

    RunFlags cmp_f;
    CLI::App* cmp_cmd =
        app.add_subcommand("compare", "run move-to-data and fine-tuning on the same plan");
    add_run_flags(*cmp_cmd, cmp_f, false);
    cmp_cmd->add_option("--epsilon", cmp_f.epsilon, "move-to-data step size")
        ->capture_default_str()
        ->check(OpenUnit);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*gen_cmd) return cmd_gen_data(gen);
        if (*run_cmd) return cmd_run(run_f);
        if (*sweep_cmd) {
            if (sweep_f.epsilons.empty()) sweep_f.epsilons = {0.1, 0.01, 0.001, 0.0001};
            return cmd_sweep(sweep_f);
        }
        if (*cmp_cmd) return cmd_compare(cmp_f);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;  // unreachable with require_subcommand(1)
}
