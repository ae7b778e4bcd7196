// SPDX-License-Identifier: Apache-2.0
// Command-line front end: select | evaluate | compare | bench-opt | report.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cbosel/errors.hpp"
#include "cbosel/experiment.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitMissingInput = 2;
constexpr int kExitConfig = 64;

struct Flags {
    std::string config_file;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
};

void add_flag(CLI::App& app, Flags& flags, const std::string& key, const std::string& help) {
    flags.options[key] = app.add_option("--" + key, flags.values[key], help);
}

void add_experiment_flags(CLI::App& app, Flags& flags) {
    app.add_option("--config", flags.config_file, "key = value configuration file; flags override it");
    add_flag(app, flags, "dataset", "ucihar, wisdm or synthetic (default synthetic)");
    add_flag(app, flags, "data-dir", "dataset directory (WISDM: directory or raw file)");
    add_flag(app, flags, "optimizer", "cbo, pso, ff or none (default cbo)");
    add_flag(app, flags, "population", "optimizer population (default 10)");
    add_flag(app, flags, "iterations", "optimizer iterations (default 25)");
    add_flag(app, flags, "learning-percentage", "training share of the pooled data, in percent");
    add_flag(app, flags, "classifier", "gru, knn or nn (default gru)");
    add_flag(app, flags, "hidden-size", "hidden units (default 32 for gru, 64 for nn)");
    add_flag(app, flags, "epochs", "training epochs for the final classifier (default 60)");
    add_flag(app, flags, "selection-epochs", "training epochs per candidate mask (default 15)");
    add_flag(app, flags, "batch-size", "mini-batch size (default 32)");
    add_flag(app, flags, "learning-rate", "SGD learning rate (default 0.01)");
    add_flag(app, flags, "chunk-size", "features per GRU timestep, 0 = one step (default 0)");
    add_flag(app, flags, "knn-k", "neighbours for knn (default 5)");
    add_flag(app, flags, "seed", "master seed (default 1)");
    add_flag(app, flags, "jobs", "fitness worker threads, 0 = all cores (default 0)");
    add_flag(app, flags, "output", "output file");
    add_flag(app, flags, "train-limit", "stratified subsample of the training split, 0 = all");
    add_flag(app, flags, "test-limit", "stratified subsample of the test split, 0 = all");
    add_flag(app, flags, "synthetic-samples", "rows of the synthetic dataset (default 400)");
    add_flag(app, flags, "window-length", "WISDM window length in samples (default 200)");
    add_flag(app, flags, "window-overlap", "WISDM window overlap fraction (default 0.5)");
}

cbosel::ExperimentConfig resolve(const Flags& flags) {
    cbosel::ExperimentConfig config;
    if (!flags.config_file.empty()) {
        config.load_file(flags.config_file);
    }
    for (const auto& [key, option] : flags.options) {
        if (option->count() > 0) {
            config.set(key, flags.values.at(key));
        }
    }
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wrapper feature selection with colliding bodies optimization"};
    app.require_subcommand(1);

    Flags select_flags, evaluate_flags, compare_flags, bench_flags;
    auto* select = app.add_subcommand("select", "search for a feature mask and write it as JSON");
    add_experiment_flags(*select, select_flags);

    auto* evaluate = app.add_subcommand("evaluate", "train on a (masked) split and write one report row");
    add_experiment_flags(*evaluate, evaluate_flags);
    add_flag(*evaluate, evaluate_flags, "mask", "selection JSON; omitted = all features");
    add_flag(*evaluate, evaluate_flags, "label", "algorithm label for the report row");

    auto* compare = app.add_subcommand("compare", "run a comparison grid and write CSV plus summary");
    add_experiment_flags(*compare, compare_flags);
    add_flag(*compare, compare_flags, "axis", "optimizers, classifiers or features (default features)");

    auto* bench = app.add_subcommand("bench-opt", "run every optimizer on a closed-form test function");
    add_experiment_flags(*bench, bench_flags);
    add_flag(*bench, bench_flags, "function", "sphere, rastrigin or rosenbrock (default sphere)");
    add_flag(*bench, bench_flags, "dim", "dimension (default 10)");

    std::vector<std::string> report_inputs;
    std::string report_output;
    auto* report = app.add_subcommand("report", "merge report CSVs into a markdown table");
    report->add_option("csv", report_inputs, "report CSV files")->required();
    report->add_option("--output", report_output, "table file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (select->parsed()) {
            cbosel::cmd_select(resolve(select_flags), std::cout);
        } else if (evaluate->parsed()) {
            cbosel::cmd_evaluate(resolve(evaluate_flags), std::cout);
        } else if (compare->parsed()) {
            cbosel::cmd_compare(resolve(compare_flags), std::cout);
        } else if (bench->parsed()) {
            cbosel::cmd_bench_opt(resolve(bench_flags), std::cout);
        } else if (report->parsed()) {
            std::vector<std::filesystem::path> paths(report_inputs.begin(), report_inputs.end());
            if (report_output.empty()) {
                cbosel::cmd_report(paths, std::cout);
            } else {
                std::ofstream out(report_output, std::ios::binary);
                if (!out) {
                    throw std::runtime_error("cannot write " + report_output);
                }
                cbosel::cmd_report(paths, out);
            }
        }
    } catch (const cbosel::MissingInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMissingInput;
    } catch (const cbosel::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
