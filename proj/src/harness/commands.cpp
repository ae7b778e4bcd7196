// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "cbosel/errors.hpp"
#include "cbosel/experiment.hpp"

namespace cbosel {
namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return out;
}

std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::filesystem::path output_or(const ExperimentConfig& config, const std::string& fallback) {
    return config.output.empty() ? std::filesystem::path(fallback) : config.output;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw MissingInputError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string report_csv(const std::vector<ReportRow>& rows) {
    std::string out = report_csv_header() + '\n';
    for (const auto& row : rows) {
        out += report_csv_row(row) + '\n';
    }
    return out;
}

void log_row(std::ostream& log, const ReportRow& row) {
    log << "  " << row.algorithm << ": accuracy " << fixed6(row.metrics.summary.accuracy) << ", F1 "
        << fixed6(row.metrics.summary.f1) << ", features " << row.features << " (" << fixed6(row.wall_seconds)
        << " s)\n";
    log << "    Accuracy is overall (trace / total); other columns average one-vs-rest classes\n";
    if (row.metrics.zero_denominator) {
        log << "    note: some ratios had a zero denominator and are reported as 0\n";
    }
}

std::string classifier_label(ClassifierKind kind) { return upper(to_string(kind)); }

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        if (!field.empty() && field.back() == '\r') {
            field.pop_back();
        }
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

} // namespace

void cmd_select(const ExperimentConfig& config, std::ostream& log) {
    const auto data = prepare_data(config);
    const auto result = select_features(data.train, config.selection_config(config.optimizer));
    const auto path = output_or(config, "selection.json");
    write_file(path, selection_to_json(result));

    log << "optimizer " << result.optimizer << ", seed " << result.seed << "\n";
    log << "selected " << result.mask.count << " of " << result.mask.size() << " features, validation accuracy "
        << fixed6(result.accuracy) << " after " << result.trace.evaluations << " evaluations\n";
    log << "columns:";
    for (auto c : result.mask.columns()) {
        log << ' ' << (c < data.train.feature_names.size() ? data.train.feature_names[c] : std::to_string(c));
    }
    log << "\nwrote " << path.string() << "\n";
}

void cmd_evaluate(const ExperimentConfig& config, std::ostream& log) {
    const auto data = prepare_data(config);
    FeatureMask mask = FeatureMask::all(data.train.cols);
    std::string algorithm = "All Features";
    if (config.mask_file) {
        const auto selection = selection_from_json(read_file(*config.mask_file));
        mask = selection.mask;
        if (selection.optimizer != "none") {
            algorithm = upper(selection.optimizer) + "-" + classifier_label(config.classifier);
        }
    }
    const auto row = evaluate_mask(config, data, mask, config.classifier, config.label.value_or(algorithm));
    const auto path = output_or(config, "evaluation.csv");
    write_file(path, report_csv({row}));
    log_row(log, row);
    log << "wrote " << path.string() << "\n";
}

void cmd_compare(const ExperimentConfig& config, std::ostream& log) {
    const auto data = prepare_data(config);
    std::vector<ReportRow> rows;
    std::size_t reference = 0;

    if (config.axis == "optimizers") {
        for (auto kind : {OptimizerKind::cbo, OptimizerKind::pso, OptimizerKind::ff}) {
            const auto sel = select_features(data.train, config.selection_config(kind));
            rows.push_back(evaluate_mask(config, data, sel.mask, config.classifier,
                                         upper(to_string(kind)) + "-" + classifier_label(config.classifier)));
        }
    } else if (config.axis == "classifiers") {
        const auto sel = select_features(data.train, config.selection_config(OptimizerKind::cbo));
        for (auto kind : {ClassifierKind::gru, ClassifierKind::knn, ClassifierKind::nn}) {
            rows.push_back(evaluate_mask(config, data, sel.mask, kind, "CBO-" + classifier_label(kind)));
        }
    } else if (config.axis == "features") {
        const auto sel = select_features(data.train, config.selection_config(OptimizerKind::cbo));
        rows.push_back(evaluate_mask(config, data, FeatureMask::all(data.train.cols), config.classifier, "All Features"));
        rows.push_back(evaluate_mask(config, data, sel.mask, config.classifier, "Optimized Features"));
        reference = 1;
    } else {
        throw ConfigError("unknown axis '" + config.axis + "'");
    }

    const auto path = output_or(config, "compare_" + config.axis + ".csv");
    write_file(path, report_csv(rows));

    std::ostringstream summary;
    summary << "# accuracy deltas relative to " << rows[reference].algorithm << ": (a - b) / b\n";
    summary << "# Accuracy is overall (trace / total); other columns average one-vs-rest classes\n";
    summary << "# axis " << config.axis << ", dataset " << to_string(config.dataset) << ", seed " << config.seed
            << "\n";
    for (const auto& row : rows) {
        summary << row.algorithm << " accuracy " << fixed6(row.metrics.summary.accuracy) << "\n";
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == reference) {
            continue;
        }
        summary << rows[reference].algorithm << " vs " << rows[i].algorithm << ": "
                << percent_delta(rows[reference].metrics.summary.accuracy, rows[i].metrics.summary.accuracy) << "\n";
    }
    auto summary_path = path;
    summary_path.replace_extension(".summary.txt");
    write_file(summary_path, summary.str());

    for (const auto& row : rows) {
        log_row(log, row);
    }
    log << summary.str();
    log << "wrote " << path.string() << " and " << summary_path.string() << "\n";
}

void cmd_bench_opt(const ExperimentConfig& config, std::ostream& log) {
    const auto fn = benchmark_function(config.function);
    const auto bounds = BoundsBox::uniform(config.dim, fn.lower, fn.upper);
    ObjectiveSpec objective;
    objective.evaluate = fn.fn;

    CboConfig cbo;
    cbo.population = config.population;
    cbo.max_iterations = config.iterations;
    cbo.seed = config.seed;
    cbo.bounds = bounds;
    cbo.jobs = config.jobs;
    PsoConfig pso;
    pso.population = config.population;
    pso.max_iterations = config.iterations;
    pso.seed = config.seed;
    pso.bounds = bounds;
    pso.jobs = config.jobs;
    FfConfig ff;
    ff.population = config.population;
    ff.max_iterations = config.iterations;
    ff.seed = config.seed;
    ff.bounds = bounds;
    ff.jobs = config.jobs;

    const std::array<std::pair<const char*, OptimizationTrace>, 4> traces{{
        {"cbo", run_cbo(objective, cbo)},
        {"pso", run_pso(objective, pso)},
        {"ff", run_firefly(objective, ff)},
        {"random", run_random_search(objective, bounds, config.population, config.iterations, config.seed)},
    }};

    std::string csv = "iteration,cbo,pso,ff,random\n";
    for (std::size_t it = 0; it <= config.iterations; ++it) {
        csv += std::to_string(it);
        for (const auto& [name, trace] : traces) {
            csv += ',';
            csv += shortest(trace.best_fitness_per_iteration.at(it));
        }
        csv += '\n';
    }
    const auto path = output_or(config, "bench_" + config.function + ".csv");
    write_file(path, csv);

    log << fn.name << " dim " << config.dim << ", population " << config.population << ", iterations "
        << config.iterations << ", seed " << config.seed << "\n";
    for (const auto& [name, trace] : traces) {
        log << "  " << name << " final " << shortest(trace.best_fitness) << " (" << trace.evaluations
            << " evaluations)\n";
    }
    log << "wrote " << path.string() << "\n";
}

void cmd_report(const std::vector<std::filesystem::path>& csv_paths, std::ostream& out) {
    if (csv_paths.empty()) {
        throw ConfigError("report needs at least one CSV file");
    }
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    for (const auto& path : csv_paths) {
        std::istringstream in(read_file(path));
        std::string line;
        if (!std::getline(in, line)) {
            throw ParseError(path.string() + ": empty file, expected column 'Algorithm'");
        }
        const auto columns = split_csv_line(line);
        const std::size_t expected = 1 + kMetricColumns.size();
        for (std::size_t i = 0; i < expected; ++i) {
            const std::string want = i == 0 ? "Algorithm" : std::string(kMetricColumns[i - 1]);
            if (i >= columns.size() || columns[i] != want) {
                throw ParseError(path.string() + ": schema mismatch at column " + std::to_string(i + 1) +
                                 ", expected '" + want + "', found '" + (i < columns.size() ? columns[i] : "") +
                                 "'");
            }
        }
        if (header.empty()) {
            header = columns;
        } else {
            for (std::size_t i = 0; i < std::max(header.size(), columns.size()); ++i) {
                if (i >= header.size() || i >= columns.size() || header[i] != columns[i]) {
                    throw ParseError(path.string() + ": schema mismatch at column " + std::to_string(i + 1) +
                                     ", expected '" + (i < header.size() ? header[i] : "") + "', found '" +
                                     (i < columns.size() ? columns[i] : "") + "'");
                }
            }
        }
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line == "\r") {
                continue;
            }
            auto fields = split_csv_line(line);
            if (fields.size() != header.size()) {
                throw ParseError(path.string() + ": expected " + std::to_string(header.size()) + " fields, found " +
                                     std::to_string(fields.size()),
                                 line_no);
            }
            for (std::size_t i = 1; i <= kMetricColumns.size(); ++i) {
                double v = 0.0;
                const auto* end = fields[i].data() + fields[i].size();
                const auto [ptr, ec] = std::from_chars(fields[i].data(), end, v);
                if (ec != std::errc{} || ptr != end || fields[i].empty()) {
                    throw ParseError(path.string() + ": column '" + header[i] + "' has non-numeric value '" +
                                         fields[i] + "'",
                                     line_no);
                }
                fields[i] = fixed6(v);
            }
            rows.push_back(std::move(fields));
        }
    }

    std::vector<std::size_t> width(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) {
        width[i] = header[i].size();
        for (const auto& row : rows) {
            width[i] = std::max(width[i], row[i].size());
        }
    }
    const auto emit = [&](const std::vector<std::string>& cells) {
        out << '|';
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto pad = std::string(width[i] - cells[i].size(), ' ');
            out << ' ' << (i == 0 ? cells[i] + pad : pad + cells[i]) << " |";
        }
        out << '\n';
    };
    emit(header);
    out << '|';
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i == 0 ? ":" : "") << std::string(width[i] + 1, '-') << (i == 0 ? "" : ":") << '|';
    }
    out << '\n';
    for (const auto& row : rows) {
        emit(row);
    }
}

} // namespace cbosel
