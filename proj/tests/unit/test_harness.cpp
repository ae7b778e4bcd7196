// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cbosel/errors.hpp"
#include "cbosel/experiment.hpp"

using namespace cbosel;
namespace fs = std::filesystem;

namespace {

const std::string kCli{CBOSEL_CLI_PATH};

class HarnessTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("cbosel-harness-" + std::to_string(::getpid()) + "-" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path path(const std::string& name) const { return dir_ / name; }

    int run(const std::string& args) const {
        const std::string cmd = kCli + " " + args + " > " + (dir_ / "stdout.txt").string() + " 2> " +
                                (dir_ / "stderr.txt").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
};

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

double accuracy_of(const std::string& csv_line) {
    const auto comma = csv_line.find(',');
    return std::stod(csv_line.substr(comma + 1));
}

ExperimentConfig quick_config() {
    ExperimentConfig c;
    c.population = 4;
    c.iterations = 3;
    c.epochs = 20;
    c.selection_epochs = 5;
    c.hidden_size = 8;
    c.jobs = 1;
    return c;
}

} // namespace

TEST(PercentDelta, RelativeImprovement) {
    EXPECT_EQ(percent_delta(0.90, 0.88), "+2.27%");
    EXPECT_EQ(percent_delta(0.88, 0.90), "-2.22%");
    EXPECT_EQ(percent_delta(0.5, 0.5), "+0.00%");
}

TEST(ExperimentConfigTest, DefaultsMirrorPublishedSetup) {
    const ExperimentConfig c;
    EXPECT_EQ(c.population, 10u);
    EXPECT_EQ(c.iterations, 25u);
    EXPECT_EQ(c.dataset, DataSource::synthetic);
    EXPECT_EQ(c.classifier_config(ClassifierKind::gru, 60).train.hidden_dim, 32u);
    EXPECT_EQ(c.classifier_config(ClassifierKind::nn, 60).train.hidden_dim, 64u);
    EXPECT_EQ(c.selection_config(OptimizerKind::cbo).classifier.train.epochs, 15u);
}

TEST(ExperimentConfigTest, SetParsesAndValidates) {
    ExperimentConfig c;
    c.set("population", "12");
    c.set("learning_percentage", " 85 ");
    c.set("classifier", "knn");
    c.set("chunk-size", "0");
    EXPECT_EQ(c.population, 12u);
    EXPECT_EQ(c.learning_percentage.value(), 85.0);
    EXPECT_EQ(c.classifier, ClassifierKind::knn);
    EXPECT_FALSE(c.chunk_size.has_value());
    EXPECT_THROW(c.set("population", "-3"), ConfigError);
    EXPECT_THROW(c.set("population", "0"), ConfigError);
    EXPECT_THROW(c.set("learning-percentage", "100"), ConfigError);
    EXPECT_THROW(c.set("colour", "blue"), ConfigError);
    EXPECT_THROW(c.set("dataset", "mnist"), ConfigError);
    EXPECT_THROW(c.set("axis", "rows"), ConfigError);
}

TEST_F(HarnessTest, ConfigFileLines) {
    std::ofstream(path("run.conf")) << "# experiment\npopulation = 6\n\niterations=4   # short\nseed = 19\n";
    ExperimentConfig c;
    c.load_file(path("run.conf"));
    EXPECT_EQ(c.population, 6u);
    EXPECT_EQ(c.iterations, 4u);
    EXPECT_EQ(c.seed, 19u);
    std::ofstream(path("bad.conf")) << "population 6\n";
    EXPECT_THROW(c.load_file(path("bad.conf")), ConfigError);
    EXPECT_THROW(c.load_file(path("absent.conf")), MissingInputError);
}

TEST_F(HarnessTest, PrepareDataNormalizesWithTrainStatistics) {
    auto c = quick_config();
    const auto data = prepare_data(c);
    EXPECT_EQ(data.train.rows, 280u);
    EXPECT_EQ(data.test.rows, 120u);
    for (std::size_t col = 0; col < data.train.cols; ++col) {
        double lo = 1e9, hi = -1e9;
        for (std::size_t r = 0; r < data.train.rows; ++r) {
            lo = std::min(lo, data.train.row(r)[col]);
            hi = std::max(hi, data.train.row(r)[col]);
        }
        EXPECT_EQ(lo, 0.0);
        EXPECT_EQ(hi, 1.0);
    }
    c.train_limit = 40;
    c.test_limit = 20;
    const auto small = prepare_data(c);
    EXPECT_EQ(small.train.rows, 40u);
    EXPECT_EQ(small.test.rows, 20u);
}

TEST_F(HarnessTest, PrepareDataReadsFixtureDatasets) {
    auto c = quick_config();
    c.dataset = DataSource::ucihar;
    c.data_dir = fs::path(CBOSEL_FIXTURES_DIR) / "ucihar";
    const auto published = prepare_data(c);
    EXPECT_EQ(published.train.rows, 3u);
    EXPECT_EQ(published.test.rows, 2u);
    c.data_dir = path("missing");
    EXPECT_THROW(prepare_data(c), MissingInputError);
    c.data_dir.clear();
    EXPECT_THROW(prepare_data(c), MissingInputError);
}

TEST_F(HarnessTest, PrepareDataWindowsWisdm) {
    {
        std::ofstream raw(path("WISDM_ar_v1.1_raw.txt"));
        const char* activities[] = {"Walking", "Jogging", "Upstairs", "Downstairs", "Sitting", "Standing"};
        std::int64_t t = 0;
        for (int user = 1; user <= 2; ++user) {
            for (int a = 0; a < 6; ++a) {
                for (int i = 0; i < 60; ++i) {
                    raw << user << ',' << activities[a] << ',' << (t += 50) << ',' << 0.1 * a + 0.01 * i << ','
                        << 9.8 - a << ',' << (i % 7) * 0.2 << ";\n";
                }
            }
        }
    }
    auto c = quick_config();
    c.dataset = DataSource::wisdm;
    c.data_dir = dir_;
    c.window_length = 20;
    const auto data = prepare_data(c);
    EXPECT_EQ(data.train.cols, kWindowFeatureCount);
    EXPECT_EQ(data.train.class_count(), 6u);
    EXPECT_EQ(data.train.rows + data.test.rows, 2u * 6u * 5u);
}

TEST_F(HarnessTest, EvaluateRejectsMaskOfWrongLength) {
    auto c = quick_config();
    const auto data = prepare_data(c);
    EXPECT_THROW(evaluate_mask(c, data, FeatureMask::all(9), ClassifierKind::knn, "x"), ConfigError);
}

TEST_F(HarnessTest, EvaluateOnSeparableSyntheticIsPerfect) {
    auto c = quick_config();
    c.classifier = ClassifierKind::knn;
    c.output = path("eval.csv");
    std::ostringstream log;
    c.mask_file = path("mask.json");
    SelectionResult sel;
    sel.optimizer = "cbo";
    sel.mask = FeatureMask::from_bits({false, false, true, false, false, false, false, true, false, false});
    sel.position.assign(10, 0.0);
    sel.position[2] = sel.position[7] = 1.0;
    std::ofstream(*c.mask_file) << selection_to_json(sel);
    cmd_evaluate(c, log);
    const auto rows = lines_of(slurp(c.output));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], report_csv_header());
    EXPECT_EQ(rows[1].substr(0, 17), "CBO-KNN,1.000000,");
}

TEST_F(HarnessTest, ReportRendersAllColumns) {
    std::ofstream(path("a.csv")) << report_csv_header() << "\nCBO-GRU,0.9,0.8,0.7,0.6,0.5,0.4,0.3,0.2,0.1,0.05,1,4,70\n";
    std::ofstream(path("b.csv")) << report_csv_header() << "\nAll Features,1,1,1,1,0,0,1,0,1,1,1,10,70\n";
    std::ostringstream one;
    cmd_report({path("a.csv")}, one);
    const auto single = lines_of(one.str());
    ASSERT_EQ(single.size(), 3u);
    for (auto column : kMetricColumns) {
        EXPECT_NE(single[0].find(std::string(column)), std::string::npos);
    }
    EXPECT_NE(single[2].find("0.900000"), std::string::npos);
    EXPECT_NE(single[2].find("0.050000"), std::string::npos);

    std::ostringstream two;
    cmd_report({path("b.csv"), path("a.csv")}, two);
    const auto merged = lines_of(two.str());
    ASSERT_EQ(merged.size(), 4u);
    EXPECT_NE(merged[2].find("All Features"), std::string::npos);
    EXPECT_NE(merged[3].find("CBO-GRU"), std::string::npos);
}

TEST_F(HarnessTest, ReportSchemaErrorNamesColumn) {
    std::ofstream(path("bad.csv")) << "Algorithm,Accuracy,Recall\nX,1,1\n";
    std::ostringstream out;
    try {
        cmd_report({path("bad.csv")}, out);
        FAIL() << "expected schema error";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("Sensitivity"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("Recall"), std::string::npos);
    }
    EXPECT_THROW(cmd_report({path("nothing.csv")}, out), MissingInputError);
}

// --- End-to-end through the command-line binary -----------------------------------

TEST_F(HarnessTest, CliExitCodes) {
    EXPECT_EQ(run("select --population 3 --output " + path("x.json").string()), 64); // odd CBO population
    EXPECT_EQ(run("select --population abc"), 64);
    EXPECT_EQ(run("select --no-such-flag 1"), 64);
    EXPECT_EQ(run("bench-opt --function ackley"), 64);
    EXPECT_EQ(run("select --dataset ucihar --data-dir " + path("none").string()), 2);
    EXPECT_EQ(run("evaluate --mask " + path("none.json").string()), 2);
    std::ofstream(path("bad.csv")) << "Algo,Accuracy\n";
    EXPECT_EQ(run("report " + path("bad.csv").string()), 1);
    EXPECT_EQ(run("--help"), 0);
}

TEST_F(HarnessTest, CliFlagsOverrideConfigFile) {
    std::ofstream(path("run.conf")) << "population = 4\niterations = 2\nselection-epochs = 2\nclassifier = knn\n"
                                    << "seed = 3\n";
    ASSERT_EQ(run("select --config " + path("run.conf").string() + " --iterations 5 --output " +
                  path("s.json").string()),
              0);
    const auto sel = selection_from_json(slurp(path("s.json")));
    EXPECT_EQ(sel.trace.best_fitness_per_iteration.size(), 6u);
    EXPECT_EQ(sel.seed, 3u);
}

TEST_F(HarnessTest, CliSelectNoneWritesAllOnesMask) {
    ASSERT_EQ(run("select --optimizer none --classifier knn --output " + path("none.json").string()), 0);
    const auto sel = selection_from_json(slurp(path("none.json")));
    EXPECT_EQ(sel.mask.count, 10u);
}

TEST_F(HarnessTest, CliCommandsAreByteIdenticalAcrossRuns) {
    const std::string common = " --population 4 --iterations 3 --selection-epochs 4 --epochs 10 --hidden-size 8"
                               " --seed 17";
    const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
        {"select" + common + " --output " + path("%/sel.json").string(), {"sel.json"}},
        {"evaluate" + common + " --output " + path("%/eval.csv").string(), {"eval.csv"}},
        {"compare --axis features" + common + " --output " + path("%/cmp.csv").string(),
         {"cmp.csv", "cmp.summary.txt"}},
        {"bench-opt --function rastrigin --dim 3 --population 6 --iterations 20 --seed 17 --output " +
             path("%/bench.csv").string(),
         {"bench.csv"}},
    };
    for (const auto& [args, files] : commands) {
        for (const char* run_dir : {"first", "second"}) {
            auto concrete = args;
            concrete.replace(concrete.find('%'), 1, run_dir);
            ASSERT_EQ(run(concrete), 0) << concrete << "\n" << slurp(path("stderr.txt"));
        }
        for (const auto& f : files) {
            const auto a = slurp(path("first") / f);
            EXPECT_FALSE(a.empty()) << f;
            EXPECT_EQ(a, slurp(path("second") / f)) << f;
        }
    }
    ASSERT_EQ(run("report " + (path("first") / "eval.csv").string() + " --output " + path("r1.md").string()), 0);
    ASSERT_EQ(run("report " + (path("first") / "eval.csv").string() + " --output " + path("r2.md").string()), 0);
    EXPECT_EQ(slurp(path("r1.md")), slurp(path("r2.md")));
}

TEST_F(HarnessTest, CliLearningPercentageSweepRows) {
    const std::string common = " --classifier knn --output ";
    ASSERT_EQ(run("evaluate --learning-percentage 75" + common + path("lp75.csv").string()), 0);
    ASSERT_EQ(run("evaluate --learning-percentage 85" + common + path("lp85.csv").string()), 0);
    const auto a = lines_of(slurp(path("lp75.csv")));
    const auto b = lines_of(slurp(path("lp85.csv")));
    ASSERT_EQ(a.size(), 2u);
    ASSERT_EQ(b.size(), 2u);
    EXPECT_NE(a[1], b[1]);
    EXPECT_EQ(a[1].substr(a[1].rfind(',') + 1), "75");
    EXPECT_EQ(b[1].substr(b[1].rfind(',') + 1), "85");
}

TEST_F(HarnessTest, CliOptimizerAxisHasThreeRows) {
    ASSERT_EQ(run("compare --axis optimizers --classifier knn --population 4 --iterations 3 --output " +
                  path("opt.csv").string()),
              0);
    const auto rows = lines_of(slurp(path("opt.csv")));
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[1].substr(0, 4), "CBO-");
    EXPECT_EQ(rows[2].substr(0, 4), "PSO-");
    EXPECT_EQ(rows[3].substr(0, 3), "FF-");
    const auto summary = slurp(path("opt.summary.txt"));
    EXPECT_NE(summary.find("(a - b) / b"), std::string::npos);
    EXPECT_NE(summary.find("CBO-KNN vs PSO-KNN: "), std::string::npos);
}

TEST_F(HarnessTest, CliClassifierAxisRows) {
    ASSERT_EQ(run("compare --axis classifiers --population 4 --iterations 2 --selection-epochs 3 --epochs 10 "
                  "--output " + path("cls.csv").string()),
              0);
    const auto rows = lines_of(slurp(path("cls.csv")));
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[1].substr(0, 8), "CBO-GRU,");
    EXPECT_EQ(rows[2].substr(0, 8), "CBO-KNN,");
    EXPECT_EQ(rows[3].substr(0, 7), "CBO-NN,");
}

TEST_F(HarnessTest, FeaturesAxisOptimizedNotWorseInMedian) {
    std::vector<double> all, optimized;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto c = quick_config();
        c.population = 6;
        c.iterations = 5;
        c.classifier = ClassifierKind::knn;
        c.seed = seed;
        c.output = path("f" + std::to_string(seed) + ".csv");
        std::ostringstream log;
        cmd_compare(c, log);
        const auto rows = lines_of(slurp(c.output));
        ASSERT_EQ(rows.size(), 3u);
        ASSERT_EQ(rows[1].substr(0, 13), "All Features,");
        ASSERT_EQ(rows[2].substr(0, 19), "Optimized Features,");
        all.push_back(accuracy_of(rows[1]));
        optimized.push_back(accuracy_of(rows[2]));
    }
    std::sort(all.begin(), all.end());
    std::sort(optimized.begin(), optimized.end());
    EXPECT_GE(optimized[2], all[2]);
}

TEST_F(HarnessTest, BenchTraceShape) {
    auto c = quick_config();
    c.population = 6;
    c.iterations = 10;
    c.dim = 2;
    c.function = "rosenbrock";
    c.output = path("bench.csv");
    std::ostringstream log;
    cmd_bench_opt(c, log);
    const auto rows = lines_of(slurp(c.output));
    ASSERT_EQ(rows.size(), 12u);
    EXPECT_EQ(rows[0], "iteration,cbo,pso,ff,random");
    EXPECT_EQ(rows[1].substr(0, 2), "0,");
    EXPECT_EQ(rows[11].substr(0, 3), "10,");
}
