// SPDX-License-Identifier: Apache-2.0
#include <charconv>
#include <fstream>
#include <istream>

#include "cbosel/dataset.hpp"
#include "cbosel/errors.hpp"

namespace cbosel {

namespace {

const std::vector<std::string> kUciHarClasses{"walking", "walking upstairs", "walking downstairs",
                                              "sitting", "standing", "laying"};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

// Appends every whitespace-separated real on the line; returns the count.
std::size_t parse_reals(const std::string& line, std::vector<double>& out, const std::string& what,
                        std::size_t line_no) {
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) {
            ++i;
        }
        if (i == line.size()) {
            break;
        }
        std::size_t j = i;
        while (j < line.size() && !is_space(line[j])) {
            ++j;
        }
        const char* first = line.data() + i;
        if (*first == '+') {
            ++first;
        }
        double v = 0.0;
        const auto res = std::from_chars(first, line.data() + j, v);
        if (res.ec != std::errc() || res.ptr != line.data() + j) {
            throw ParseError(what + ": invalid number '" + line.substr(i, j - i) + "'", line_no);
        }
        out.push_back(v);
        ++count;
        i = j;
    }
    return count;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw MissingInputError("cannot open " + path.string());
    }
    return in;
}

std::filesystem::path locate(const std::filesystem::path& dir, const std::string& split, const std::string& file) {
    if (std::filesystem::exists(dir / file)) {
        return dir / file;
    }
    if (std::filesystem::exists(dir / split / file)) {
        return dir / split / file;
    }
    throw MissingInputError("UCI-HAR file " + file + " not found under " + dir.string());
}

std::vector<std::string> read_feature_names(const std::filesystem::path& dir) {
    std::vector<std::string> names;
    std::ifstream in(dir / "features.txt");
    if (!in) {
        for (std::size_t j = 0; j < kUciHarFeatureCount; ++j) {
            names.push_back("f" + std::to_string(j));
        }
        return names;
    }
    std::string line;
    while (std::getline(in, line)) {
        // "<index> <name>"
        const auto space = line.find(' ');
        auto name = space == std::string::npos ? line : line.substr(space + 1);
        while (!name.empty() && is_space(name.back())) {
            name.pop_back();
        }
        if (!name.empty()) {
            names.push_back(name);
        }
    }
    if (names.size() != kUciHarFeatureCount) {
        throw ParseError("features.txt must list " + std::to_string(kUciHarFeatureCount) + " names");
    }
    return names;
}

} // namespace

LabeledDataset parse_ucihar(std::istream& features, std::istream& labels, const std::string& what) {
    LabeledDataset data;
    data.cols = kUciHarFeatureCount;
    data.source = DataSource::ucihar;
    data.class_names = kUciHarClasses;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(features, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const auto n = parse_reals(line, data.features, what + " X", line_no);
        if (n != kUciHarFeatureCount) {
            throw ParseError(what + " X: expected " + std::to_string(kUciHarFeatureCount) + " values, found " +
                                 std::to_string(n),
                             line_no);
        }
        ++data.rows;
    }

    line_no = 0;
    while (std::getline(labels, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        const auto last = line.find_last_not_of(" \t\r");
        int value = 0;
        const auto res = std::from_chars(line.data() + first, line.data() + last + 1, value);
        if (res.ec != std::errc() || res.ptr != line.data() + last + 1) {
            throw ParseError(what + " y: invalid label '" + line + "'", line_no);
        }
        if (value < 1 || value > 6) {
            throw ParseError(what + " y: label " + std::to_string(value) + " outside 1..6", line_no);
        }
        data.labels.push_back(static_cast<std::size_t>(value - 1));
    }
    if (data.labels.size() != data.rows) {
        throw ParseError(what + ": " + std::to_string(data.rows) + " feature rows but " +
                         std::to_string(data.labels.size()) + " labels");
    }
    for (std::size_t j = 0; j < kUciHarFeatureCount; ++j) {
        data.feature_names.push_back("f" + std::to_string(j));
    }
    data.validate();
    return data;
}

UciHarData load_ucihar(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw MissingInputError("UCI-HAR directory not found: " + dir.string());
    }
    UciHarData out;
    {
        auto x = open_or_throw(locate(dir, "train", "X_train.txt"));
        auto y = open_or_throw(locate(dir, "train", "y_train.txt"));
        out.train = parse_ucihar(x, y, "train");
    }
    {
        auto x = open_or_throw(locate(dir, "test", "X_test.txt"));
        auto y = open_or_throw(locate(dir, "test", "y_test.txt"));
        out.test = parse_ucihar(x, y, "test");
    }
    const auto names = read_feature_names(dir);
    out.train.feature_names = names;
    out.test.feature_names = names;
    return out;
}

} // namespace cbosel
