// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cbosel/dataset.hpp"
#include "cbosel/errors.hpp"
#include "cbosel/random.hpp"

namespace cbosel {

std::string_view to_string(DataSource source) {
    switch (source) {
    case DataSource::ucihar:
        return "ucihar";
    case DataSource::wisdm:
        return "wisdm";
    case DataSource::synthetic:
        break;
    }
    return "synthetic";
}

void LabeledDataset::validate() const {
    if (features.size() != rows * cols) {
        throw std::invalid_argument("feature matrix size does not match rows x cols");
    }
    if (labels.size() != rows) {
        throw std::invalid_argument("label count does not match row count");
    }
    if (!feature_names.empty() && feature_names.size() != cols) {
        throw std::invalid_argument("feature name count does not match column count");
    }
    for (std::size_t i = 0; i < rows; ++i) {
        if (labels[i] >= class_count()) {
            throw std::invalid_argument("label out of range in row " + std::to_string(i));
        }
    }
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (!std::isfinite(features[i])) {
            throw std::invalid_argument("non-finite feature in row " + std::to_string(i / cols));
        }
    }
}

LabeledDataset select_rows(const LabeledDataset& data, std::span<const std::size_t> indices) {
    LabeledDataset out;
    out.rows = indices.size();
    out.cols = data.cols;
    out.class_names = data.class_names;
    out.feature_names = data.feature_names;
    out.source = data.source;
    out.features.reserve(out.rows * out.cols);
    out.labels.reserve(out.rows);
    for (auto i : indices) {
        if (i >= data.rows) {
            throw std::out_of_range("row index out of range");
        }
        const auto r = data.row(i);
        out.features.insert(out.features.end(), r.begin(), r.end());
        out.labels.push_back(data.labels[i]);
    }
    return out;
}

LabeledDataset project_columns(const LabeledDataset& data, std::span<const std::size_t> columns) {
    LabeledDataset out;
    out.rows = data.rows;
    out.cols = columns.size();
    out.labels = data.labels;
    out.class_names = data.class_names;
    out.source = data.source;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j] >= data.cols || (j > 0 && columns[j] <= columns[j - 1])) {
            throw std::invalid_argument("projection columns must be ascending, unique and in range");
        }
        if (!data.feature_names.empty()) {
            out.feature_names.push_back(data.feature_names[columns[j]]);
        }
    }
    out.features.resize(out.rows * out.cols);
    for (std::size_t i = 0; i < data.rows; ++i) {
        const auto r = data.row(i);
        for (std::size_t j = 0; j < columns.size(); ++j) {
            out.features[i * out.cols + j] = r[columns[j]];
        }
    }
    return out;
}

LabeledDataset concat_rows(const LabeledDataset& a, const LabeledDataset& b) {
    if (a.cols != b.cols || a.class_names != b.class_names) {
        throw std::invalid_argument("cannot concatenate datasets with different schemas");
    }
    LabeledDataset out = a;
    out.rows += b.rows;
    out.features.insert(out.features.end(), b.features.begin(), b.features.end());
    out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
    return out;
}

double normalize(double value, double min, double max, double am, double bm) {
    if (max == min) {
        return bm;
    }
    return (am - bm) * (value - min) / (max - min) + bm;
}

NormalizationParams fit_normalization(const LabeledDataset& train, double am, double bm) {
    if (!(am > bm)) {
        throw std::invalid_argument("normalization requires am > bm");
    }
    NormalizationParams p;
    p.am = am;
    p.bm = bm;
    p.column_min.assign(train.cols, 0.0);
    p.column_max.assign(train.cols, 0.0);
    for (std::size_t j = 0; j < train.cols; ++j) {
        if (train.rows == 0) {
            break;
        }
        double lo = train.features[j];
        double hi = lo;
        for (std::size_t i = 1; i < train.rows; ++i) {
            const double v = train.features[i * train.cols + j];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        p.column_min[j] = lo;
        p.column_max[j] = hi;
    }
    return p;
}

void apply_normalization(LabeledDataset& data, const NormalizationParams& params) {
    if (params.column_min.size() != data.cols) {
        throw std::invalid_argument("normalization parameters do not match column count");
    }
    for (std::size_t i = 0; i < data.rows; ++i) {
        for (std::size_t j = 0; j < data.cols; ++j) {
            double& v = data.features[i * data.cols + j];
            v = normalize(v, params.column_min[j], params.column_max[j], params.am, params.bm);
        }
    }
}

// --- native format -------------------------------------------------------------

namespace {

void append_double(std::string& line, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    line.append(buf, res.ptr);
}

double parse_double(std::string_view token, std::size_t line_no) {
    double v = 0.0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    if (!token.empty() && *first == '+') {
        ++first;
    }
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw ParseError("invalid number '" + std::string(token) + "'", line_no);
    }
    return v;
}

} // namespace

void write_native(std::ostream& out, const LabeledDataset& data) {
    out << "cbosel-matrix v1 " << data.rows << ' ' << data.cols << '\n';
    std::string line;
    for (std::size_t i = 0; i < data.rows; ++i) {
        line.clear();
        const auto r = data.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j) {
                line += '\t';
            }
            append_double(line, r[j]);
        }
        line += '\n';
        out << line;
    }
    out << "labels:";
    for (auto l : data.labels) {
        out << ' ' << l;
    }
    out << '\n';
}

LabeledDataset read_native(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) {
        throw ParseError("empty native matrix file", line_no);
    }
    std::istringstream header(line);
    std::string magic, version;
    LabeledDataset data;
    if (!(header >> magic >> version >> data.rows >> data.cols) || magic != "cbosel-matrix" || version != "v1") {
        throw ParseError("bad native matrix header", line_no);
    }
    data.features.reserve(data.rows * data.cols);
    for (std::size_t i = 0; i < data.rows; ++i) {
        ++line_no;
        if (!std::getline(in, line)) {
            throw ParseError("truncated matrix", line_no);
        }
        std::size_t count = 0;
        std::size_t start = 0;
        while (start <= line.size()) {
            const auto tab = line.find('\t', start);
            const auto end = tab == std::string::npos ? line.size() : tab;
            data.features.push_back(parse_double(std::string_view(line).substr(start, end - start), line_no));
            ++count;
            if (tab == std::string::npos) {
                break;
            }
            start = tab + 1;
        }
        if (data.cols == 0 && line.empty()) {
            data.features.pop_back();
            count = 0;
        }
        if (count != data.cols) {
            throw ParseError("expected " + std::to_string(data.cols) + " values, found " + std::to_string(count),
                             line_no);
        }
    }
    ++line_no;
    if (!std::getline(in, line) || line.rfind("labels:", 0) != 0) {
        throw ParseError("missing labels line", line_no);
    }
    std::istringstream labels(line.substr(7));
    std::size_t label = 0;
    std::size_t max_label = 0;
    while (labels >> label) {
        data.labels.push_back(label);
        max_label = std::max(max_label, label);
    }
    if (!labels.eof()) {
        throw ParseError("invalid label", line_no);
    }
    if (data.labels.size() != data.rows) {
        throw ParseError("label count does not match row count", line_no);
    }
    const std::size_t classes = data.rows ? max_label + 1 : 0;
    for (std::size_t k = 0; k < classes; ++k) {
        data.class_names.push_back("class" + std::to_string(k));
    }
    return data;
}

// --- synthetic -------------------------------------------------------------------

LabeledDataset make_synthetic(const SyntheticSpec& spec) {
    const auto [a, b] = spec.informative;
    if (spec.features < 2 || a >= spec.features || b >= spec.features || a == b) {
        throw ConfigError("synthetic informative columns must be two distinct valid columns");
    }
    if (spec.samples < 8) {
        throw ConfigError("synthetic dataset needs at least 8 samples");
    }
    if (!(spec.margin >= 0.0 && spec.margin < 0.5)) {
        throw ConfigError("synthetic margin must be in [0, 0.5)");
    }
    Rng rng(spec.seed);
    LabeledDataset data;
    data.rows = spec.samples;
    data.cols = spec.features;
    data.source = DataSource::synthetic;
    data.class_names = {"low-low", "low-high", "high-low", "high-high"};
    for (std::size_t j = 0; j < spec.features; ++j) {
        data.feature_names.push_back("f" + std::to_string(j));
    }

    std::vector<std::size_t> labels(spec.samples);
    for (std::size_t i = 0; i < spec.samples; ++i) {
        labels[i] = i % 4;
    }
    rng.shuffle(std::span(labels));

    const double half_width = 0.5 - spec.margin;
    auto informative = [&](bool high) {
        const double u = rng.uniform01() * half_width;
        return high ? 1.0 - u : u;
    };
    data.features.resize(data.rows * data.cols);
    for (std::size_t i = 0; i < spec.samples; ++i) {
        double* row = data.features.data() + i * data.cols;
        for (std::size_t j = 0; j < spec.features; ++j) {
            row[j] = rng.uniform01();
        }
        row[a] = informative(labels[i] >= 2);
        row[b] = informative(labels[i] % 2 == 1);
    }
    data.labels = std::move(labels);
    return data;
}

} // namespace cbosel
