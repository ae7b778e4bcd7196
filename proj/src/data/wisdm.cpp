// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "cbosel/dataset.hpp"
#include "cbosel/errors.hpp"

namespace cbosel {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
    token = trim(token);
    if (token.empty()) {
        return false;
    }
    const char* first = token.data();
    if (*first == '+') {
        ++first;
    }
    const auto res = std::from_chars(first, token.data() + token.size(), out);
    return res.ec == std::errc() && res.ptr == token.data() + token.size();
}

bool parse_entry(std::string_view entry, WisdmRecord& record) {
    std::array<std::string_view, 6> fields;
    std::size_t n = 0;
    std::size_t start = 0;
    while (true) {
        const auto comma = entry.find(',', start);
        if (n == fields.size()) {
            return false;
        }
        fields[n++] = entry.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    if (n != 6) {
        return false;
    }
    record.activity = std::string(trim(fields[1]));
    return !record.activity.empty() && parse_number(fields[0], record.user) &&
           parse_number(fields[2], record.timestamp) && parse_number(fields[3], record.x) &&
           parse_number(fields[4], record.y) && parse_number(fields[5], record.z) && std::isfinite(record.x) &&
           std::isfinite(record.y) && std::isfinite(record.z);
}

bool known_activity(std::string_view activity) {
    return std::find(kWisdmActivities.begin(), kWisdmActivities.end(), activity) != kWisdmActivities.end();
}

} // namespace

WisdmLoad parse_wisdm_raw(std::istream& in) {
    WisdmLoad out;
    std::string line;
    std::size_t line_no = 0;
    std::size_t first_bad_line = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view rest(line);
        while (!rest.empty()) {
            const auto semi = rest.find(';');
            const auto entry = trim(rest.substr(0, semi));
            rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
            if (entry.empty()) {
                continue;
            }
            WisdmRecord record;
            if (!parse_entry(entry, record)) {
                ++out.malformed;
                if (!first_bad_line) {
                    first_bad_line = line_no;
                }
            } else if (!known_activity(record.activity)) {
                ++out.other_activity;
            } else {
                out.records.push_back(std::move(record));
            }
        }
    }
    const std::size_t total = out.records.size() + out.malformed + out.other_activity;
    if (out.malformed * 10 > total) {
        throw ParseError("WISDM: " + std::to_string(out.malformed) + " of " + std::to_string(total) +
                             " entries are malformed (limit 10%); first at",
                         first_bad_line);
    }
    return out;
}

WisdmLoad load_wisdm_raw(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw MissingInputError("cannot open WISDM file " + file.string());
    }
    return parse_wisdm_raw(in);
}

void WindowSpec::validate() const {
    if (length < 2) {
        throw ConfigError("window length must be >= 2");
    }
    if (!(overlap >= 0.0 && overlap < 1.0)) {
        throw ConfigError("window overlap must be in [0, 1)");
    }
}

std::size_t WindowSpec::stride() const {
    const auto s = static_cast<std::size_t>(std::floor(static_cast<double>(length) * (1.0 - overlap)));
    return std::max<std::size_t>(s, 1);
}

std::vector<SensorWindow> window_wisdm(std::span<const WisdmRecord> records, const WindowSpec& spec) {
    spec.validate();
    const std::size_t stride = spec.stride();
    std::vector<SensorWindow> windows;
    std::size_t run_start = 0;
    while (run_start < records.size()) {
        std::size_t run_end = run_start + 1;
        while (run_end < records.size() && records[run_end].user == records[run_start].user &&
               records[run_end].activity == records[run_start].activity) {
            ++run_end;
        }
        for (std::size_t s = run_start; s + spec.length <= run_end; s += stride) {
            SensorWindow w;
            w.user = records[run_start].user;
            w.activity = records[run_start].activity;
            w.samples.reserve(spec.length);
            for (std::size_t i = s; i < s + spec.length; ++i) {
                w.samples.push_back({records[i].x, records[i].y, records[i].z});
            }
            windows.push_back(std::move(w));
        }
        run_start = run_end;
    }
    return windows;
}

std::array<double, kWindowFeatureCount> extract_window_features(std::span<const std::array<double, 3>> window) {
    std::array<double, kWindowFeatureCount> f{};
    if (window.empty()) {
        throw std::invalid_argument("cannot featurize an empty window");
    }
    const double n = static_cast<double>(window.size());

    std::array<double, 3> mean{};
    for (const auto& s : window) {
        for (int a = 0; a < 3; ++a) {
            mean[a] += s[a];
        }
    }
    for (auto& m : mean) {
        m /= n;
    }

    std::array<double, 3> sd{};
    for (int a = 0; a < 3; ++a) {
        double var = 0.0;
        double mad = 0.0;
        double sq = 0.0;
        double lo = window[0][a];
        double hi = window[0][a];
        for (const auto& s : window) {
            const double d = s[a] - mean[a];
            var += d * d;
            mad += std::abs(d);
            sq += s[a] * s[a];
            lo = std::min(lo, s[a]);
            hi = std::max(hi, s[a]);
        }
        sd[a] = std::sqrt(var / n);
        f[a * 6 + 0] = mean[a];
        f[a * 6 + 1] = sd[a];
        f[a * 6 + 2] = mad / n;
        f[a * 6 + 3] = lo;
        f[a * 6 + 4] = hi;
        f[a * 6 + 5] = std::sqrt(sq / n);
    }

    constexpr std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [a, b] = pairs[p];
        double corr = 0.0;
        if (sd[a] > 0.0 && sd[b] > 0.0) {
            double cov = 0.0;
            for (const auto& s : window) {
                cov += (s[a] - mean[a]) * (s[b] - mean[b]);
            }
            corr = std::clamp(cov / n / (sd[a] * sd[b]), -1.0, 1.0);
        }
        f[18 + p] = corr;
    }

    double mag_mean = 0.0;
    for (const auto& s : window) {
        mag_mean += std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
    }
    mag_mean /= n;
    double mag_var = 0.0;
    for (const auto& s : window) {
        const double d = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]) - mag_mean;
        mag_var += d * d;
    }
    f[21] = mag_mean;
    f[22] = std::sqrt(mag_var / n);
    return f;
}

std::vector<std::string> window_feature_names() {
    std::vector<std::string> names;
    for (const char* axis : {"x", "y", "z"}) {
        for (const char* stat : {"mean", "std", "mad", "min", "max", "rms"}) {
            names.push_back(std::string(axis) + "_" + stat);
        }
    }
    for (const char* corr : {"corr_xy", "corr_xz", "corr_yz"}) {
        names.emplace_back(corr);
    }
    names.emplace_back("mag_mean");
    names.emplace_back("mag_std");
    return names;
}

LabeledDataset build_wisdm_dataset(std::span<const WisdmRecord> records, const WindowSpec& spec) {
    LabeledDataset data;
    data.cols = kWindowFeatureCount;
    data.source = DataSource::wisdm;
    for (auto name : kWisdmActivities) {
        data.class_names.emplace_back(name);
    }
    data.feature_names = window_feature_names();
    for (const auto& w : window_wisdm(records, spec)) {
        const auto it = std::find(kWisdmActivities.begin(), kWisdmActivities.end(), w.activity);
        if (it == kWisdmActivities.end()) {
            continue;
        }
        const auto f = extract_window_features(w.samples);
        data.features.insert(data.features.end(), f.begin(), f.end());
        data.labels.push_back(static_cast<std::size_t>(it - kWisdmActivities.begin()));
        ++data.rows;
    }
    return data;
}

} // namespace cbosel
