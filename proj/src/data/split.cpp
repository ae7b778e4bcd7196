// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>

#include "cbosel/dataset.hpp"
#include "cbosel/errors.hpp"
#include "cbosel/random.hpp"

namespace cbosel {

namespace {

std::vector<std::vector<std::size_t>> rows_by_class(const LabeledDataset& data) {
    std::vector<std::vector<std::size_t>> groups(data.class_count());
    for (std::size_t i = 0; i < data.rows; ++i) {
        if (data.labels[i] >= groups.size()) {
            throw std::invalid_argument("label out of range in row " + std::to_string(i));
        }
        groups[data.labels[i]].push_back(i);
    }
    return groups;
}

// Per-class shares of `target` rows by largest remainder. Each non-empty
// class keeps its share within [lo, size − hi_reserve]; within those bounds
// the total is exactly `target` whenever that is attainable.
std::vector<std::size_t> allocate(const std::vector<std::vector<std::size_t>>& groups, std::size_t target,
                                  std::size_t total, std::size_t lo, std::size_t hi_reserve) {
    const std::size_t k = groups.size();
    std::vector<std::size_t> take(k, 0), min_take(k, 0), max_take(k, 0);
    std::vector<double> remainder(k, 0.0);
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < k; ++c) {
        const std::size_t size = groups[c].size();
        if (size == 0) {
            continue;
        }
        min_take[c] = std::min(lo, size);
        max_take[c] = std::max(min_take[c], size - std::min(hi_reserve, size));
        const double ideal = static_cast<double>(size) * static_cast<double>(target) / static_cast<double>(total);
        const auto whole = static_cast<std::size_t>(std::floor(ideal));
        remainder[c] = ideal - static_cast<double>(whole);
        take[c] = std::clamp(whole, min_take[c], max_take[c]);
        assigned += take[c];
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return remainder[a] > remainder[b]; });
    for (bool progress = true; assigned < target && progress;) {
        progress = false;
        for (std::size_t i = 0; i < k && assigned < target; ++i) {
            if (take[order[i]] < max_take[order[i]]) {
                ++take[order[i]];
                ++assigned;
                progress = true;
            }
        }
    }
    for (bool progress = true; assigned > target && progress;) {
        progress = false;
        for (std::size_t i = k; i-- > 0 && assigned > target;) {
            if (take[order[i]] > min_take[order[i]]) {
                --take[order[i]];
                --assigned;
                progress = true;
            }
        }
    }
    return take;
}

} // namespace

SplitIndices split_indices(const LabeledDataset& data, const SplitSpec& spec) {
    if (!(spec.learning_percentage > 0.0 && spec.learning_percentage < 100.0)) {
        throw ConfigError("learning percentage must be in (0, 100)");
    }
    const std::size_t n = data.rows;
    const auto target = static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.learning_percentage / 100.0));
    Rng rng(spec.seed);
    SplitIndices out;

    if (spec.stratified) {
        auto groups = rows_by_class(data);
        for (std::size_t c = 0; c < groups.size(); ++c) {
            if (groups[c].size() == 1) {
                throw ConfigError("stratified split needs at least 2 samples of class " + std::to_string(c));
            }
        }
        const auto take = allocate(groups, target, n, 1, 1);
        for (std::size_t c = 0; c < groups.size(); ++c) {
            rng.shuffle(std::span(groups[c]));
            out.train.insert(out.train.end(), groups[c].begin(), groups[c].begin() + take[c]);
            out.test.insert(out.test.end(), groups[c].begin() + take[c], groups[c].end());
        }
    } else {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        rng.shuffle(std::span(all));
        out.train.assign(all.begin(), all.begin() + std::min(target, n));
        out.test.assign(all.begin() + std::min(target, n), all.end());
    }
    if (out.train.empty() || out.test.empty()) {
        throw ConfigError("split leaves an empty train or test portion (" + std::to_string(n) + " rows at " +
                          std::to_string(spec.learning_percentage) + "%)");
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& data, const SplitSpec& spec) {
    const auto idx = split_indices(data, spec);
    return {select_rows(data, idx.train), select_rows(data, idx.test)};
}

LabeledDataset stratified_subsample(const LabeledDataset& data, std::size_t count, std::uint64_t seed) {
    if (count >= data.rows) {
        return data;
    }
    auto groups = rows_by_class(data);
    const auto take = allocate(groups, count, data.rows, 0, 0);
    Rng rng(seed);
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < groups.size(); ++c) {
        rng.shuffle(std::span(groups[c]));
        keep.insert(keep.end(), groups[c].begin(), groups[c].begin() + take[c]);
    }
    std::sort(keep.begin(), keep.end());
    return select_rows(data, keep);
}

} // namespace cbosel
