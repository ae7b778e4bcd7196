// SPDX-License-Identifier: Apache-2.0
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string_view>

#include "cbosel/errors.hpp"
#include "cbosel/gru.hpp"

namespace cbosel {

namespace {

constexpr std::string_view kMagic = "CBOSEL-GRU1";

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) {
        b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    }
    out.write(b, 4);
}

void put_f64(std::ostream& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    char b[8];
    for (int i = 0; i < 8; ++i) {
        b[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
    }
    out.write(b, 8);
}

std::uint64_t get_bytes(std::istream& in, int n) {
    unsigned char b[8] = {};
    if (!in.read(reinterpret_cast<char*>(b), n)) {
        throw ParseError("truncated GRU parameter file");
    }
    std::uint64_t v = 0;
    for (int i = n - 1; i >= 0; --i) {
        v = (v << 8) | b[i];
    }
    return v;
}

std::size_t checked_dim(std::uint64_t v) {
    if (v == 0 || v > (1u << 24)) {
        throw ParseError("implausible dimension in GRU parameter file");
    }
    return static_cast<std::size_t>(v);
}

} // namespace

void save_gru(const GruParameters& params, std::ostream& out) {
    out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
    put_u32(out, static_cast<std::uint32_t>(params.feature_count));
    put_u32(out, static_cast<std::uint32_t>(params.hidden));
    put_u32(out, static_cast<std::uint32_t>(params.classes));
    put_u32(out, static_cast<std::uint32_t>(params.step_dim));
    for (auto t : params.tensors()) {
        for (double v : t) {
            put_f64(out, v);
        }
    }
}

GruParameters load_gru(std::istream& in) {
    std::string magic(kMagic.size(), '\0');
    if (!in.read(magic.data(), static_cast<std::streamsize>(magic.size())) || magic != kMagic) {
        throw ParseError("not a GRU parameter file (bad magic)");
    }
    const auto features = checked_dim(get_bytes(in, 4));
    const auto hidden = checked_dim(get_bytes(in, 4));
    const auto classes = checked_dim(get_bytes(in, 4));
    const auto step = checked_dim(get_bytes(in, 4));
    auto params = GruParameters::zeros(features, step, hidden, classes);
    for (auto t : params.tensors()) {
        for (double& v : t) {
            v = std::bit_cast<double>(get_bytes(in, 8));
        }
    }
    return params;
}

} // namespace cbosel
