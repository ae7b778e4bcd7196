// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cbosel {

/// Invalid configuration (odd population, zero iterations, bad flag values...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A required input file or directory does not exist.
class MissingInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Training produced a non-finite loss.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what, std::size_t epoch = 0)
        : std::runtime_error(epoch ? what + " at epoch " + std::to_string(epoch) : what), epoch_(epoch) {}

    /// 1-based epoch, or 0 when raised outside a training loop.
    std::size_t epoch() const noexcept { return epoch_; }

private:
    std::size_t epoch_;
};

/// An objective function returned a non-finite value.
class ObjectiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cbosel
