// SPDX-License-Identifier: Apache-2.0
#pragma once

// Gated recurrent unit classifier.
//
// Per timestep, with input x and previous state h:
//   z  = σ(W_z·x + U_z·h + b_z)          update gate
//   r  = σ(W_r·x + U_r·h + b_r)          reset gate
//   c  = tanh(W_c·x + U_c·(h ⊙ r) + b_c) candidate state
//   h' = (1 − z) ⊙ c + z ⊙ h
// A fixed-length feature vector is cut into consecutive chunks (the last one
// zero-padded) which form the timesteps, starting from h = 0. The final
// state feeds a softmax output layer trained with cross-entropy.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "cbosel/dataset.hpp"
#include "cbosel/training.hpp"

namespace cbosel {

struct GruParameters {
    std::size_t feature_count = 0; ///< length of a full sample vector
    std::size_t step_dim = 0;      ///< features per timestep (chunk size)
    std::size_t hidden = 0;
    std::size_t classes = 0;

    std::vector<double> w_update, w_reset, w_candidate; ///< hidden × step_dim
    std::vector<double> u_update, u_reset, u_candidate; ///< hidden × hidden
    std::vector<double> b_update, b_reset, b_candidate; ///< hidden
    std::vector<double> w_out;                          ///< classes × hidden
    std::vector<double> b_out;                          ///< classes

    static GruParameters zeros(std::size_t feature_count, std::size_t step_dim, std::size_t hidden,
                               std::size_t classes);

    std::size_t steps() const { return (feature_count + step_dim - 1) / step_dim; }

    /// Every trainable array, in serialization order.
    std::array<std::span<double>, 11> tensors();
    std::array<std::span<const double>, 11> tensors() const;
};

/// Activations of one timestep, kept for backpropagation.
struct GruStepCache {
    std::vector<double> input;
    std::vector<double> h_prev;
    std::vector<double> update;
    std::vector<double> reset;
    std::vector<double> candidate;
    std::vector<double> hidden; ///< new state h'
};

/// One cell update. Throws std::invalid_argument on non-finite input or
/// shape mismatch.
GruStepCache gru_cell_forward(std::span<const double> input, std::span<const double> h_prev,
                              const GruParameters& params);

/// Splits `sample` into ceil(len / chunk) steps, zero-padding the last.
/// Throws ConfigError when chunk is 0.
std::vector<std::vector<double>> chunk_sequence(std::span<const double> sample, std::size_t chunk);

/// Runs all timesteps and the output layer. `caches` (optional) receives the
/// per-step activations.
Prediction forward_sequence(std::span<const double> sample, const GruParameters& params,
                            std::vector<GruStepCache>* caches = nullptr);

/// Mean cross-entropy over `rows` of `data`; writes the gradient of that mean
/// into `grad` (reshaped as needed). Throws DivergenceError on a non-finite
/// loss.
double gru_loss_and_gradients(const GruParameters& params, const LabeledDataset& data,
                              std::span<const std::size_t> rows, GruParameters& grad);

/// Uniform ±sqrt(1/fan_in) weights, zero biases.
GruParameters init_gru(std::size_t feature_count, std::size_t classes, const TrainConfig& config);

/// Momentum SGD over `train`. With epochs = 0 the initialization is returned.
GruParameters train_gru(const LabeledDataset& train, const TrainConfig& config,
                        std::vector<double>* epoch_loss = nullptr);

/// Throws std::invalid_argument when the column count differs from training.
std::vector<Prediction> predict_gru(const GruParameters& params, const LabeledDataset& data);

/// Binary layout: "CBOSEL-GRU1", then feature_count, hidden, classes,
/// step_dim as u32 little-endian, then the 11 tensors of tensors() as f64
/// little-endian, each row-major.
void save_gru(const GruParameters& params, std::ostream& out);
GruParameters load_gru(std::istream& in);

} // namespace cbosel
