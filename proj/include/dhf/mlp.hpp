#pragma once

#include <cstdint>
#include <vector>

#include "dhf/matrix.hpp"

namespace dhf {

struct MlpParams {
    std::vector<int> hidden = {12, 12};
    int epochs = 200;
    int batch = 10;
    double learning_rate = 0.01;

    void validate() const; // throws InvalidSpecError
};

// Feed-forward net with ReLU hidden layers and a linear scalar output,
// operating in standardized feature/target space.
struct MlpLayer {
    Matrix weights;            // out x in
    std::vector<double> bias;  // out
};

struct MlpModel {
    std::vector<MlpLayer> layers;

    std::size_t input_dim() const { return layers.front().weights.cols(); }
    double predict_row(const double* row) const;
};

// He-style uniform fan-in initialization, biases zero; draws are row-major
// per layer from the given seed.
MlpModel make_mlp(std::size_t input_dim, const MlpParams& params, std::uint64_t seed);

// Per-sample squared-error loss (pred - y)^2 and its analytic gradient.
double mlp_sample_loss(const MlpModel& model, const double* row, double target);

struct MlpGradients {
    std::vector<Matrix> dw;
    std::vector<std::vector<double>> db;
};

MlpGradients mlp_zero_gradients(const MlpModel& model);

// Accumulates d loss / d params into grads (loss as above, no batch
// scaling); returns the prediction from the forward pass.
double mlp_backprop(const MlpModel& model, const double* row, double target,
                    MlpGradients& grads);

// Mini-batch SGD on mean squared error with per-epoch shuffling; the epoch
// loop reuses the same rng that initialized the model. Throws NonFiniteError
// when the loss diverges.
MlpModel fit_mlp(const Matrix& x, const std::vector<double>& y, const MlpParams& params,
                 std::uint64_t seed);

// Row-parallel prediction; serial reference and OpenMP paths.
std::vector<double> mlp_predict(const MlpModel& model, const Matrix& x, int jobs = 1);
std::vector<double> mlp_predict_serial(const MlpModel& model, const Matrix& x);

} // namespace dhf
