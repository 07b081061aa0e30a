#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "atpg/testability.hpp"

namespace atpg {

// Skip-connection feed-forward regressor over the 17 base features.
// extractor: 17 -> h1 -> 17 (affine + ReLU each), skip-summed with the input;
// regressor: 17 -> h2 (affine + ReLU) -> 1, sigmoid.
// Parameters live in one flat vector:
//   [W1 (h1 x 17), b1, W2 (17 x h1), b2, W3 (h2 x 17), b3, W4 (1 x h2), b4]
struct HybNNModel {
  int h1 = 32;
  int h2 = 16;
  std::vector<double> params;

  int num_params() const {
    return h1 * kBaseFeatureCount + h1 + kBaseFeatureCount * h1 +
           kBaseFeatureCount + h2 * kBaseFeatureCount + h2 + h2 + 1;
  }
};

// Uniform (-sqrt(k), sqrt(k)) init with k = 1/fan_in, per layer.
HybNNModel hybnn_init(int h1, int h2, uint64_t seed);

double hybnn_forward(const HybNNModel& model, std::span<const double> x);

// MSE over the batch plus its gradient w.r.t. every parameter (accumulated
// into grad, which is zeroed first). X is row-major n x 17.
double hybnn_loss_grad(const HybNNModel& model, const std::vector<double>& X,
                       const std::vector<double>& y, std::vector<double>& grad);

struct HybNNTrainOptions {
  int epochs = 200;
  int batch = 256;
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int patience = 20;  // early stop on validation MSE; only if a val set is given
  uint64_t seed = 0;
};

struct HybNNTrainLog {
  std::vector<double> train_mse;  // per epoch
  std::vector<double> val_mse;    // per epoch, when validation data given
  double final_train_mse = 0.0;
  int epochs_run = 0;
};

// Adam on MSE; deterministic given the seed. Throws on empty data or a
// non-finite loss (message names the epoch).
HybNNTrainLog hybnn_train(HybNNModel& model, const std::vector<double>& X,
                          const std::vector<double>& y,
                          const HybNNTrainOptions& opts,
                          const std::vector<double>* X_val = nullptr,
                          const std::vector<double>* y_val = nullptr);

double hybnn_mse(const HybNNModel& model, const std::vector<double>& X,
                 const std::vector<double>& y);

}  // namespace atpg
