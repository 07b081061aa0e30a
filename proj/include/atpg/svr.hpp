#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace atpg {

enum class SvrKernel : uint8_t { RBF, LINEAR };

struct SvrModel {
  int dim = 0;
  SvrKernel kernel = SvrKernel::RBF;
  double gamma = 1.0;
  double C = 1.0;
  double epsilon = 0.1;
  double bias = 0.0;
  // Support vectors with nonzero dual coefficient beta = alpha+ - alpha-,
  // beta in [-C, C].
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> dual;
  double kkt_gap = 0.0;  // maximal violating pair gap at termination
};

struct SvrTrainOptions {
  double C = 1.0;
  double epsilon = 0.1;
  SvrKernel kernel = SvrKernel::RBF;
  double gamma = 0.0;  // <= 0: 1 / (dim * mean feature variance)
  double tol = 1e-3;
  long max_iter = 2'000'000;
};

double kernel_eval(const SvrModel& model, std::span<const double> a,
                   std::span<const double> b);

// Epsilon-insensitive SVR trained by SMO (maximal-violating-pair working set)
// to the KKT tolerance. Deterministic given data order. Throws on
// non-convergence within max_iter.
SvrModel svr_train(const std::vector<std::vector<double>>& X,
                   const std::vector<double>& y, const SvrTrainOptions& opts);

double svr_predict_raw(const SvrModel& model, std::span<const double> x);

// Raw prediction clamped into [0, 1]; the result serves as a probability.
double svr_predict(const SvrModel& model, std::span<const double> x);

}  // namespace atpg
