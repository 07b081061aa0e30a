#include "atpg/hybnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "atpg/rng.hpp"

namespace atpg {
namespace {

constexpr int kD = kBaseFeatureCount;

struct Layout {
  int w1, b1, w2, b2, w3, b3, w4, b4;
  explicit Layout(const HybNNModel& m) {
    w1 = 0;
    b1 = w1 + m.h1 * kD;
    w2 = b1 + m.h1;
    b2 = w2 + kD * m.h1;
    w3 = b2 + kD;
    b3 = w3 + m.h2 * kD;
    w4 = b3 + m.h2;
    b4 = w4 + m.h2;
  }
};

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Scratch {
  std::vector<double> z1, a1, z2, a2, s, z3, a3;
};

double forward(const HybNNModel& m, const double* x, Scratch& sc) {
  const Layout L(m);
  const double* p = m.params.data();
  sc.z1.assign(m.h1, 0.0);
  for (int j = 0; j < m.h1; ++j) {
    double acc = p[L.b1 + j];
    const double* w = p + L.w1 + j * kD;
    for (int i = 0; i < kD; ++i) acc += w[i] * x[i];
    sc.z1[j] = acc;
  }
  sc.a1.resize(m.h1);
  for (int j = 0; j < m.h1; ++j) sc.a1[j] = std::max(0.0, sc.z1[j]);

  sc.z2.assign(kD, 0.0);
  for (int j = 0; j < kD; ++j) {
    double acc = p[L.b2 + j];
    const double* w = p + L.w2 + j * m.h1;
    for (int i = 0; i < m.h1; ++i) acc += w[i] * sc.a1[i];
    sc.z2[j] = acc;
  }
  sc.a2.resize(kD);
  sc.s.resize(kD);
  for (int j = 0; j < kD; ++j) {
    sc.a2[j] = std::max(0.0, sc.z2[j]);
    sc.s[j] = x[j] + sc.a2[j];
  }

  sc.z3.assign(m.h2, 0.0);
  for (int j = 0; j < m.h2; ++j) {
    double acc = p[L.b3 + j];
    const double* w = p + L.w3 + j * kD;
    for (int i = 0; i < kD; ++i) acc += w[i] * sc.s[i];
    sc.z3[j] = acc;
  }
  sc.a3.resize(m.h2);
  for (int j = 0; j < m.h2; ++j) sc.a3[j] = std::max(0.0, sc.z3[j]);

  double o = p[L.b4];
  for (int j = 0; j < m.h2; ++j) o += p[L.w4 + j] * sc.a3[j];
  return sigmoid(o);
}

}  // namespace

HybNNModel hybnn_init(int h1, int h2, uint64_t seed) {
  HybNNModel m;
  m.h1 = h1;
  m.h2 = h2;
  m.params.assign(m.num_params(), 0.0);
  const Layout L(m);
  auto rng = named_stream(seed, "hybnn-init");
  auto fill = [&](int offset, int count, int fan_in) {
    double bound = std::sqrt(1.0 / fan_in);
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (int i = 0; i < count; ++i) m.params[offset + i] = dist(rng);
  };
  fill(L.w1, h1 * kD, kD);
  fill(L.b1, h1, kD);
  fill(L.w2, kD * h1, h1);
  fill(L.b2, kD, h1);
  fill(L.w3, h2 * kD, kD);
  fill(L.b3, h2, kD);
  fill(L.w4, h2, h2);
  fill(L.b4, 1, h2);
  return m;
}

double hybnn_forward(const HybNNModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != kD) {
    throw std::invalid_argument("hybnn_forward: expected 17 features");
  }
  Scratch sc;
  return forward(model, x.data(), sc);
}

double hybnn_loss_grad(const HybNNModel& m, const std::vector<double>& X,
                       const std::vector<double>& y, std::vector<double>& grad) {
  const size_t n = y.size();
  if (n == 0 || X.size() != n * kD) {
    throw std::invalid_argument("hybnn_loss_grad: bad batch shape");
  }
  const Layout L(m);
  const double* p = m.params.data();
  grad.assign(m.params.size(), 0.0);
  Scratch sc;
  std::vector<double> dz3(m.h2), ds(kD), dz2(kD), dz1(m.h1);
  double loss = 0.0;
  for (size_t r = 0; r < n; ++r) {
    const double* x = X.data() + r * kD;
    double pr = forward(m, x, sc);
    double err = pr - y[r];
    loss += err * err;
    double d_o = 2.0 * err / n * pr * (1.0 - pr);

    grad[L.b4] += d_o;
    for (int j = 0; j < m.h2; ++j) {
      grad[L.w4 + j] += d_o * sc.a3[j];
      dz3[j] = sc.z3[j] > 0.0 ? d_o * p[L.w4 + j] : 0.0;
    }
    std::fill(ds.begin(), ds.end(), 0.0);
    for (int j = 0; j < m.h2; ++j) {
      if (dz3[j] == 0.0) continue;
      grad[L.b3 + j] += dz3[j];
      double* gw = grad.data() + L.w3 + j * kD;
      const double* w = p + L.w3 + j * kD;
      for (int i = 0; i < kD; ++i) {
        gw[i] += dz3[j] * sc.s[i];
        ds[i] += dz3[j] * w[i];
      }
    }
    for (int j = 0; j < kD; ++j) dz2[j] = sc.z2[j] > 0.0 ? ds[j] : 0.0;
    std::fill(dz1.begin(), dz1.end(), 0.0);
    for (int j = 0; j < kD; ++j) {
      if (dz2[j] == 0.0) continue;
      grad[L.b2 + j] += dz2[j];
      double* gw = grad.data() + L.w2 + j * m.h1;
      const double* w = p + L.w2 + j * m.h1;
      for (int i = 0; i < m.h1; ++i) {
        gw[i] += dz2[j] * sc.a1[i];
        dz1[i] += dz2[j] * w[i];
      }
    }
    for (int j = 0; j < m.h1; ++j) {
      double d = sc.z1[j] > 0.0 ? dz1[j] : 0.0;
      if (d == 0.0) continue;
      grad[L.b1 + j] += d;
      double* gw = grad.data() + L.w1 + j * kD;
      for (int i = 0; i < kD; ++i) gw[i] += d * x[i];
    }
  }
  return loss / n;
}

double hybnn_mse(const HybNNModel& m, const std::vector<double>& X,
                 const std::vector<double>& y) {
  Scratch sc;
  double loss = 0.0;
  for (size_t r = 0; r < y.size(); ++r) {
    double pr = forward(m, X.data() + r * kD, sc);
    loss += (pr - y[r]) * (pr - y[r]);
  }
  return y.empty() ? 0.0 : loss / y.size();
}

HybNNTrainLog hybnn_train(HybNNModel& m, const std::vector<double>& X,
                          const std::vector<double>& y,
                          const HybNNTrainOptions& opts,
                          const std::vector<double>* X_val,
                          const std::vector<double>* y_val) {
  const size_t n = y.size();
  if (n == 0) throw std::invalid_argument("hybnn_train: empty training data");
  if (X.size() != n * kD) throw std::invalid_argument("hybnn_train: bad data shape");

  HybNNTrainLog log;
  std::vector<double> mom(m.params.size(), 0.0), vel(m.params.size(), 0.0);
  std::vector<double> grad;
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto rng = named_stream(opts.seed, "hybnn-shuffle");

  std::vector<double> bx, by;
  long step = 0;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<double> best_params;
  int stale = 0;

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t start = 0; start < n; start += opts.batch) {
      size_t end = std::min(n, start + opts.batch);
      bx.clear();
      by.clear();
      for (size_t i = start; i < end; ++i) {
        const double* x = X.data() + order[i] * kD;
        bx.insert(bx.end(), x, x + kD);
        by.push_back(y[order[i]]);
      }
      double loss = hybnn_loss_grad(m, bx, by, grad);
      if (!std::isfinite(loss)) {
        throw std::runtime_error("hybnn_train: non-finite loss at epoch " +
                                 std::to_string(epoch));
      }
      ++step;
      double bc1 = 1.0 - std::pow(opts.beta1, step);
      double bc2 = 1.0 - std::pow(opts.beta2, step);
      for (size_t i = 0; i < m.params.size(); ++i) {
        mom[i] = opts.beta1 * mom[i] + (1.0 - opts.beta1) * grad[i];
        vel[i] = opts.beta2 * vel[i] + (1.0 - opts.beta2) * grad[i] * grad[i];
        m.params[i] -= opts.lr * (mom[i] / bc1) / (std::sqrt(vel[i] / bc2) + opts.eps);
      }
    }
    log.train_mse.push_back(hybnn_mse(m, X, y));
    log.epochs_run = epoch + 1;
    if (X_val && y_val) {
      double v = hybnn_mse(m, *X_val, *y_val);
      log.val_mse.push_back(v);
      if (v < best_val) {
        best_val = v;
        best_params = m.params;
        stale = 0;
      } else if (++stale >= opts.patience) {
        m.params = best_params;
        break;
      }
    }
  }
  if (X_val && y_val && !best_params.empty() && best_val < hybnn_mse(m, *X_val, *y_val)) {
    m.params = best_params;
  }
  log.final_train_mse = hybnn_mse(m, X, y);
  return log;
}

}  // namespace atpg
