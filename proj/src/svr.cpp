#include "atpg/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace atpg {
namespace {

double rbf(double gamma, std::span<const double> a, std::span<const double> b) {
  double d2 = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double kernel_eval(const SvrModel& m, std::span<const double> a,
                   std::span<const double> b) {
  return m.kernel == SvrKernel::RBF ? rbf(m.gamma, a, b) : dot(a, b);
}

SvrModel svr_train(const std::vector<std::vector<double>>& X,
                   const std::vector<double>& y, const SvrTrainOptions& opts) {
  const int n = static_cast<int>(y.size());
  if (n == 0 || X.size() != y.size()) {
    throw std::invalid_argument("svr_train: empty or mismatched data");
  }
  const int dim = static_cast<int>(X[0].size());

  SvrModel model;
  model.dim = dim;
  model.kernel = opts.kernel;
  model.C = opts.C;
  model.epsilon = opts.epsilon;
  if (opts.gamma > 0.0) {
    model.gamma = opts.gamma;
  } else {
    double var = 0.0;
    for (int f = 0; f < dim; ++f) {
      double mean = 0.0;
      for (int i = 0; i < n; ++i) mean += X[i][f];
      mean /= n;
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += (X[i][f] - mean) * (X[i][f] - mean);
      var += v / n;
    }
    var /= dim;
    model.gamma = var > 0.0 ? 1.0 / (dim * var) : 1.0;
  }

  std::vector<double> K(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double k = kernel_eval(model, X[i], X[j]);
      K[static_cast<size_t>(i) * n + j] = k;
      K[static_cast<size_t>(j) * n + i] = k;
    }
  }

  // 2n-variable SMO: s < n are the alpha+ variables (z=+1), s >= n the
  // alpha- variables (z=-1). Constraint: sum z_s a_s = 0, 0 <= a_s <= C.
  const int m2 = 2 * n;
  const double C = opts.C;
  std::vector<double> a(m2, 0.0), G(m2);
  auto zof = [n](int s) { return s < n ? 1.0 : -1.0; };
  auto rof = [n](int s) { return s < n ? s : s - n; };
  for (int s = 0; s < m2; ++s) {
    G[s] = s < n ? opts.epsilon - y[s] : opts.epsilon + y[s - n];
  }

  double gap = std::numeric_limits<double>::infinity();
  long iter = 0;
  double m_up = 0.0, m_low = 0.0;
  while (true) {
    int si = -1, sj = -1;
    m_up = -std::numeric_limits<double>::infinity();
    m_low = std::numeric_limits<double>::infinity();
    for (int s = 0; s < m2; ++s) {
      double z = zof(s);
      double v = -z * G[s];
      bool in_up = (z > 0 && a[s] < C) || (z < 0 && a[s] > 0);
      bool in_low = (z > 0 && a[s] > 0) || (z < 0 && a[s] < C);
      if (in_up && v > m_up) { m_up = v; si = s; }
      if (in_low && v < m_low) { m_low = v; sj = s; }
    }
    gap = m_up - m_low;
    if (gap <= opts.tol || si < 0 || sj < 0) break;
    if (++iter > opts.max_iter) {
      throw std::runtime_error("svr_train: no convergence within iteration cap (gap " +
                               std::to_string(gap) + ")");
    }
    double zi = zof(si), zj = zof(sj);
    int ri = rof(si), rj = rof(sj);
    double qii = K[static_cast<size_t>(ri) * n + ri];
    double qjj = K[static_cast<size_t>(rj) * n + rj];
    double qij = zi * zj * K[static_cast<size_t>(ri) * n + rj];
    double curve = qii + qjj - 2.0 * qij;
    if (curve <= 1e-12) curve = 1e-12;
    // Step a_i += z_i * lam, a_j -= z_j * lam preserves the constraint.
    double lam = (zj * G[sj] - zi * G[si]) / curve;
    double up_i = zi > 0 ? C - a[si] : a[si];
    double up_j = zj > 0 ? a[sj] : C - a[sj];
    lam = std::min(lam, std::min(up_i, up_j));
    if (lam <= 0.0) break;  // numerically stuck at the boundary
    a[si] += zi > 0 ? lam : -lam;
    a[sj] -= zj > 0 ? lam : -lam;
    for (int s = 0; s < m2; ++s) {
      double z = zof(s);
      int r = rof(s);
      G[s] += z * lam * (zi * zi * K[static_cast<size_t>(r) * n + ri] -
                         zj * zj * K[static_cast<size_t>(r) * n + rj]);
    }
  }
  model.kkt_gap = gap;

  // Bias: -z_s G_s for free variables; midpoint of the bounds otherwise.
  {
    double sum = 0.0;
    int free_count = 0;
    for (int s = 0; s < m2; ++s) {
      if (a[s] > 0.0 && a[s] < C) {
        sum += -zof(s) * G[s];
        ++free_count;
      }
    }
    model.bias = free_count > 0 ? sum / free_count : (m_up + m_low) / 2.0;
    if (!std::isfinite(model.bias)) model.bias = 0.0;
  }

  for (int i = 0; i < n; ++i) {
    double beta = a[i] - a[n + i];
    if (beta != 0.0) {
      model.support_vectors.push_back(X[i]);
      model.dual.push_back(beta);
    }
  }
  return model;
}

double svr_predict_raw(const SvrModel& m, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.dim) {
    throw std::invalid_argument("svr_predict: dimension mismatch");
  }
  double f = m.bias;
  for (size_t i = 0; i < m.dual.size(); ++i) {
    f += m.dual[i] * kernel_eval(m, m.support_vectors[i], x);
  }
  return f;
}

double svr_predict(const SvrModel& m, std::span<const double> x) {
  return std::clamp(svr_predict_raw(m, x), 0.0, 1.0);
}

}  // namespace atpg
