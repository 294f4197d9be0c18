/*
 * Copyright 2026 The cyberaggr Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cyberaggr/errors.hpp"
#include "cyberaggr/label.hpp"
#include "cyberaggr/models/standardizer.hpp"

namespace cyberaggr::models {

/// Row-wise softmax, shifted by the row max for stability.
inline Matrix softmax_rows(const Matrix& logits) {
  Matrix p(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    p.row(i) = (logits.row(i).array() - m).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

/// Class indices 0..2 from labels -1/0/+1.
inline std::vector<int> to_class_indices(std::span<const Label> y) {
  std::vector<int> out;
  out.reserve(y.size());
  for (Label l : y) {
    if (!is_label(l)) throw ValidationError("labels must be -1, 0 or +1");
    out.push_back(class_index(l));
  }
  return out;
}

struct LRModel {
  Matrix weights;  // K x D
  Vector biases;   // K
  double C = 1.0;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;  // gradient tolerance met or objective stalled
  std::vector<double> objective_trace;  // f at each accepted iterate

  Matrix predict_proba(const Matrix& X) const {
    if (X.cols() != weights.cols()) {
      throw ValidationError("LR input width " + std::to_string(X.cols()) +
                            " != model width " + std::to_string(weights.cols()));
    }
    Matrix logits = X * weights.transpose();
    logits.rowwise() += biases.transpose();
    return softmax_rows(logits);
  }
};

/// Penalized multinomial objective over packed parameters
/// [W row-major (K x D), b (K)]:
///   sum_i -log softmax(W x_i + b)[y_i] + ||W||^2 / (2C).
/// Biases are not penalized. Writes the gradient when `grad` is non-null.
inline double lr_objective(const Vector& params, const Matrix& X,
                           std::span<const int> y, double C, Vector* grad) {
  const Eigen::Index D = X.cols();
  const Eigen::Index K = kNumClasses;
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      W(params.data(), K, D);
  Eigen::Map<const Vector> b(params.data() + K * D, K);

  Matrix logits = X * W.transpose();
  logits.rowwise() += b.transpose();
  double loss = 0.0;
  Matrix delta(X.rows(), K);  // softmax - onehot
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    const Eigen::RowVectorXd e = (logits.row(i).array() - m).exp();
    const double z = e.sum();
    loss += std::log(z) + m - logits(i, y[i]);
    delta.row(i) = e / z;
    delta(i, y[i]) -= 1.0;
  }
  loss += W.squaredNorm() / (2.0 * C);
  if (grad) {
    grad->resize(params.size());
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>>
        gW(grad->data(), K, D);
    gW = delta.transpose() * X + W / C;
    grad->tail(K) = delta.colwise().sum().transpose();
  }
  return loss;
}

struct LRTrainOptions {
  double C = 1.0;
  double grad_tol = 1e-6;
  int max_iterations = 1000;
  int history = 10;  // L-BFGS memory
  double f_tol = 1e-12;  // relative decrease counted as no progress
  int stall_iterations = 5;  // consecutive no-progress iterations before stopping
};

/// Trains multinomial logistic regression with L-BFGS and an Armijo
/// backtracking line search, so the objective never increases. Starts from
/// zero parameters; the result depends only on the row multiset up to
/// floating-point summation order.
inline LRModel train_lr(const Matrix& X, std::span<const Label> labels,
                        const LRTrainOptions& opts = {}) {
  if (!(opts.C > 0.0)) throw ValidationError("LR requires C > 0");
  if (static_cast<std::size_t>(X.rows()) != labels.size() || X.rows() == 0) {
    throw ValidationError("LR: X rows and labels differ or are empty");
  }
  const auto y = to_class_indices(labels);
  {
    bool seen[kNumClasses] = {};
    int distinct = 0;
    for (int c : y) {
      if (!seen[c]) ++distinct;
      seen[c] = true;
    }
    if (distinct < 2) {
      throw ValidationError("LR: degenerate input, only one class present");
    }
  }
  const Eigen::Index D = X.cols();
  const Eigen::Index P = kNumClasses * D + kNumClasses;
  Vector w = Vector::Zero(P);
  Vector g;
  double f = lr_objective(w, X, y, opts.C, &g);
  std::deque<Vector> s_hist, y_hist;
  std::deque<double> rho_hist;

  LRModel model;
  model.C = opts.C;
  model.objective_trace.push_back(f);
  int it = 0;
  int stalled = 0;
  for (; it < opts.max_iterations; ++it) {
    if (!std::isfinite(f) || !g.allFinite()) {
      throw NumericError("LR: non-finite objective at iteration " +
                         std::to_string(it) + " (f=" + std::to_string(f) + ")");
    }
    if (g.norm() <= opts.grad_tol) break;

    // Two-loop recursion for the search direction.
    Vector q = g;
    std::vector<double> alpha(s_hist.size());
    for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(q);
      q -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty()) {
      q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(q);
      q += (alpha[k] - beta) * s_hist[k];
    }
    Vector dir = -q;
    double slope = g.dot(dir);
    if (slope >= 0.0) {  // not a descent direction; reset memory
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      dir = -g;
      slope = -g.squaredNorm();
    }
    double step = s_hist.empty() ? std::min(1.0, 1.0 / g.norm()) : 1.0;
    Vector w_new, g_new;
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      w_new = w + step * dir;
      f_new = lr_objective(w_new, X, y, opts.C, &g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no further decrease representable
    Vector s = w_new - w;
    Vector yv = g_new - g;
    const double sy = s.dot(yv);
    if (sy > 1e-12) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(yv));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opts.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const bool no_progress =
        f - f_new <= opts.f_tol * std::max({1.0, std::abs(f), std::abs(f_new)});
    stalled = no_progress ? stalled + 1 : 0;
    w = std::move(w_new);
    g = std::move(g_new);
    f = f_new;
    model.objective_trace.push_back(f);
    if (stalled >= opts.stall_iterations) {
      // Further progress is below floating-point resolution of f.
      ++it;
      model.converged = true;
      break;
    }
  }
  model.iterations = it;
  model.grad_norm = g.norm();
  model.converged = model.converged || model.grad_norm <= opts.grad_tol;
  model.weights = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                 Eigen::Dynamic, Eigen::RowMajor>>(
      w.data(), kNumClasses, D);
  model.biases = w.tail(kNumClasses);
  return model;
}

}  // namespace cyberaggr::models
