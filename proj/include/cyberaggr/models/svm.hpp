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
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cyberaggr/errors.hpp"
#include "cyberaggr/label.hpp"
#include "cyberaggr/models/logistic_regression.hpp"
#include "cyberaggr/models/standardizer.hpp"

namespace cyberaggr::models {

/// exp(-gamma * ||a_i - b_j||^2) for every row pair.
inline Matrix rbf_kernel(const Matrix& A, const Matrix& B, double gamma) {
  const Vector an = A.rowwise().squaredNorm();
  const Vector bn = B.rowwise().squaredNorm();
  Matrix K = -2.0 * (A * B.transpose());
  K.colwise() += an;
  K.rowwise() += bn.transpose();
  return (-gamma * K.array().max(0.0)).exp().matrix();
}

/// "scale" heuristic: 1 / (D * Var(X)) over all entries of X.
inline double scale_gamma(const Matrix& X) {
  const double n = static_cast<double>(X.size());
  if (n == 0) return 1.0;
  const double mean = X.mean();
  const double var = (X.array() - mean).square().sum() / n;
  return var > 0.0 ? 1.0 / (static_cast<double>(X.cols()) * var) : 1.0;
}

struct SmoResult {
  Vector alpha;
  double rho = 0.0;  // decision(x) = sum alpha_i y_i K(x_i, x) - rho
  long iterations = 0;
  double kkt_gap = 0.0;  // maximal violating pair gap at exit
  bool converged = false;
};

/// Dual objective 0.5 a'Qa - sum(a), Q_ij = y_i y_j K_ij.
inline double svm_dual_objective(const Matrix& K, std::span<const double> y,
                                 const Vector& alpha) {
  const Eigen::Index n = K.rows();
  Vector ya(n);
  for (Eigen::Index i = 0; i < n; ++i) ya(i) = y[i] * alpha(i);
  return 0.5 * ya.dot(K * ya) - alpha.sum();
}

/// Sequential minimal optimization for the C-SVC dual
///   min 0.5 a'Qa - e'a  s.t.  y'a = 0, 0 <= a <= C
/// using maximal-violating-pair selection with second-order gain for the
/// second index. Stops when the pair gap falls below eps.
inline SmoResult solve_smo(const Matrix& K, std::span<const double> y, double C,
                           double eps = 1e-3, long max_iter = -1) {
  constexpr double kTau = 1e-12;
  const Eigen::Index n = K.rows();
  if (max_iter < 0) max_iter = std::max<long>(10'000'000, 100 * n);
  SmoResult r;
  r.alpha = Vector::Zero(n);
  Vector& a = r.alpha;
  Vector G = Vector::Constant(n, -1.0);
  auto Q = [&](Eigen::Index i, Eigen::Index j) { return y[i] * y[j] * K(i, j); };
  auto upper = [&](Eigen::Index t) { return a(t) >= C; };
  auto lower = [&](Eigen::Index t) { return a(t) <= 0.0; };

  for (;;) {
    double gmax = -std::numeric_limits<double>::infinity();
    double gmax2 = -std::numeric_limits<double>::infinity();
    Eigen::Index i = -1, j = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (!upper(t) && -G(t) >= gmax) {
          gmax = -G(t);
          i = t;
        }
      } else if (!lower(t) && G(t) >= gmax) {
        gmax = G(t);
        i = t;
      }
    }
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n && i >= 0; ++t) {
      if (y[t] > 0) {
        if (lower(t)) continue;
        const double grad_diff = gmax + G(t);
        gmax2 = std::max(gmax2, G(t));
        if (grad_diff > 0) {
          double quad = K(i, i) + K(t, t) - 2.0 * y[i] * Q(i, t);
          if (quad <= 0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= best) {
            best = obj;
            j = t;
          }
        }
      } else {
        if (upper(t)) continue;
        const double grad_diff = gmax - G(t);
        gmax2 = std::max(gmax2, -G(t));
        if (grad_diff > 0) {
          double quad = K(i, i) + K(t, t) + 2.0 * y[i] * Q(i, t);
          if (quad <= 0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= best) {
            best = obj;
            j = t;
          }
        }
      }
    }
    r.kkt_gap = (i >= 0) ? std::max(0.0, gmax + gmax2) : 0.0;
    if (i < 0 || j < 0 || gmax + gmax2 < eps) {
      r.converged = true;
      break;
    }
    if (r.iterations >= max_iter) break;
    ++r.iterations;

    const double ai_old = a(i), aj_old = a(j);
    if (y[i] != y[j]) {
      double quad = K(i, i) + K(j, j) + 2.0 * Q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (-G(i) - G(j)) / quad;
      const double diff = a(i) - a(j);
      a(i) += delta;
      a(j) += delta;
      if (diff > 0) {
        if (a(j) < 0) {
          a(j) = 0;
          a(i) = diff;
        }
      } else if (a(i) < 0) {
        a(i) = 0;
        a(j) = -diff;
      }
      if (diff > 0) {
        if (a(i) > C) {
          a(i) = C;
          a(j) = C - diff;
        }
      } else if (a(j) > C) {
        a(j) = C;
        a(i) = C + diff;
      }
    } else {
      double quad = K(i, i) + K(j, j) - 2.0 * Q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (G(i) - G(j)) / quad;
      const double sum = a(i) + a(j);
      a(i) -= delta;
      a(j) += delta;
      if (sum > C) {
        if (a(i) > C) {
          a(i) = C;
          a(j) = sum - C;
        }
      } else if (a(j) < 0) {
        a(j) = 0;
        a(i) = sum;
      }
      if (sum > C) {
        if (a(j) > C) {
          a(j) = C;
          a(i) = sum - C;
        }
      } else if (a(i) < 0) {
        a(i) = 0;
        a(j) = sum;
      }
    }
    const double di = a(i) - ai_old, dj = a(j) - aj_old;
    for (Eigen::Index t = 0; t < n; ++t) {
      G(t) += Q(i, t) * di + Q(j, t) * dj;
    }
  }

  // Offset from free vectors, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  int nr_free = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y[t] * G(t);
    if (upper(t)) {
      if (y[t] < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (y[t] > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++nr_free;
      sum_free += yg;
    }
  }
  r.rho = nr_free > 0 ? sum_free / nr_free : (ub + lb) / 2.0;
  return r;
}

/// One binary RBF machine of the one-vs-rest ensemble.
struct BinarySvm {
  Matrix support;  // support vectors, one per row
  Vector coef;     // alpha_i * y_i
  double bias = 0.0;
  long iterations = 0;
  double kkt_gap = 0.0;
  bool converged = true;

  Vector decision(const Matrix& X, double gamma) const {
    if (support.rows() == 0) return Vector::Constant(X.rows(), bias);
    return rbf_kernel(X, support, gamma) * coef + Vector::Constant(X.rows(), bias);
  }
};

struct SVMModel {
  double C = 1.0;
  double gamma = 1.0;
  std::array<BinarySvm, kNumClasses> machines;
  Eigen::Index input_width = 0;
  std::vector<std::string> warnings;

  Matrix decision_values(const Matrix& X) const {
    if (X.cols() != input_width) {
      throw ValidationError("SVM input width " + std::to_string(X.cols()) +
                            " != model width " + std::to_string(input_width));
    }
    Matrix d(X.rows(), kNumClasses);
    for (int c = 0; c < kNumClasses; ++c) d.col(c) = machines[c].decision(X, gamma);
    return d;
  }

  /// Softmax over the per-class decision values. This is a ranking score
  /// suitable for one-vs-rest AUC, not a calibrated probability.
  Matrix predict_proba(const Matrix& X) const {
    return softmax_rows(decision_values(X));
  }
};

struct SVMTrainOptions {
  double C = 1.0;
  std::optional<double> gamma;  // default: scale_gamma(X)
  double eps = 1e-3;
  long max_iter = -1;
};

inline SVMModel train_svm(const Matrix& X, std::span<const Label> labels,
                          const SVMTrainOptions& opts = {}) {
  if (!(opts.C > 0.0)) {
    throw ValidationError("SVM requires C > 0 (C=" + std::to_string(opts.C) + ")");
  }
  if (static_cast<std::size_t>(X.rows()) != labels.size() || X.rows() == 0) {
    throw ValidationError("SVM: X rows and labels differ or are empty");
  }
  const auto y = to_class_indices(labels);
  SVMModel model;
  model.C = opts.C;
  model.gamma = opts.gamma ? *opts.gamma : scale_gamma(X);
  if (!(model.gamma > 0.0)) throw ValidationError("SVM requires gamma > 0");
  model.input_width = X.cols();
  const Matrix K = rbf_kernel(X, X, model.gamma);
  const Eigen::Index n = X.rows();
  std::vector<double> yb(n);
  for (int c = 0; c < kNumClasses; ++c) {
    int pos = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      yb[i] = y[i] == c ? 1.0 : -1.0;
      pos += y[i] == c;
    }
    BinarySvm& m = model.machines[c];
    if (pos == 0 || pos == n) {
      m.bias = pos == 0 ? -1.0 : 1.0;
      continue;
    }
    const SmoResult r = solve_smo(K, yb, opts.C, opts.eps, opts.max_iter);
    m.iterations = r.iterations;
    m.kkt_gap = r.kkt_gap;
    m.converged = r.converged;
    if (!r.converged) {
      model.warnings.push_back("class " + std::to_string(label_of(c)) +
                               ": SMO stopped at max iterations, gap " +
                               std::to_string(r.kkt_gap));
    }
    std::vector<Eigen::Index> sv;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (r.alpha(i) > 0.0) sv.push_back(i);
    }
    m.support.resize(static_cast<Eigen::Index>(sv.size()), X.cols());
    m.coef.resize(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t k = 0; k < sv.size(); ++k) {
      m.support.row(k) = X.row(sv[k]);
      m.coef(k) = r.alpha(sv[k]) * yb[sv[k]];
    }
    m.bias = -r.rho;
  }
  return model;
}

}  // namespace cyberaggr::models
