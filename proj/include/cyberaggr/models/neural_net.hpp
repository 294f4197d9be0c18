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
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cyberaggr/errors.hpp"
#include "cyberaggr/label.hpp"
#include "cyberaggr/models/logistic_regression.hpp"
#include "cyberaggr/models/standardizer.hpp"
#include "cyberaggr/rng.hpp"

namespace cyberaggr::models {

inline const std::vector<int>& default_hidden_layers() {
  static const std::vector<int> h = {128, 64, 32};
  return h;
}

/// Layer widths from input to output: D, hidden..., 3.
inline std::vector<int> mlp_widths(int input_dim,
                                   const std::vector<int>& hidden = default_hidden_layers()) {
  std::vector<int> w{input_dim};
  w.insert(w.end(), hidden.begin(), hidden.end());
  w.push_back(kNumClasses);
  return w;
}

inline std::int64_t mlp_param_count(std::span<const int> widths) {
  std::int64_t n = 0;
  for (std::size_t l = 1; l < widths.size(); ++l) {
    n += static_cast<std::int64_t>(widths[l]) * widths[l - 1] + widths[l];
  }
  return n;
}

struct NNTrainerConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int epochs = 200;
  int batch_size = 32;
  double validation_fraction = 0.1;
  int patience = 20;
  std::uint64_t seed = 42;
};

/// Raised when the training loss turns non-finite; carries the best
/// parameters seen before the failure.
class NNTrainingAborted : public NumericError {
 public:
  NNTrainingAborted(const std::string& what, Vector checkpoint)
      : NumericError(what), checkpoint(std::move(checkpoint)) {}
  Vector checkpoint;
};

namespace detail {

using MatMap = Eigen::Map<const Matrix>;
using MutMatMap = Eigen::Map<Matrix>;

struct LayerView {
  Eigen::Index in = 0, out = 0, offset = 0;
};

inline std::vector<LayerView> layer_views(std::span<const int> widths) {
  std::vector<LayerView> v;
  Eigen::Index off = 0;
  for (std::size_t l = 1; l < widths.size(); ++l) {
    v.push_back({widths[l - 1], widths[l], off});
    off += static_cast<Eigen::Index>(widths[l]) * widths[l - 1] + widths[l];
  }
  return v;
}

}  // namespace detail

/// Dense ReLU network with a softmax output over three classes. Parameters
/// are stored flat; layer l holds W (out x in, column-major) then b (out).
struct NNModel {
  std::vector<int> widths;
  Vector params;
  NNTrainerConfig trainer;
  std::vector<double> train_loss;  // mean minibatch loss per epoch
  std::vector<double> val_loss;
  int best_epoch = -1;

  Eigen::Index input_width() const { return widths.empty() ? 0 : widths.front(); }
  std::int64_t param_count() const { return mlp_param_count(widths); }

  Matrix predict_proba(const Matrix& X) const;
};

/// Forward pass. Keeps pre-activations and activations when requested.
inline Matrix mlp_forward(const Vector& params, std::span<const int> widths,
                          const Matrix& X, std::vector<Matrix>* zs = nullptr,
                          std::vector<Matrix>* acts = nullptr) {
  const auto layers = detail::layer_views(widths);
  Matrix a = X;
  if (acts) acts->assign(1, X);
  if (zs) zs->clear();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& L = layers[l];
    detail::MatMap W(params.data() + L.offset, L.out, L.in);
    Eigen::Map<const Vector> b(params.data() + L.offset + L.out * L.in, L.out);
    Matrix z = a * W.transpose();
    z.rowwise() += b.transpose();
    if (zs) zs->push_back(z);
    if (l + 1 < layers.size()) {
      a = z.cwiseMax(0.0);
      if (acts) acts->push_back(a);
    } else {
      a = softmax_rows(z);
    }
  }
  return a;
}

inline Matrix NNModel::predict_proba(const Matrix& X) const {
  if (X.cols() != input_width()) {
    throw ValidationError("NN input width " + std::to_string(X.cols()) +
                          " != model width " + std::to_string(input_width()));
  }
  return mlp_forward(params, widths, X);
}

/// Mean cross-entropy over the rows of X and, optionally, its gradient by
/// backpropagation.
inline double mlp_loss(const Vector& params, std::span<const int> widths,
                       const Matrix& X, std::span<const int> y, Vector* grad) {
  std::vector<Matrix> zs, acts;
  const Matrix p = mlp_forward(params, widths, X, &zs, &acts);
  const double B = static_cast<double>(X.rows());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    // log-softmax from the logits for accuracy on confident rows
    const auto& z = zs.back();
    const double m = z.row(i).maxCoeff();
    loss += std::log((z.row(i).array() - m).exp().sum()) + m - z(i, y[i]);
  }
  loss /= B;
  if (!grad) return loss;

  const auto layers = detail::layer_views(widths);
  grad->setZero(params.size());
  Matrix dz = p;
  for (Eigen::Index i = 0; i < X.rows(); ++i) dz(i, y[i]) -= 1.0;
  dz /= B;
  for (std::size_t l = layers.size(); l-- > 0;) {
    const auto& L = layers[l];
    detail::MutMatMap gW(grad->data() + L.offset, L.out, L.in);
    Eigen::Map<Vector> gb(grad->data() + L.offset + L.out * L.in, L.out);
    gW = dz.transpose() * acts[l];
    gb = dz.colwise().sum().transpose();
    if (l > 0) {
      detail::MatMap W(params.data() + L.offset, L.out, L.in);
      Matrix da = dz * W;
      dz = da.array() * (zs[l - 1].array() > 0.0).cast<double>();
    }
  }
  return loss;
}

/// He-uniform weights, zero biases.
inline Vector mlp_init(std::span<const int> widths, Rng& rng) {
  Vector p(mlp_param_count(widths));
  for (const auto& L : detail::layer_views(widths)) {
    const double limit = std::sqrt(6.0 / static_cast<double>(L.in));
    for (Eigen::Index k = 0; k < L.out * L.in; ++k) {
      p(L.offset + k) = rng.uniform(-limit, limit);
    }
    p.segment(L.offset + L.out * L.in, L.out).setZero();
  }
  return p;
}

/// Adam on minibatches with a held-out validation slice for early stopping;
/// the best-validation parameters are restored at the end. Initialization,
/// the validation split and every epoch's shuffle derive from trainer.seed,
/// so repeated runs produce identical loss trajectories.
inline NNModel train_nn(const Matrix& X, std::span<const Label> labels,
                        const NNTrainerConfig& cfg = {},
                        const std::vector<int>& hidden = default_hidden_layers()) {
  if (static_cast<std::size_t>(X.rows()) != labels.size() || X.rows() == 0) {
    throw ValidationError("NN: X rows and labels differ or are empty");
  }
  if (cfg.batch_size < 1 || cfg.epochs < 0 || cfg.learning_rate <= 0.0) {
    throw ValidationError("NN: invalid trainer configuration");
  }
  const auto y = to_class_indices(labels);
  NNModel model;
  model.widths = mlp_widths(static_cast<int>(X.cols()), hidden);
  model.trainer = cfg;
  Rng rng(cfg.seed);
  model.params = mlp_init(model.widths, rng);

  const Eigen::Index n = X.rows();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span(order));
  Eigen::Index n_val = static_cast<Eigen::Index>(
      std::floor(cfg.validation_fraction * static_cast<double>(n)));
  if (n_val >= n) n_val = 0;
  std::vector<Eigen::Index> val_idx(order.begin(), order.begin() + n_val);
  std::vector<Eigen::Index> train_idx(order.begin() + n_val, order.end());
  std::sort(train_idx.begin(), train_idx.end());

  auto gather = [&](std::span<const Eigen::Index> idx, Matrix& xb,
                    std::vector<int>& yb) {
    xb.resize(static_cast<Eigen::Index>(idx.size()), X.cols());
    yb.resize(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      xb.row(k) = X.row(idx[k]);
      yb[k] = y[idx[k]];
    }
  };
  Matrix x_val;
  std::vector<int> y_val;
  gather(val_idx, x_val, y_val);

  Vector m1 = Vector::Zero(model.params.size());
  Vector m2 = Vector::Zero(model.params.size());
  Vector grad;
  Vector best = model.params;
  double best_val = std::numeric_limits<double>::infinity();
  int since_best = 0;
  long step = 0;
  Matrix xb;
  std::vector<int> yb;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span(train_idx));
    double epoch_loss = 0.0;
    int batches = 0;
    for (std::size_t start = 0; start < train_idx.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop =
          std::min(train_idx.size(), start + static_cast<std::size_t>(cfg.batch_size));
      gather(std::span(train_idx).subspan(start, stop - start), xb, yb);
      const double loss = mlp_loss(model.params, model.widths, xb, yb, &grad);
      if (!std::isfinite(loss) || !grad.allFinite()) {
        throw NNTrainingAborted("NN: non-finite loss at epoch " +
                                    std::to_string(epoch),
                                best);
      }
      ++step;
      m1 = cfg.beta1 * m1 + (1.0 - cfg.beta1) * grad;
      m2 = cfg.beta2 * m2 + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
      const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      model.params.array() -= cfg.learning_rate * (m1.array() / c1) /
                              ((m2.array() / c2).sqrt() + cfg.epsilon);
      epoch_loss += loss;
      ++batches;
    }
    model.train_loss.push_back(batches ? epoch_loss / batches : 0.0);

    if (n_val > 0) {
      const double v = mlp_loss(model.params, model.widths, x_val, y_val, nullptr);
      model.val_loss.push_back(v);
      if (v < best_val) {
        best_val = v;
        best = model.params;
        model.best_epoch = epoch;
        since_best = 0;
      } else if (++since_best >= cfg.patience) {
        break;
      }
    } else {
      best = model.params;
      model.best_epoch = epoch;
    }
  }
  model.params = best;
  return model;
}

}  // namespace cyberaggr::models
