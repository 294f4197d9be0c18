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
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cyberaggr/errors.hpp"
#include "cyberaggr/features/assemble.hpp"
#include "cyberaggr/features/registry.hpp"
#include "cyberaggr/label.hpp"
#include "cyberaggr/models/logistic_regression.hpp"
#include "cyberaggr/models/neural_net.hpp"
#include "cyberaggr/models/standardizer.hpp"
#include "cyberaggr/models/svm.hpp"

namespace cyberaggr::models {

enum class ModelKind { kLR, kSVM, kNN, kAugHead };

inline std::string_view model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::kLR:
      return "lr";
    case ModelKind::kSVM:
      return "svm";
    case ModelKind::kNN:
      return "nn";
    case ModelKind::kAugHead:
      return "aug_head";
  }
  return "";
}

// Column header used in rendered reports.
inline std::string_view model_kind_display(ModelKind k) {
  switch (k) {
    case ModelKind::kLR:
      return "LR";
    case ModelKind::kSVM:
      return "SVM";
    case ModelKind::kNN:
      return "NN";
    case ModelKind::kAugHead:
      return "AugHead";
  }
  return "";
}

inline ModelKind parse_model_kind(std::string_view s) {
  for (ModelKind k : {ModelKind::kLR, ModelKind::kSVM, ModelKind::kNN,
                      ModelKind::kAugHead}) {
    if (s == model_kind_name(k)) return k;
  }
  throw ValidationError("unknown model type \"" + std::string(s) + "\"");
}

/// The augmented head reads exactly these blocks (134 + 512 = 646 inputs).
inline const std::vector<features::Block>& aug_head_blocks() {
  static const std::vector<features::Block> b = {features::Block::kBasic,
                                                 features::Block::kDynamic,
                                                 features::Block::kTransformer};
  return b;
}

struct ModelSpec {
  ModelKind kind = ModelKind::kLR;
  double C = 1.0;
  std::optional<double> gamma;
  NNTrainerConfig nn;
  LRTrainOptions lr;

  /// Rejects block sets the model cannot consume before any work is done.
  void validate(std::span<const features::Block> blocks) const {
    const auto bs = features::canonical_blocks(blocks);
    if (bs.empty()) throw ValidationError("no feature blocks selected");
    const bool has_tf = std::find(bs.begin(), bs.end(),
                                  features::Block::kTransformer) != bs.end();
    if (kind == ModelKind::kAugHead && bs != aug_head_blocks()) {
      throw ValidationError(
          "aug_head requires exactly the basic, dynamic and transformer blocks");
    }
    if (kind != ModelKind::kAugHead && has_tf) {
      throw ValidationError("the transformer block is only consumed by aug_head");
    }
    if ((kind == ModelKind::kLR || kind == ModelKind::kSVM) && !(C > 0.0)) {
      throw ValidationError("C must be > 0");
    }
  }
};

/// A fitted model with its preprocessing statistics and provenance.
struct TrainedModel {
  ModelKind kind = ModelKind::kLR;
  std::vector<features::Block> blocks;
  Standardizer standardizer;
  std::variant<LRModel, SVMModel, NNModel> params;
  std::string embedding_provenance;  // aug_head only

  Eigen::Index input_width() const { return standardizer.width(); }
};

inline TrainedModel fit_model(const ModelSpec& spec,
                              std::span<const features::Block> blocks,
                              const Matrix& X_raw, std::span<const Label> y,
                              std::string embedding_provenance = {}) {
  spec.validate(blocks);
  TrainedModel m;
  m.kind = spec.kind;
  m.blocks = features::canonical_blocks(blocks);
  if (static_cast<std::size_t>(X_raw.cols()) != features::total_width(m.blocks)) {
    throw ValidationError("input width " + std::to_string(X_raw.cols()) +
                          " does not match blocks " + features::blocks_label(m.blocks));
  }
  m.standardizer = Standardizer::fit(X_raw);
  const Matrix X = m.standardizer.apply(X_raw);
  switch (spec.kind) {
    case ModelKind::kLR: {
      LRTrainOptions o = spec.lr;
      o.C = spec.C;
      m.params = train_lr(X, y, o);
      break;
    }
    case ModelKind::kSVM: {
      SVMTrainOptions o;
      o.C = spec.C;
      o.gamma = spec.gamma;
      m.params = train_svm(X, y, o);
      break;
    }
    case ModelKind::kNN:
      m.params = train_nn(X, y, spec.nn);
      break;
    case ModelKind::kAugHead:
      if (embedding_provenance.empty()) embedding_provenance = "unknown";
      m.embedding_provenance = std::move(embedding_provenance);
      m.params = train_nn(X, y, spec.nn);
      break;
  }
  return m;
}

/// Class probabilities in label order (-1, 0, +1), one row per input row.
/// X_raw is unstandardized; the model's training statistics are applied.
inline Matrix predict_proba(const TrainedModel& m, const Matrix& X_raw) {
  if (X_raw.cols() != m.input_width()) {
    throw ValidationError("input width " + std::to_string(X_raw.cols()) +
                          " != model width " + std::to_string(m.input_width()));
  }
  const Matrix X = m.standardizer.apply(X_raw);
  return std::visit([&](const auto& p) { return p.predict_proba(X); }, m.params);
}

/// Argmax with ties broken toward the lower class index.
inline std::vector<Label> argmax_labels(const Matrix& proba) {
  std::vector<Label> out(proba.rows());
  for (Eigen::Index i = 0; i < proba.rows(); ++i) {
    int best = 0;
    for (int c = 1; c < proba.cols(); ++c) {
      if (proba(i, c) > proba(i, best)) best = c;
    }
    out[i] = label_of(best);
  }
  return out;
}

inline std::vector<Label> predict(const TrainedModel& m, const Matrix& X_raw) {
  return argmax_labels(predict_proba(m, X_raw));
}

/// Stacks the requested blocks of each feature vector into a matrix.
inline Matrix design_matrix(const std::vector<features::FeatureVector>& rows,
                            std::span<const features::Block> blocks) {
  const auto bs = features::canonical_blocks(blocks);
  const auto width = static_cast<Eigen::Index>(features::total_width(bs));
  Matrix X(static_cast<Eigen::Index>(rows.size()), width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto v = rows[i].concat(bs);
    X.row(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::RowVectorXd>(v.data(), width);
  }
  return X;
}

}  // namespace cyberaggr::models
