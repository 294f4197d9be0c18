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
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cyberaggr/errors.hpp"
#include "cyberaggr/label.hpp"

namespace cyberaggr::eval {

/// Rows are true labels, columns predictions, both in order (-1, 0, +1).
struct ConfusionMatrix {
  std::array<std::array<long, kNumClasses>, kNumClasses> counts{};

  long total() const {
    long n = 0;
    for (const auto& r : counts) n += std::accumulate(r.begin(), r.end(), 0L);
    return n;
  }
};

namespace detail {

inline void check_pair(std::span<const Label> y_true,
                       std::span<const Label> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw ValidationError("y_true and y_pred lengths differ (" +
                          std::to_string(y_true.size()) + " vs " +
                          std::to_string(y_pred.size()) + ")");
  }
  if (y_true.empty()) throw ValidationError("metrics need at least one row");
}

}  // namespace detail

inline ConfusionMatrix confusion_matrix(std::span<const Label> y_true,
                                        std::span<const Label> y_pred) {
  detail::check_pair(y_true, y_pred);
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (!is_label(y_true[i]) || !is_label(y_pred[i])) {
      throw ValidationError("labels must be -1, 0 or +1");
    }
    ++cm.counts[class_index(y_true[i])][class_index(y_pred[i])];
  }
  return cm;
}

inline double accuracy(std::span<const Label> y_true,
                       std::span<const Label> y_pred) {
  detail::check_pair(y_true, y_pred);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) hits += y_true[i] == y_pred[i];
  return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Per-class precision, recall and F1. An undefined ratio (0/0) is 0.
inline std::array<ClassScores, kNumClasses> class_scores(const ConfusionMatrix& cm) {
  std::array<ClassScores, kNumClasses> out{};
  for (int c = 0; c < kNumClasses; ++c) {
    const double tp = static_cast<double>(cm.counts[c][c]);
    double predicted = 0, actual = 0;
    for (int k = 0; k < kNumClasses; ++k) {
      predicted += static_cast<double>(cm.counts[k][c]);
      actual += static_cast<double>(cm.counts[c][k]);
    }
    auto& s = out[c];
    s.precision = predicted > 0 ? tp / predicted : 0.0;
    s.recall = actual > 0 ? tp / actual : 0.0;
    s.f1 = s.precision + s.recall > 0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
  }
  return out;
}

/// Unweighted mean of the three per-class F1 scores; always divides by 3,
/// so a class that is never true and never predicted contributes 0.
inline double macro_f1(std::span<const Label> y_true,
                       std::span<const Label> y_pred) {
  const auto s = class_scores(confusion_matrix(y_true, y_pred));
  return (s[0].f1 + s[1].f1 + s[2].f1) / 3.0;
}

/// Mann-Whitney AUC of `scores` for positives vs negatives with midranks
/// for ties. Requires at least one of each.
inline double binary_auc(std::span<const double> scores,
                         std::span<const bool> positive) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[idx[j + 1]] == scores[idx[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (positive[idx[k]]) {
        rank_sum += midrank;
        ++n_pos;
      }
    }
    i = j + 1;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw ValidationError("AUC needs at least one positive and one negative");
  }
  const double np = static_cast<double>(n_pos);
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

struct OvrAuc {
  double macro = 0.0;
  std::array<std::optional<double>, kNumClasses> per_class{};
  std::vector<Label> excluded;  // classes lacking positives or negatives
};

/// One-vs-rest AUC of column c of `proba` for (y == class c). The macro
/// value averages the classes that have both positives and negatives.
inline OvrAuc ovr_auc(std::span<const Label> y_true, const Eigen::MatrixXd& proba) {
  if (static_cast<std::size_t>(proba.rows()) != y_true.size() ||
      proba.cols() != kNumClasses) {
    throw ValidationError("proba must be n x 3 with n = len(y_true)");
  }
  if (y_true.empty()) throw ValidationError("metrics need at least one row");
  OvrAuc out;
  std::vector<double> scores(y_true.size());
  std::unique_ptr<bool[]> pos(new bool[y_true.size()]);
  double sum = 0.0;
  int used = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      scores[i] = proba(static_cast<Eigen::Index>(i), c);
      pos[i] = class_index(y_true[i]) == c;
      n_pos += pos[i];
    }
    if (n_pos == 0 || n_pos == y_true.size()) {
      out.excluded.push_back(label_of(c));
      continue;
    }
    const double a = binary_auc(scores, std::span<const bool>(pos.get(), y_true.size()));
    out.per_class[c] = a;
    sum += a;
    ++used;
  }
  if (used == 0) {
    throw ValidationError("AUC undefined: every row has the same class");
  }
  out.macro = sum / used;
  return out;
}

}  // namespace cyberaggr::eval
