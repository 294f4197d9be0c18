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

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cyberaggr/errors.hpp"
#include "cyberaggr/eval/metrics.hpp"
#include "cyberaggr/label.hpp"
#include "cyberaggr/models/classifier.hpp"
#include "cyberaggr/parallel.hpp"
#include "cyberaggr/rng.hpp"

namespace cyberaggr::eval {

enum class Protocol { kStratifiedKFold, kHoldout };

inline std::string_view protocol_name(Protocol p) {
  return p == Protocol::kHoldout ? "stratified_holdout_80_20"
                                 : "stratified_kfold";
}

/// Fold index of every row. Each class is shuffled with the seed and dealt
/// round-robin, continuing the dealer position across classes so fold sizes
/// differ by at most one. Every class needs at least k members, except for
/// leave-one-out (k == n).
inline std::vector<int> stratified_folds(std::span<const Label> y, int k,
                                         std::uint64_t seed) {
  const auto n = static_cast<int>(y.size());
  if (k < 2) throw ValidationError("cross-validation needs k >= 2");
  if (k > n) {
    throw ValidationError("k=" + std::to_string(k) + " exceeds the " +
                          std::to_string(n) + " available rows");
  }
  std::array<std::vector<int>, kNumClasses> members;
  for (int i = 0; i < n; ++i) {
    if (!is_label(y[i])) throw ValidationError("labels must be -1, 0 or +1");
    members[class_index(y[i])].push_back(i);
  }
  if (k != n) {
    for (int c = 0; c < kNumClasses; ++c) {
      const auto m = static_cast<int>(members[c].size());
      if (m > 0 && m < k) {
        throw ValidationError("class " + std::to_string(label_of(c)) + " has " +
                              std::to_string(m) + " members, fewer than k=" +
                              std::to_string(k) + "; use a smaller k");
      }
    }
  }
  Rng rng(seed);
  std::vector<int> fold(n, -1);
  int dealer = 0;
  for (auto& idx : members) {
    rng.shuffle(std::span(idx));
    for (int i : idx) {
      fold[i] = dealer;
      dealer = (dealer + 1) % k;
    }
  }
  return fold;
}

struct FoldMetrics {
  std::size_t test_rows = 0;
  double acc = 0.0;
  double macro_f1 = 0.0;
  std::optional<double> ovr_auc;  // undefined when a fold has one class
};

struct ClassReport {
  Label label = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> auc;
};

struct EvalReport {
  std::string target;
  std::vector<features::Block> blocks;
  models::ModelKind model = models::ModelKind::kLR;
  double acc = 0.0;
  double macro_f1 = 0.0;
  double ovr_auc = 0.0;
  std::vector<FoldMetrics> folds;
  std::array<ClassReport, kNumClasses> per_class{};
  std::vector<Label> auc_excluded_classes;
  Protocol protocol = Protocol::kStratifiedKFold;
  int k = 5;
  std::uint64_t seed = 42;
  std::size_t n = 0;
};

struct CvOutput {
  std::vector<int> fold;           // fold of each row
  Eigen::MatrixXd proba;           // pooled out-of-fold probabilities
  std::vector<Label> predictions;  // pooled out-of-fold labels
  EvalReport report;
};

struct CvOptions {
  int k = 5;
  std::uint64_t seed = 42;
  Protocol protocol = Protocol::kStratifiedKFold;
  unsigned jobs = 1;
  std::string embedding_provenance;
};

/// Fills acc / macro-F1 / OvR AUC and per-class detail from predictions.
inline void score_into(EvalReport& r, std::span<const Label> y,
                       std::span<const Label> pred, const Eigen::MatrixXd& proba) {
  r.acc = accuracy(y, pred);
  r.macro_f1 = macro_f1(y, pred);
  const auto cls = class_scores(confusion_matrix(y, pred));
  const auto auc = ovr_auc(y, proba);
  r.ovr_auc = auc.macro;
  r.auc_excluded_classes = auc.excluded;
  for (int c = 0; c < kNumClasses; ++c) {
    r.per_class[c] = {label_of(c), cls[c].precision, cls[c].recall, cls[c].f1,
                      auc.per_class[c]};
  }
}

/// Stratified k-fold evaluation (or a single stratified 80/20 holdout).
/// The standardizer and model are fitted on each training fold only. The
/// headline metrics come from the pooled out-of-fold predictions; per-fold
/// values are kept for dispersion. Folds run in parallel up to opts.jobs
/// without affecting the result.
inline CvOutput cross_validate(const Eigen::MatrixXd& X, std::span<const Label> y,
                               std::span<const features::Block> blocks,
                               const models::ModelSpec& spec,
                               const CvOptions& opts) {
  if (static_cast<std::size_t>(X.rows()) != y.size()) {
    throw ValidationError("feature rows and labels differ in count");
  }
  spec.validate(blocks);
  const int k = opts.protocol == Protocol::kHoldout ? 5 : opts.k;
  CvOutput out;
  out.fold = stratified_folds(y, k, opts.seed);
  const int n_eval_folds = opts.protocol == Protocol::kHoldout ? 1 : k;
  const Eigen::Index n = X.rows();
  out.proba = Eigen::MatrixXd::Zero(n, kNumClasses);
  std::vector<char> evaluated(n, 0);
  std::vector<FoldMetrics> fold_metrics(n_eval_folds);

  parallel_for(static_cast<std::size_t>(n_eval_folds), opts.jobs, [&](std::size_t f) {
    std::vector<Eigen::Index> train, test;
    for (Eigen::Index i = 0; i < n; ++i) {
      (out.fold[i] == static_cast<int>(f) ? test : train).push_back(i);
    }
    Eigen::MatrixXd Xtr(static_cast<Eigen::Index>(train.size()), X.cols());
    Eigen::MatrixXd Xte(static_cast<Eigen::Index>(test.size()), X.cols());
    std::vector<Label> ytr, yte;
    for (std::size_t r = 0; r < train.size(); ++r) {
      Xtr.row(r) = X.row(train[r]);
      ytr.push_back(y[train[r]]);
    }
    for (std::size_t r = 0; r < test.size(); ++r) {
      Xte.row(r) = X.row(test[r]);
      yte.push_back(y[test[r]]);
    }
    models::ModelSpec fold_spec = spec;
    fold_spec.nn.seed = spec.nn.seed + f;
    const auto model =
        models::fit_model(fold_spec, blocks, Xtr, ytr, opts.embedding_provenance);
    const Eigen::MatrixXd p = models::predict_proba(model, Xte);
    const auto pred = models::argmax_labels(p);
    for (std::size_t r = 0; r < test.size(); ++r) {
      out.proba.row(test[r]) = p.row(r);
      evaluated[test[r]] = 1;
    }
    FoldMetrics fm;
    fm.test_rows = test.size();
    fm.acc = accuracy(yte, pred);
    fm.macro_f1 = macro_f1(yte, pred);
    try {
      fm.ovr_auc = ovr_auc(yte, p).macro;
    } catch (const ValidationError&) {
      fm.ovr_auc.reset();
    }
    fold_metrics[f] = fm;
  });

  // Pool only rows that were scored (all rows for k-fold).
  std::vector<Label> y_eval;
  Eigen::MatrixXd p_eval(n, kNumClasses);
  Eigen::Index m = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!evaluated[i]) continue;
    y_eval.push_back(y[i]);
    p_eval.row(m++) = out.proba.row(i);
  }
  p_eval.conservativeResize(m, kNumClasses);
  out.predictions = models::argmax_labels(out.proba);

  EvalReport& r = out.report;
  r.blocks = features::canonical_blocks(blocks);
  r.model = spec.kind;
  r.folds = std::move(fold_metrics);
  r.protocol = opts.protocol;
  r.k = k;
  r.seed = opts.seed;
  r.n = static_cast<std::size_t>(m);
  score_into(r, y_eval, models::argmax_labels(p_eval), p_eval);
  return out;
}

struct PermutationRun {
  double acc = 0.0;
  double macro_f1 = 0.0;
  double ovr_auc = 0.0;
};

struct PermutationSummary {
  std::vector<PermutationRun> runs;

  double mean_acc() const { return mean(&PermutationRun::acc); }
  double mean_macro_f1() const { return mean(&PermutationRun::macro_f1); }
  double mean_ovr_auc() const { return mean(&PermutationRun::ovr_auc); }

 private:
  double mean(double PermutationRun::*field) const {
    if (runs.empty()) return 0.0;
    double s = 0.0;
    for (const auto& r : runs) s += r.*field;
    return s / static_cast<double>(runs.size());
  }
};

/// Cross-validated metrics after shuffling the labels, n_shuffles times.
/// Shuffle s uses seed (opts.seed + 1 + s); the folds are re-derived from the
/// shuffled labels with opts.seed.
inline PermutationSummary permutation_baseline(const Eigen::MatrixXd& X,
                                               std::span<const Label> y,
                                               std::span<const features::Block> blocks,
                                               const models::ModelSpec& spec,
                                               const CvOptions& opts,
                                               int n_shuffles) {
  if (n_shuffles < 0) throw ValidationError("n_shuffles must be >= 0");
  PermutationSummary out;
  for (int s = 0; s < n_shuffles; ++s) {
    std::vector<Label> ys(y.begin(), y.end());
    Rng rng(opts.seed + 1 + static_cast<std::uint64_t>(s));
    rng.shuffle(std::span(ys));
    const auto cv = cross_validate(X, ys, blocks, spec, opts);
    out.runs.push_back({cv.report.acc, cv.report.macro_f1, cv.report.ovr_auc});
  }
  return out;
}

}  // namespace cyberaggr::eval
