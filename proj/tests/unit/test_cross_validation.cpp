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

#include <algorithm>
#include <array>
#include <vector>

#include <gtest/gtest.h>

#include "cyberaggr/eval/cross_validation.hpp"
#include "cyberaggr/rng.hpp"

namespace cyberaggr::eval {
namespace {

using features::Block;

const std::vector<Block> kBD = {Block::kBasic, Block::kDynamic};

std::vector<Label> random_labels(int n, Rng& rng) {
  std::vector<Label> y(n);
  for (auto& l : y) l = static_cast<Label>(rng.below(3)) - 1;
  return y;
}

// Rows whose first four columns carry the label, padded to the basic+dynamic width.
Eigen::MatrixXd signal_matrix(const std::vector<Label>& y, Rng& rng) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(y.size()), 134);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (Eigen::Index c = 0; c < 4; ++c) X(static_cast<Eigen::Index>(i), c) += 3.0 * y[i];
  }
  return X;
}

TEST(Folds, PartitionStratifiedAndSeeded) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(9));
    const int n = 3 * k + static_cast<int>(rng.below(80));
    std::vector<Label> y;
    for (int i = 0; i < n; ++i) y.push_back(i < 3 * k ? i % 3 - 1 : static_cast<Label>(rng.below(3)) - 1);
    const std::uint64_t seed = rng.next();
    const auto f = stratified_folds(y, k, seed);
    ASSERT_EQ(f, stratified_folds(y, k, seed));
    ASSERT_EQ(static_cast<int>(f.size()), n);

    std::vector<std::array<int, 3>> per_fold(k, {0, 0, 0});
    for (int i = 0; i < n; ++i) {
      ASSERT_GE(f[i], 0);
      ASSERT_LT(f[i], k);
      ++per_fold[f[i]][class_index(y[i])];
    }
    for (int c = 0; c < 3; ++c) {
      int lo = n, hi = 0;
      for (const auto& pf : per_fold) {
        lo = std::min(lo, pf[c]);
        hi = std::max(hi, pf[c]);
      }
      EXPECT_LE(hi - lo, 1);
    }
    std::vector<int> sizes(k, 0);
    for (int v : f) ++sizes[v];
    EXPECT_LE(*std::max_element(sizes.begin(), sizes.end()) -
                  *std::min_element(sizes.begin(), sizes.end()),
              1);
  }
}

TEST(Folds, Errors) {
  const std::vector<Label> y = {1, 1, 1, 0, 0, 0, -1, -1};
  EXPECT_THROW(stratified_folds(y, 1, 0), ValidationError);
  EXPECT_THROW(stratified_folds(y, 9, 0), ValidationError);
  EXPECT_THROW(stratified_folds(y, 3, 0), ValidationError);  // only two -1 rows
  EXPECT_NO_THROW(stratified_folds(y, 2, 0));
  EXPECT_NO_THROW(stratified_folds(y, 8, 0));  // leave-one-out
}

TEST(CrossValidate, LeaveOneOutPoolsEveryRow) {
  Rng rng(2);
  const auto y = random_labels(24, rng);
  const auto X = signal_matrix(y, rng);
  const auto cv = cross_validate(X, y, kBD, models::ModelSpec{}, {.k = 24});
  EXPECT_EQ(cv.report.n, 24u);
  EXPECT_EQ(cv.report.folds.size(), 24u);
  for (const auto& fm : cv.report.folds) EXPECT_EQ(fm.test_rows, 1u);
}

TEST(CrossValidate, LearnsSignalAndIgnoresJobs) {
  Rng rng(3);
  const auto y = random_labels(120, rng);
  const auto X = signal_matrix(y, rng);
  const auto a = cross_validate(X, y, kBD, models::ModelSpec{}, {.k = 5, .seed = 9, .jobs = 1});
  const auto b = cross_validate(X, y, kBD, models::ModelSpec{}, {.k = 5, .seed = 9, .jobs = 4});
  EXPECT_GT(a.report.ovr_auc, 0.9);
  EXPECT_EQ(a.proba, b.proba);
  EXPECT_EQ(a.fold, b.fold);
  EXPECT_EQ(a.report.n, 120u);
  EXPECT_EQ(a.report.folds.size(), 5u);
}

TEST(CrossValidate, HoldoutScoresOneFifth) {
  Rng rng(4);
  const auto y = random_labels(100, rng);
  const auto X = signal_matrix(y, rng);
  const auto cv =
      cross_validate(X, y, kBD, models::ModelSpec{}, {.protocol = Protocol::kHoldout});
  EXPECT_EQ(cv.report.n, 20u);
  EXPECT_EQ(cv.report.folds.size(), 1u);
  EXPECT_EQ(cv.report.k, 5);
  EXPECT_EQ(protocol_name(cv.report.protocol), "stratified_holdout_80_20");
}

TEST(CrossValidate, RowCountMismatch) {
  EXPECT_THROW(cross_validate(Eigen::MatrixXd::Zero(3, 134), std::vector<Label>{1, 0},
                              kBD, models::ModelSpec{}, {}),
               ValidationError);
}

TEST(Permutation, ZeroShufflesIsEmpty) {
  Rng rng(5);
  const auto y = random_labels(30, rng);
  const auto X = signal_matrix(y, rng);
  const auto s = permutation_baseline(X, y, kBD, models::ModelSpec{}, {}, 0);
  EXPECT_TRUE(s.runs.empty());
  EXPECT_EQ(s.mean_acc(), 0.0);
  EXPECT_THROW(permutation_baseline(X, y, kBD, models::ModelSpec{}, {}, -1), ValidationError);
}

TEST(Permutation, ShuffledLabelsLoseSignal) {
  Rng rng(6);
  const auto y = random_labels(90, rng);
  const auto X = signal_matrix(y, rng);
  const auto s = permutation_baseline(X, y, kBD, models::ModelSpec{}, {.k = 3}, 4);
  ASSERT_EQ(s.runs.size(), 4u);
  EXPECT_LT(s.mean_ovr_auc(), 0.7);
  const auto again = permutation_baseline(X, y, kBD, models::ModelSpec{}, {.k = 3}, 4);
  EXPECT_EQ(s.mean_acc(), again.mean_acc());
}

}  // namespace
}  // namespace cyberaggr::eval
