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

#include <cmath>

#include <gtest/gtest.h>

#include "cyberaggr/models/standardizer.hpp"
#include "cyberaggr/rng.hpp"

namespace cyberaggr::models {
namespace {

TEST(Standardizer, ConstantColumnMapsToZero) {
  Matrix X(3, 2);
  X << 5, 1, 5, 2, 5, 3;
  const auto s = Standardizer::fit(X);
  const Matrix Z = s.apply(X);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(Z(i, 0), 0.0);
  EXPECT_DOUBLE_EQ(Z(0, 1), -1.0);
}

TEST(Standardizer, TwoPoints) {
  Matrix X(2, 1);
  X << 0, 2;
  const Matrix Z = Standardizer::fit(X).apply(X);
  EXPECT_NEAR(Z(0, 0), -std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(Z(1, 0), std::sqrt(0.5), 1e-12);
}

TEST(Standardizer, ZeroMeanUnitSdColumns) {
  Rng rng(1);
  Matrix X(40, 7);
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = 100 * j + (j + 1) * rng.normal();
  const Matrix Z = Standardizer::fit(X).apply(X);
  for (Eigen::Index j = 0; j < Z.cols(); ++j) {
    EXPECT_NEAR(Z.col(j).mean(), 0.0, 1e-12);
    EXPECT_NEAR((Z.col(j).array() - Z.col(j).mean()).square().sum() / 39.0, 1.0, 1e-12);
  }
}

TEST(Standardizer, Errors) {
  EXPECT_THROW(Standardizer::fit(Matrix(0, 3)), ValidationError);
  const auto s = Standardizer::fit(Matrix::Ones(2, 3));
  EXPECT_THROW(s.apply(Matrix::Ones(2, 4)), ValidationError);
  EXPECT_EQ(Standardizer::fit(Matrix::Ones(1, 3)).apply(Matrix::Ones(1, 3)), Matrix::Zero(1, 3));
}

TEST(Standardizer, OverflowingColumnIsNumericError) {
  Matrix X = Matrix::Ones(4, 2);
  X.col(1).setConstant(1e308);
  EXPECT_THROW(Standardizer::fit(X), NumericError);
}

}  // namespace
}  // namespace cyberaggr::models
