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

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "cyberaggr/errors.hpp"

namespace cyberaggr::models {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Per-column z-scoring fitted on training rows only.
struct Standardizer {
  static constexpr double kSdFloor = 1e-8;

  Vector mean;
  Vector sd;  // sample SD; columns below kSdFloor are mapped to 0

  Eigen::Index width() const { return mean.size(); }

  static Standardizer fit(const Matrix& rows) {
    if (rows.rows() < 1) throw ValidationError("standardizer needs >= 1 row");
    Standardizer s;
    s.mean = rows.colwise().mean().transpose();
    s.sd = Vector::Zero(rows.cols());
    if (rows.rows() > 1) {
      for (Eigen::Index c = 0; c < rows.cols(); ++c) {
        const double ss = (rows.col(c).array() - s.mean(c)).square().sum();
        s.sd(c) = std::sqrt(ss / static_cast<double>(rows.rows() - 1));
      }
    }
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      if (!std::isfinite(s.mean(c)) || !std::isfinite(s.sd(c))) {
        throw NumericError("standardizer: column " + std::to_string(c) +
                           " has non-finite mean or SD");
      }
    }
    return s;
  }

  Matrix apply(const Matrix& rows) const {
    if (rows.cols() != width()) {
      throw ValidationError("standardizer width " + std::to_string(width()) +
                            " != input width " + std::to_string(rows.cols()));
    }
    Matrix out(rows.rows(), rows.cols());
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      if (sd(c) < kSdFloor) {
        out.col(c).setZero();
      } else {
        out.col(c) = (rows.col(c).array() - mean(c)) / sd(c);
      }
    }
    return out;
  }
};

}  // namespace cyberaggr::models
