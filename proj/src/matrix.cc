// Copyright 2026 The ReCo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "reco/matrix.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "reco/error.h"

namespace reco {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::FromRows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Matrix();
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) {
      throw ShapeError("Matrix::FromRows: row " + std::to_string(r) +
                       " has length " + std::to_string(rows[r].size()) +
                       ", expected " + std::to_string(m.cols()));
    }
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      t(c, r) = (*this)(r, c);
    }
  }
  return t;
}

void row_normalize(Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    double sum = 0.0;
    for (double v : row) sum += v;
    if (!(sum > 0.0) || !std::isfinite(sum)) {
      throw NumericError("row_normalize: row " + std::to_string(r) +
                         " has non-positive or non-finite sum");
    }
    for (double& v : row) v /= sum;
  }
}

void row_softmax(Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    double max = -std::numeric_limits<double>::infinity();
    for (double v : row) {
      if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
        throw NumericError("row_softmax: non-finite entry in row " +
                           std::to_string(r));
      }
      max = std::max(max, v);
    }
    double sum = 0.0;
    for (double& v : row) {
      v = std::exp(v - max);
      sum += v;
    }
    for (double& v : row) v /= sum;
  }
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) {
    throw ShapeError("max_abs_diff: shape mismatch");
  }
  double max = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    max = std::max(max, std::fabs(a.data()[i] - b.data()[i]));
  }
  return max;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw ShapeError("total_variation: length mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::fabs(p[i] - q[i]);
  return 0.5 * sum;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw ShapeError("kl_divergence: length mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum;
}

bool is_row_stochastic(const Matrix& m, double tol) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double sum = 0.0;
    for (double v : m.row(r)) {
      if (!(v >= 0.0)) return false;
      sum += v;
    }
    if (std::fabs(sum - 1.0) > tol) return false;
  }
  return true;
}

Matrix uniform_rows(std::size_t rows, std::size_t cols) {
  return Matrix(rows, cols, cols == 0 ? 0.0 : 1.0 / static_cast<double>(cols));
}

}  // namespace reco
