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

#ifndef RECO_MATRIX_H_
#define RECO_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace reco {

// Dense row-major matrix of doubles. Policies are stored as row-stochastic
// matrices with rows indexed by observations and columns by actions.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  // Builds a matrix from explicit rows; all rows must have equal length.
  static Matrix FromRows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return std::span<double>(data_.data() + r * cols_, cols_);
  }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_.data() + r * cols_, cols_);
  }

  const std::vector<double>& data() const { return data_; }

  Matrix transposed() const;

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  // Exact equality; used by determinism checks.
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Divides every row by its sum. Throws NumericError if a row sum is not
// positive and finite.
void row_normalize(Matrix& m);

// Replaces every row x with softmax(x), subtracting the row maximum before
// exponentiation. Throws NumericError on non-finite input.
void row_softmax(Matrix& m);

// max_{i} |a_i - b_i| over all entries; shapes must match.
double max_abs_diff(const Matrix& a, const Matrix& b);

// Total variation distance between two distributions of equal length.
double total_variation(std::span<const double> p, std::span<const double> q);

// KL(p || q) in nats with the conventions 0*log(0/x) = 0 and
// p_i > 0, q_i = 0  =>  +infinity.
double kl_divergence(std::span<const double> p, std::span<const double> q);

// True when every row of m is a probability distribution: entries >= 0 and
// row sums within `tol` of 1.
bool is_row_stochastic(const Matrix& m, double tol);

Matrix uniform_rows(std::size_t rows, std::size_t cols);

}  // namespace reco

#endif  // RECO_MATRIX_H_
