// numeric.hpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Small dense linear algebra and special functions shared by the LSA and
// model code: cyclic Jacobi symmetric eigensolver, Gram-side truncated SVD,
// regularized incomplete beta for Student-t tail probabilities.

#ifndef ESSAY_NUMERIC_HPP
#define ESSAY_NUMERIC_HPP

#include <cstddef>
#include <vector>

namespace essay {

// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column j is the eigenvector for values[j]
};

// Cyclic Jacobi rotations on a symmetric matrix. Deterministic: fixed sweep
// order, eigenpairs sorted by value descending with index tie-break.
EigenDecomposition jacobi_eigen_symmetric(const Matrix& sym, int max_sweeps = 64);

struct TruncatedSvd {
  Matrix u;                   // rows(m) x k
  std::vector<double> sigma;  // k singular values, non-increasing, > 0
  Matrix v;                   // cols(m) x k
  std::size_t rank = 0;       // effective rank kept (== sigma.size())
};

// Rank-k truncated SVD via eigen-decomposition of the smaller Gram matrix.
// Numerically zero singular values are dropped, so sigma.size() can be less
// than k. Signs are canonical: the largest-magnitude entry of each V column
// is positive (ties to the lowest index), U flipped to match.
TruncatedSvd truncated_svd(const Matrix& m, std::size_t k);

double log_gamma(double x);

// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction.
double incomplete_beta(double a, double b, double x);

// Two-tailed p-value of Student's t with nu degrees of freedom.
double student_t_two_tailed(double t, double nu);

}  // namespace essay

#endif  // ESSAY_NUMERIC_HPP
