// oracles.hpp
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
// Brute-force reference implementations, kept independent of the library
// code paths they check.

#ifndef ESSAY_TESTS_ORACLES_HPP
#define ESSAY_TESTS_ORACLES_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "essay/numeric.hpp"
#include "essay/rng.hpp"

namespace oracle {

// Weighted kappa by direct construction of the observed and expected
// matrices over the 1..10 scale.
inline double weighted_kappa(const std::vector<int>& a, const std::vector<int>& b,
                             bool quadratic) {
  const int k = 10;
  const double n = static_cast<double>(a.size());
  std::vector<std::vector<double>> o(k, std::vector<double>(k, 0.0));
  std::vector<double> row(k, 0.0), col(k, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    o[a[i] - 1][b[i] - 1] += 1.0 / n;
    row[a[i] - 1] += 1.0 / n;
    col[b[i] - 1] += 1.0 / n;
  }
  double num = 0.0, den = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      double w = std::abs(i - j) / 9.0;
      if (quadratic) w = w * w;
      num += w * o[i][j];
      den += w * row[i] * col[j];
    }
  }
  return 1.0 - num / den;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) /
         (std::sqrt(n * sxx - sx * sx) * std::sqrt(n * syy - sy * sy));
}

inline essay::Matrix random_matrix(std::size_t rows, std::size_t cols, essay::Rng& rng) {
  essay::Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

// Product of two random factors: a matrix of rank <= k.
inline essay::Matrix random_low_rank(std::size_t rows, std::size_t cols, std::size_t k,
                                     essay::Rng& rng) {
  essay::Matrix a = random_matrix(rows, k, rng);
  essay::Matrix b = random_matrix(k, cols, rng);
  essay::Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < k; ++t) s += a(i, t) * b(t, j);
      m(i, j) = s;
    }
  return m;
}

// || U diag(sigma) V^T - m ||_F / ||m||_F
inline double svd_rel_error(const essay::Matrix& m, const essay::TruncatedSvd& svd) {
  double err = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double rec = 0.0;
      for (std::size_t t = 0; t < svd.sigma.size(); ++t)
        rec += svd.u(i, t) * svd.sigma[t] * svd.v(j, t);
      double d = rec - m(i, j);
      err += d * d;
      norm += m(i, j) * m(i, j);
    }
  }
  return std::sqrt(err) / std::sqrt(norm);
}

}  // namespace oracle

#endif  // ESSAY_TESTS_ORACLES_HPP
