// numeric.cpp
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

#include "essay/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "essay/error.hpp"

namespace essay {

EigenDecomposition jacobi_eigen_symmetric(const Matrix& sym, int max_sweeps) {
  if (sym.rows() != sym.cols()) throw Error("numeric", "jacobi: matrix not square");
  const std::size_t n = sym.rows();
  Matrix a = sym;
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) total += a(i, j) * a(i, j);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= total * 1e-28 + 1e-300) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (apq == 0.0) continue;
        double app = a(p, p);
        double aqq = a(q, q);
        // Skip rotations that can no longer change the result.
        if (std::abs(apq) <= 1e-300 ||
            std::abs(apq) < 1e-18 * (std::abs(app) + std::abs(aqq)))
          continue;
        double theta = (aqq - app) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;

        for (std::size_t i = 0; i < n; ++i) {
          double aip = a(i, p);
          double aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          double apj = a(p, j);
          double aqj = a(q, j);
          a(p, j) = c * apj - s * aqj;
          a(q, j) = s * apj + c * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double vip = v(i, p);
          double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

namespace {

// Make the largest-magnitude entry of column j positive; ties break to the
// lowest index. Returns true if the column was negated.
bool canonicalize_column(Matrix& m, std::size_t j) {
  double best = 0.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double mag = std::abs(m(i, j));
    if (mag > best) {
      best = mag;
      best_i = i;
    }
  }
  if (m(best_i, j) < 0.0) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = -m(i, j);
    return true;
  }
  return false;
}

}  // namespace

TruncatedSvd truncated_svd(const Matrix& m, std::size_t k) {
  if (k < 1) throw Error("numeric", "svd: rank must be >= 1");
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows == 0 || cols == 0) throw Error("numeric", "svd: empty matrix");

  // Eigen-decompose the smaller Gram matrix, then recover the other factor.
  const bool gram_on_cols = cols <= rows;
  const std::size_t g = gram_on_cols ? cols : rows;
  Matrix gram(g, g);
  if (gram_on_cols) {
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = i; j < g; ++j) {
        double s = 0.0;
        for (std::size_t t = 0; t < rows; ++t) s += m(t, i) * m(t, j);
        gram(i, j) = s;
        gram(j, i) = s;
      }
  } else {
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = i; j < g; ++j) {
        double s = 0.0;
        for (std::size_t t = 0; t < cols; ++t) s += m(i, t) * m(j, t);
        gram(i, j) = s;
        gram(j, i) = s;
      }
  }

  EigenDecomposition eig = jacobi_eigen_symmetric(gram);
  double lambda_max = eig.values.empty() ? 0.0 : std::max(eig.values[0], 0.0);
  double cutoff = lambda_max * 1e-24;  // relative rank tolerance on lambda = sigma^2

  std::size_t keep = 0;
  while (keep < std::min(k, g) && eig.values[keep] > cutoff && eig.values[keep] > 0.0) ++keep;
  if (keep == 0) throw Error("numeric", "svd: matrix is numerically zero");

  TruncatedSvd out;
  out.rank = keep;
  out.sigma.resize(keep);
  for (std::size_t j = 0; j < keep; ++j) out.sigma[j] = std::sqrt(eig.values[j]);

  out.u = Matrix(rows, keep);
  out.v = Matrix(cols, keep);
  if (gram_on_cols) {
    for (std::size_t i = 0; i < cols; ++i)
      for (std::size_t j = 0; j < keep; ++j) out.v(i, j) = eig.vectors(i, j);
    // u = m * v / sigma
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < keep; ++j) {
        double s = 0.0;
        for (std::size_t t = 0; t < cols; ++t) s += m(i, t) * out.v(t, j);
        out.u(i, j) = s / out.sigma[j];
      }
  } else {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < keep; ++j) out.u(i, j) = eig.vectors(i, j);
    // v = m^T * u / sigma
    for (std::size_t i = 0; i < cols; ++i)
      for (std::size_t j = 0; j < keep; ++j) {
        double s = 0.0;
        for (std::size_t t = 0; t < rows; ++t) s += m(t, i) * out.u(t, j);
        out.v(i, j) = s / out.sigma[j];
      }
  }

  for (std::size_t j = 0; j < keep; ++j) {
    if (canonicalize_column(out.v, j)) {
      for (std::size_t i = 0; i < rows; ++i) out.u(i, j) = -out.u(i, j);
    }
  }
  return out;
}

double log_gamma(double x) {
  // Lanczos approximation, g = 7.
  static const double coeffs[9] = {0.99999999999980993,  676.5203681218851,
                                   -1259.1392167224028,  771.32342877765313,
                                   -176.61502916214059,  12.507343278686905,
                                   -0.13857109526572012, 9.9843695780195716e-6,
                                   1.5056327351493116e-7};
  if (x < 0.5) {
    // Reflection formula.
    return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
  }
  x -= 1.0;
  double a = coeffs[0];
  double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += coeffs[i] / (x + i);
  return 0.5 * std::log(2.0 * M_PI) + (x + 0.5) * std::log(t) - t + std::log(a);
}

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;
  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front =
      log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) + b * std::log(1.0 - x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double nu) {
  if (nu <= 0.0) throw Error("numeric", "student t: degrees of freedom must be positive");
  double x = nu / (nu + t * t);
  return incomplete_beta(nu / 2.0, 0.5, x);
}

}  // namespace essay
