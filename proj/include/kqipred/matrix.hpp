/*!
 * Copyright (c) 2026 by Contributors
 * \file matrix.hpp
 * \brief Dense row-major matrix and Householder-QR least squares.
 */
#ifndef KQIPRED_MATRIX_HPP_
#define KQIPRED_MATRIX_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "kqipred/error.hpp"

namespace kqipred {

/*! \brief Dense row-major matrix of doubles. */
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  /*! \brief View of one row. */
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * cols, cols};
  }
};

/*! \brief Result of an ordinary least-squares solve. */
struct LeastSquaresFit {
  std::vector<double> coefficients;   //!< one per design-matrix column
  std::vector<double> xtx_inv_diag;   //!< diagonal of (X^T X)^-1
  double rss = 0.0;                   //!< residual sum of squares
};

/*!
 * \brief Solve min ||X b - y||_2 by Householder QR.
 *
 * Requires rows > cols and a full-rank design matrix; rank deficiency is
 * reported as SingularMatrixError. The (X^T X)^-1 diagonal is recovered from
 * the triangular factor for use in coefficient t-statistics.
 */
inline LeastSquaresFit solve_least_squares(const Matrix& x,
                                           std::span<const double> y) {
  const std::size_t n = x.rows;
  const std::size_t p = x.cols;
  if (y.size() != n) {
    throw DomainError("solve_least_squares: X has " + std::to_string(n) +
                      " rows but y has " + std::to_string(y.size()));
  }
  if (n < p) {
    throw DomainError("solve_least_squares: need at least as many rows (" +
                      std::to_string(n) + ") as columns (" +
                      std::to_string(p) + ")");
  }

  Matrix a = x;                       // working copy; overwritten by QR
  std::vector<double> qtb(y.begin(), y.end());

  // Householder triangularization, reflections applied to qtb in lockstep.
  for (std::size_t k = 0; k < p; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm = std::hypot(norm, a.at(i, k));
    if (norm == 0.0) {
      throw SingularMatrixError("design matrix is rank deficient at column " +
                                std::to_string(k));
    }
    if (a.at(k, k) < 0.0) norm = -norm;  // v = x/norm + e1, norm same-signed
    for (std::size_t i = k; i < n; ++i) a.at(i, k) /= norm;
    a.at(k, k) += 1.0;

    for (std::size_t j = k + 1; j < p; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += a.at(i, k) * a.at(i, j);
      s = -s / a.at(k, k);
      for (std::size_t i = k; i < n; ++i) a.at(i, j) += s * a.at(i, k);
    }
    double s = 0.0;
    for (std::size_t i = k; i < n; ++i) s += a.at(i, k) * qtb[i];
    s = -s / a.at(k, k);
    for (std::size_t i = k; i < n; ++i) qtb[i] += s * a.at(i, k);

    a.at(k, k) = -norm;  // diagonal of R (columns k+1.. hold R above it)
  }

  // Relative rank test on the R diagonal.
  double max_diag = 0.0;
  for (std::size_t k = 0; k < p; ++k) max_diag = std::max(max_diag, std::abs(a.at(k, k)));
  const double tol = max_diag * static_cast<double>(n) *
                     std::numeric_limits<double>::epsilon();
  for (std::size_t k = 0; k < p; ++k) {
    if (std::abs(a.at(k, k)) <= tol) {
      throw SingularMatrixError("design matrix is rank deficient at column " +
                                std::to_string(k));
    }
  }

  LeastSquaresFit fit;
  fit.coefficients.assign(p, 0.0);
  for (std::size_t k = p; k-- > 0;) {
    double s = qtb[k];
    for (std::size_t j = k + 1; j < p; ++j) s -= a.at(k, j) * fit.coefficients[j];
    fit.coefficients[k] = s / a.at(k, k);
  }

  fit.rss = 0.0;
  for (std::size_t i = p; i < n; ++i) fit.rss += qtb[i] * qtb[i];

  // (X^T X)^-1 = R^-1 R^-T; row norms of R^-1 give the diagonal.
  std::vector<double> rinv(p * p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    rinv[j * p + j] = 1.0 / a.at(j, j);
    for (std::size_t k = j; k-- > 0;) {
      double s = 0.0;
      for (std::size_t m = k + 1; m <= j; ++m) s += a.at(k, m) * rinv[m * p + j];
      rinv[k * p + j] = -s / a.at(k, k);
    }
  }
  fit.xtx_inv_diag.assign(p, 0.0);
  for (std::size_t k = 0; k < p; ++k) {
    double s = 0.0;
    for (std::size_t j = k; j < p; ++j) s += rinv[k * p + j] * rinv[k * p + j];
    fit.xtx_inv_diag[k] = s;
  }
  return fit;
}

}  // namespace kqipred

#endif  // KQIPRED_MATRIX_HPP_
