/*!
 * Copyright (c) 2026 by Contributors
 * \file linear.hpp
 * \brief Ordinary least squares and backward-elimination stepwise regression.
 */
#ifndef KQIPRED_LINEAR_HPP_
#define KQIPRED_LINEAR_HPP_

#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kqipred/error.hpp"
#include "kqipred/matrix.hpp"

namespace kqipred {

/*!
 * \brief Linear predictor. Features eliminated by stepwise selection are
 * simply absent from the coefficient map.
 */
struct LinearModel {
  double intercept = 0.0;
  std::vector<std::string> feature_names;       //!< input layout for predict()
  std::map<std::string, double> coefficients;   //!< retained features only

  double predict(std::span<const double> x) const {
    if (x.size() != feature_names.size()) {
      throw DomainError("LinearModel::predict: expected " +
                        std::to_string(feature_names.size()) + " features, got " +
                        std::to_string(x.size()));
    }
    double y = intercept;
    for (std::size_t j = 0; j < feature_names.size(); ++j) {
      const auto it = coefficients.find(feature_names[j]);
      if (it != coefficients.end()) y += it->second * x[j];
    }
    return y;
  }

  bool operator==(const LinearModel&) const = default;
};

namespace detail {

/*! \brief Design matrix [1 X(, active columns)]. */
inline Matrix with_intercept(const Matrix& x, const std::vector<std::size_t>& active) {
  Matrix d(x.rows, active.size() + 1);
  for (std::size_t i = 0; i < x.rows; ++i) {
    d.at(i, 0) = 1.0;
    for (std::size_t j = 0; j < active.size(); ++j) {
      d.at(i, j + 1) = x.at(i, active[j]);
    }
  }
  return d;
}

inline std::vector<std::size_t> all_columns(std::size_t p) {
  std::vector<std::size_t> cols(p);
  for (std::size_t j = 0; j < p; ++j) cols[j] = j;
  return cols;
}

}  // namespace detail

/*!
 * \brief Ordinary least squares with intercept, solved by Householder QR.
 *
 * Requires n > p with full column rank (SingularMatrixError otherwise).
 */
inline LinearModel train_linear(const Matrix& x, std::span<const double> y,
                                const std::vector<std::string>& feature_names) {
  if (feature_names.size() != x.cols) {
    throw DomainError("train_linear: feature_names/columns mismatch");
  }
  const auto active = detail::all_columns(x.cols);
  const Matrix design = detail::with_intercept(x, active);
  const LeastSquaresFit fit = solve_least_squares(design, y);

  LinearModel model;
  model.feature_names = feature_names;
  model.intercept = fit.coefficients[0];
  for (std::size_t j = 0; j < x.cols; ++j) {
    model.coefficients[feature_names[j]] = fit.coefficients[j + 1];
  }
  return model;
}

/*!
 * \brief Backward elimination on OLS t-statistics.
 *
 * Fits OLS, computes |t| per coefficient (intercept excluded), and while the
 * smallest |t| is below removal_threshold drops that feature and refits.
 * Ties resolve to the lowest feature index. A zero residual sum of squares
 * makes every nonzero coefficient significant by convention.
 */
inline LinearModel train_stepwise(const Matrix& x, std::span<const double> y,
                                  const std::vector<std::string>& feature_names,
                                  double removal_threshold) {
  if (feature_names.size() != x.cols) {
    throw DomainError("train_stepwise: feature_names/columns mismatch");
  }
  std::vector<std::size_t> active = detail::all_columns(x.cols);
  LeastSquaresFit fit;

  for (;;) {
    const Matrix design = detail::with_intercept(x, active);
    fit = solve_least_squares(design, y);
    if (active.empty()) break;

    const double dof = static_cast<double>(x.rows) -
                       static_cast<double>(active.size()) - 1.0;
    if (dof < 1.0) break;  // exact interpolation regime: nothing to test against
    const double sigma2 = fit.rss / dof;

    double weakest_t = std::numeric_limits<double>::infinity();
    std::size_t weakest_pos = 0;
    for (std::size_t j = 0; j < active.size(); ++j) {
      const double beta = fit.coefficients[j + 1];
      const double se = std::sqrt(sigma2 * fit.xtx_inv_diag[j + 1]);
      double t;
      if (se > 0.0) {
        t = std::abs(beta) / se;
      } else {
        t = beta == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      }
      if (t < weakest_t) {  // strict: ties keep the earlier (lower) index
        weakest_t = t;
        weakest_pos = j;
      }
    }
    if (weakest_t >= removal_threshold) break;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(weakest_pos));
  }

  LinearModel model;
  model.feature_names = feature_names;
  model.intercept = fit.coefficients[0];
  for (std::size_t j = 0; j < active.size(); ++j) {
    model.coefficients[feature_names[active[j]]] = fit.coefficients[j + 1];
  }
  return model;
}

}  // namespace kqipred

#endif  // KQIPRED_LINEAR_HPP_
