/*!
 * Copyright (c) 2026 by Contributors
 * \file svr.hpp
 * \brief Linear support vector regression with epsilon-insensitive loss.
 *
 * Trains in standardized coordinates by deterministic full-batch subgradient
 * descent on
 *   J(w, b) = 0.5 ||w||^2 + C * mean_i max(0, |y_i - (w . x_i + b)| - eps),
 * with step size step_size / sqrt(epoch). The data term is averaged over the
 * rows, which keeps the fixed step schedule stable at any sample count and
 * makes the learned function invariant to uniform duplication of the
 * training set.
 *
 * Subgradient steps are not individually descent steps, so the trainer keeps
 * the best iterate seen so far and returns that; the recorded training loss
 * is the best objective after each epoch and is nonincreasing by
 * construction.
 */
#ifndef KQIPRED_SVR_HPP_
#define KQIPRED_SVR_HPP_

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "kqipred/error.hpp"
#include "kqipred/matrix.hpp"

namespace kqipred {

struct SvrParams {
  double c = 10.0;
  double epsilon = 0.1;   //!< tube half-width, in standardized target units
  int epochs = 500;
  double step_size = 0.01;
};

/*! \brief Linear SVR with stored standardization statistics. */
struct SvrModel {
  std::vector<double> weights;       //!< standardized-space weights
  double bias = 0.0;
  std::vector<double> feature_mean;
  std::vector<double> feature_std;
  double target_mean = 0.0;
  double target_std = 0.0;

  double predict(std::span<const double> x) const {
    if (x.size() != weights.size()) {
      throw DomainError("SvrModel::predict: expected " +
                        std::to_string(weights.size()) + " features, got " +
                        std::to_string(x.size()));
    }
    double z = bias;
    for (std::size_t j = 0; j < weights.size(); ++j) {
      z += weights[j] * (x[j] - feature_mean[j]) / feature_std[j];
    }
    return target_mean + target_std * z;
  }

  bool operator==(const SvrModel&) const = default;
};

/*!
 * \brief Train linear SVR. Optionally records the objective value after each
 * epoch in loss_trace.
 */
inline SvrModel train_svr(const Matrix& x, std::span<const double> y,
                          const SvrParams& params,
                          std::vector<double>* loss_trace = nullptr) {
  const std::size_t n = x.rows;
  const std::size_t p = x.cols;
  if (n < 2 || y.size() != n) {
    throw DomainError("train_svr: need at least two samples and matching y");
  }

  SvrModel model;
  model.feature_mean.assign(p, 0.0);
  model.feature_std.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x.at(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = x.at(i, j) - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    if (var <= 0.0) {
      throw DegenerateInputError("train_svr: feature column " + std::to_string(j) +
                                 " has zero variance");
    }
    model.feature_mean[j] = mean;
    model.feature_std[j] = std::sqrt(var);
  }
  {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += y[i];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = y[i] - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    if (var <= 0.0) {
      throw DegenerateInputError("train_svr: target has zero variance");
    }
    model.target_mean = mean;
    model.target_std = std::sqrt(var);
  }

  // Standardized copies.
  std::vector<double> xs(n * p, 0.0);
  std::vector<double> ys(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      xs[i * p + j] = (x.at(i, j) - model.feature_mean[j]) / model.feature_std[j];
    }
    ys[i] = (y[i] - model.target_mean) / model.target_std;
  }

  std::vector<double> w(p, 0.0);
  double b = 0.0;
  std::vector<double> grad(p, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);

  auto objective = [&]() {
    double hinge = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double z = b;
      for (std::size_t j = 0; j < p; ++j) z += w[j] * xs[i * p + j];
      const double r = std::abs(ys[i] - z) - params.epsilon;
      if (r > 0.0) hinge += r;
    }
    double norm2 = 0.0;
    for (const double wj : w) norm2 += wj * wj;
    return 0.5 * norm2 + params.c * hinge * inv_n;
  };

  std::vector<double> best_w = w;
  double best_b = b;
  double best_loss = objective();

  if (loss_trace) loss_trace->clear();
  for (int epoch = 1; epoch <= params.epochs; ++epoch) {
    for (std::size_t j = 0; j < p; ++j) grad[j] = w[j];
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double z = b;
      for (std::size_t j = 0; j < p; ++j) z += w[j] * xs[i * p + j];
      const double residual = ys[i] - z;
      if (std::abs(residual) > params.epsilon) {
        const double sign = residual > 0.0 ? 1.0 : -1.0;
        const double scale = params.c * inv_n * sign;
        for (std::size_t j = 0; j < p; ++j) grad[j] -= scale * xs[i * p + j];
        grad_b -= scale;
      }
    }
    const double step = params.step_size / std::sqrt(static_cast<double>(epoch));
    for (std::size_t j = 0; j < p; ++j) w[j] -= step * grad[j];
    b -= step * grad_b;
    const double loss = objective();
    if (loss < best_loss) {
      best_loss = loss;
      best_w = w;
      best_b = b;
    }
    if (loss_trace) loss_trace->push_back(best_loss);
  }

  model.weights = std::move(best_w);
  model.bias = best_b;
  return model;
}

}  // namespace kqipred

#endif  // KQIPRED_SVR_HPP_
