/*!
 * Copyright (c) 2026 by Contributors
 * \file forest.hpp
 * \brief Random forest regression: bootstrap-resampled CART trees with
 *        per-split feature subsampling, averaged uniformly.
 */
#ifndef KQIPRED_FOREST_HPP_
#define KQIPRED_FOREST_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kqipred/error.hpp"
#include "kqipred/matrix.hpp"
#include "kqipred/parallel.hpp"
#include "kqipred/rng.hpp"
#include "kqipred/tree.hpp"

namespace kqipred {

struct ForestParams {
  int n_trees = 100;
  int mtry = 0;           //!< features sampled per split; 0 = max(1, p/3)
  TreeParams tree{20, 5}; //!< bagging absorbs leaf noise, so leaves stay small
  bool bootstrap = true;  //!< diagnostic: false trains every tree on all rows
};

struct ForestModel {
  std::vector<TreeModel> trees;
  std::uint64_t seed = 0;

  double predict(std::span<const double> x) const {
    if (trees.empty()) throw DomainError("ForestModel::predict: no trees");
    double sum = 0.0;
    for (const TreeModel& tree : trees) sum += tree.predict(x);
    return sum / static_cast<double>(trees.size());
  }

  bool operator==(const ForestModel&) const = default;
};

/*!
 * \brief Train a forest. Tree t draws its bootstrap sample and per-split
 * feature subsets from the sub-stream derive(seed, t), so results are
 * identical whatever the thread count.
 */
inline ForestModel train_forest(const Matrix& x, std::span<const double> y,
                                const ForestParams& params, std::uint64_t seed,
                                int n_threads = 1) {
  if (x.rows == 0 || x.rows != y.size()) {
    throw DomainError("train_forest: need at least one sample and matching y");
  }
  if (params.n_trees < 1) throw DomainError("train_forest: n_trees must be >= 1");
  const std::size_t p = x.cols;
  const std::size_t mtry =
      params.mtry > 0 ? std::min<std::size_t>(static_cast<std::size_t>(params.mtry), p)
                      : std::max<std::size_t>(1, p / 3);

  ForestModel model;
  model.seed = seed;
  model.trees.resize(static_cast<std::size_t>(params.n_trees));
  parallel_for(model.trees.size(), n_threads, [&](std::size_t t) {
    SplitMix64 rng(SplitMix64::derive(seed, t));
    std::vector<std::size_t> idx(x.rows);
    if (params.bootstrap) {
      for (std::size_t i = 0; i < x.rows; ++i) {
        idx[i] = static_cast<std::size_t>(rng.below(x.rows));
      }
    } else {
      for (std::size_t i = 0; i < x.rows; ++i) idx[i] = i;
    }
    detail::TreeBuilder builder(x, y, params.tree, &rng, mtry);
    model.trees[t] = builder.build(std::move(idx));
  });
  return model;
}

/*! \brief Forest importance: mean of the per-tree importance vectors. */
inline std::map<std::string, double> forest_importance(
    const ForestModel& model, const std::vector<std::string>& feature_names) {
  std::map<std::string, double> importance;
  for (const std::string& name : feature_names) importance[name] = 0.0;
  if (model.trees.empty()) return importance;
  for (const TreeModel& tree : model.trees) {
    for (const auto& [name, score] : tree_importance(tree, feature_names)) {
      importance[name] += score;
    }
  }
  for (auto& [name, score] : importance) {
    score /= static_cast<double>(model.trees.size());
  }
  return importance;
}

}  // namespace kqipred

#endif  // KQIPRED_FOREST_HPP_
