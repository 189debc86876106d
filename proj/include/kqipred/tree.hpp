/*!
 * Copyright (c) 2026 by Contributors
 * \file tree.hpp
 * \brief CART-style regression tree: variance-reduction splits, prediction,
 *        and per-feature importance.
 */
#ifndef KQIPRED_TREE_HPP_
#define KQIPRED_TREE_HPP_

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kqipred/error.hpp"
#include "kqipred/matrix.hpp"
#include "kqipred/rng.hpp"

namespace kqipred {

/*! \brief Node storage: explicit child indices, no pointers. */
struct TreeNode {
  bool is_leaf = true;
  int feature = -1;              //!< branch: split feature index
  double threshold = 0.0;        //!< branch: go left iff x[feature] <= threshold
  int left = -1;                 //!< branch: left child node index
  int right = -1;                //!< branch: right child node index
  double risk_reduction = 0.0;   //!< branch: delta of this split
  double mean = 0.0;             //!< leaf: mean of routed training targets
  int n_samples = 0;             //!< training samples that reached this node

  bool operator==(const TreeNode&) const = default;
};

struct TreeParams {
  int max_depth = 20;
  int min_samples_leaf = 25;
};

/*! \brief Regression tree; nodes are stored in depth-first preorder. */
struct TreeModel {
  std::vector<TreeNode> nodes;
  int root = 0;
  std::size_t n_features = 0;

  double predict(std::span<const double> x) const {
    if (x.size() != n_features) {
      throw DomainError("TreeModel::predict: expected " +
                        std::to_string(n_features) + " features, got " +
                        std::to_string(x.size()));
    }
    int node = root;
    for (;;) {
      const TreeNode& cur = nodes[static_cast<std::size_t>(node)];
      if (cur.is_leaf) return cur.mean;
      node = x[static_cast<std::size_t>(cur.feature)] <= cur.threshold ? cur.left
                                                                       : cur.right;
    }
  }

  std::size_t branch_count() const {
    std::size_t count = 0;
    for (const TreeNode& n : nodes) count += n.is_leaf ? 0 : 1;
    return count;
  }

  bool operator==(const TreeModel&) const = default;
};

/*! \brief Winning split: feature, threshold and its risk reduction. */
struct SplitChoice {
  std::size_t feature = 0;
  double threshold = 0.0;
  double risk_reduction = 0.0;

  bool operator==(const SplitChoice&) const = default;
};

namespace detail {

/*!
 * \brief Exhaustive best split over the rows listed in idx.
 *
 * Candidate thresholds are midpoints between consecutive distinct sorted
 * values. The score of a split is
 *   delta = (SSE(node) - SSE(left) - SSE(right)) / n_total,
 * the node-share-weighted decrease in mean squared error relative to the
 * tree's root sample count n_total. Splits leaving a child below
 * min_samples_leaf are skipped. Ties resolve to the lowest feature index,
 * then the lowest threshold. Returns nullopt when no split has delta > 0.
 */
inline std::optional<SplitChoice> best_split_indices(
    const Matrix& x, std::span<const double> y, std::span<const std::size_t> idx,
    std::span<const std::size_t> candidate_features, int min_samples_leaf,
    double n_total, std::vector<std::pair<double, double>>& scratch) {
  const std::size_t n = idx.size();
  if (n < 2) return std::nullopt;

  double sum = 0.0;
  double sumsq = 0.0;
  for (const std::size_t i : idx) {
    sum += y[i];
    sumsq += y[i] * y[i];
  }
  const double sse_parent = sumsq - sum * sum / static_cast<double>(n);

  std::optional<SplitChoice> best;
  for (const std::size_t f : candidate_features) {
    scratch.clear();
    scratch.reserve(n);
    for (const std::size_t i : idx) scratch.emplace_back(x.at(i, f), y[i]);
    std::sort(scratch.begin(), scratch.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double sum_left = 0.0;
    double sumsq_left = 0.0;
    for (std::size_t c = 1; c < n; ++c) {
      sum_left += scratch[c - 1].second;
      sumsq_left += scratch[c - 1].second * scratch[c - 1].second;
      const double lo = scratch[c - 1].first;
      const double hi = scratch[c].first;
      if (!(lo < hi)) continue;  // cannot separate equal values
      const std::size_t n_left = c;
      const std::size_t n_right = n - c;
      if (n_left < static_cast<std::size_t>(min_samples_leaf) ||
          n_right < static_cast<std::size_t>(min_samples_leaf)) {
        continue;
      }
      const double sse_left = sumsq_left - sum_left * sum_left / static_cast<double>(n_left);
      const double sum_right = sum - sum_left;
      const double sse_right = (sumsq - sumsq_left) -
                               sum_right * sum_right / static_cast<double>(n_right);
      const double delta = (sse_parent - sse_left - sse_right) / n_total;
      if (delta > 0.0 && (!best || delta > best->risk_reduction)) {
        double threshold = lo + (hi - lo) / 2.0;
        if (threshold >= hi) threshold = lo;  // midpoint rounded into the gap
        best = SplitChoice{f, threshold, delta};
      }
    }
  }
  return best;
}

/*! \brief Recursive CART builder over a reusable index buffer. */
class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const double> y, const TreeParams& params,
              SplitMix64* rng, std::size_t mtry)
      : x_(x), y_(y), params_(params), rng_(rng), mtry_(mtry) {}

  TreeModel build(std::vector<std::size_t> idx) {
    TreeModel model;
    model.n_features = x_.cols;
    if (idx.empty()) throw DomainError("train_tree: no training samples");
    idx_ = std::move(idx);
    n_total_ = static_cast<double>(idx_.size());
    nodes_.clear();
    grow(0, idx_.size(), 0);
    model.nodes = std::move(nodes_);
    model.root = 0;
    return model;
  }

 private:
  int grow(std::size_t begin, std::size_t end, int depth) {
    const std::size_t n = end - begin;
    const int node_id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_[static_cast<std::size_t>(node_id)].n_samples = static_cast<int>(n);

    std::optional<SplitChoice> split;
    if (depth < params_.max_depth &&
        n >= 2 * static_cast<std::size_t>(params_.min_samples_leaf) && n >= 2) {
      split = best_split_indices(x_, y_, span_of(begin, end), candidates(),
                                 params_.min_samples_leaf, n_total_, scratch_);
    }

    if (!split) {
      double sum = 0.0;
      for (std::size_t i = begin; i < end; ++i) sum += y_[idx_[i]];
      TreeNode& leaf = nodes_[static_cast<std::size_t>(node_id)];
      leaf.is_leaf = true;
      leaf.mean = sum / static_cast<double>(n);
      return node_id;
    }

    const auto mid = std::stable_partition(
        idx_.begin() + static_cast<std::ptrdiff_t>(begin),
        idx_.begin() + static_cast<std::ptrdiff_t>(end),
        [&](std::size_t i) { return x_.at(i, split->feature) <= split->threshold; });
    const std::size_t cut = static_cast<std::size_t>(mid - idx_.begin());

    {
      TreeNode& branch = nodes_[static_cast<std::size_t>(node_id)];
      branch.is_leaf = false;
      branch.feature = static_cast<int>(split->feature);
      branch.threshold = split->threshold;
      branch.risk_reduction = split->risk_reduction;
    }
    const int left = grow(begin, cut, depth + 1);
    const int right = grow(cut, end, depth + 1);
    nodes_[static_cast<std::size_t>(node_id)].left = left;
    nodes_[static_cast<std::size_t>(node_id)].right = right;
    return node_id;
  }

  std::span<const std::size_t> span_of(std::size_t begin, std::size_t end) const {
    return {idx_.data() + begin, end - begin};
  }

  /*! \brief Candidate features for the next split; sampled without
   *  replacement when a forest requests mtry < p. */
  std::span<const std::size_t> candidates() {
    const std::size_t p = x_.cols;
    if (all_features_.size() != p) {
      all_features_.resize(p);
      for (std::size_t j = 0; j < p; ++j) all_features_[j] = j;
    }
    if (rng_ == nullptr || mtry_ >= p) return all_features_;
    sampled_ = all_features_;
    for (std::size_t j = 0; j < mtry_; ++j) {
      const std::size_t pick = j + static_cast<std::size_t>(rng_->below(p - j));
      std::swap(sampled_[j], sampled_[pick]);
    }
    sampled_.resize(mtry_);
    std::sort(sampled_.begin(), sampled_.end());
    return sampled_;
  }

  const Matrix& x_;
  std::span<const double> y_;
  TreeParams params_;
  SplitMix64* rng_;
  std::size_t mtry_;
  double n_total_ = 0.0;
  std::vector<std::size_t> idx_;
  std::vector<TreeNode> nodes_;
  std::vector<std::size_t> all_features_;
  std::vector<std::size_t> sampled_;
  std::vector<std::pair<double, double>> scratch_;
};

}  // namespace detail

/*!
 * \brief Best split over full rows of x, searching the given candidate
 * feature indices (all features if empty is not allowed — pass explicitly).
 *
 * n_total defaults to the number of rows, which makes the returned
 * risk_reduction the plain parent-versus-children MSE decrease.
 */
inline std::optional<SplitChoice> find_best_split(
    const Matrix& x, std::span<const double> y,
    std::span<const std::size_t> candidate_features, int min_samples_leaf = 1,
    double n_total = 0.0) {
  if (x.rows != y.size()) {
    throw DomainError("find_best_split: X/y row mismatch");
  }
  std::vector<std::size_t> idx(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) idx[i] = i;
  std::vector<std::pair<double, double>> scratch;
  return detail::best_split_indices(x, y, idx, candidate_features,
                                    min_samples_leaf,
                                    n_total > 0.0 ? n_total : static_cast<double>(x.rows),
                                    scratch);
}

/*! \brief Greedy CART regression tree. */
inline TreeModel train_tree(const Matrix& x, std::span<const double> y,
                            const TreeParams& params = TreeParams{}) {
  if (x.rows == 0 || x.rows != y.size()) {
    throw DomainError("train_tree: need at least one sample and matching y");
  }
  std::vector<std::size_t> idx(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) idx[i] = i;
  detail::TreeBuilder builder(x, y, params, nullptr, x.cols);
  return builder.build(std::move(idx));
}

/*!
 * \brief Per-feature importance: the sum of risk reductions of branches
 * splitting on the feature, divided by the total number of branch nodes.
 * Features never split on score exactly zero; a branchless tree scores all
 * zeros.
 */
inline std::map<std::string, double> tree_importance(
    const TreeModel& model, const std::vector<std::string>& feature_names) {
  if (feature_names.size() != model.n_features) {
    throw DomainError("tree_importance: feature name count mismatch");
  }
  std::map<std::string, double> importance;
  for (const std::string& name : feature_names) importance[name] = 0.0;
  const std::size_t branches = model.branch_count();
  if (branches == 0) return importance;
  for (const TreeNode& node : model.nodes) {
    if (!node.is_leaf) {
      importance[feature_names[static_cast<std::size_t>(node.feature)]] +=
          node.risk_reduction;
    }
  }
  for (auto& [name, score] : importance) score /= static_cast<double>(branches);
  return importance;
}

}  // namespace kqipred

#endif  // KQIPRED_TREE_HPP_
