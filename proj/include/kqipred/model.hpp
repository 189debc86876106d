/*!
 * Copyright (c) 2026 by Contributors
 * \file model.hpp
 * \brief The five regression techniques behind one training/prediction surface.
 */
#ifndef KQIPRED_MODEL_HPP_
#define KQIPRED_MODEL_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kqipred/dataset.hpp"
#include "kqipred/error.hpp"
#include "kqipred/forest.hpp"
#include "kqipred/linear.hpp"
#include "kqipred/matrix.hpp"
#include "kqipred/svr.hpp"
#include "kqipred/tree.hpp"

namespace kqipred {

enum class Technique : int { kLr = 0, kSwLr = 1, kSvr = 2, kDtr = 3, kRfr = 4 };

/*! \brief Canonical technique order, also the tie-break order. */
inline constexpr std::array<Technique, 5> kAllTechniques = {
    Technique::kLr, Technique::kSwLr, Technique::kSvr, Technique::kDtr,
    Technique::kRfr};

inline const char* to_string(Technique t) {
  switch (t) {
    case Technique::kLr: return "LR";
    case Technique::kSwLr: return "SW-LR";
    case Technique::kSvr: return "SVR";
    case Technique::kDtr: return "DTR";
    case Technique::kRfr: return "RFR";
  }
  return "?";
}

inline Technique technique_from_string(std::string_view token) {
  for (Technique t : kAllTechniques) {
    if (token == to_string(t)) return t;
  }
  throw DomainError("unknown technique '" + std::string(token) + "'");
}

struct StepwiseParams {
  double removal_threshold = 1.96;  //!< two-sided 5% normal approximation
};

/*! \brief Hyperparameters for every technique; each model reads its own. */
struct Hyperparams {
  StepwiseParams stepwise;
  SvrParams svr;
  TreeParams tree;
  ForestParams forest;
};

/*! \brief What to train: technique, features, target KQI, hyperparameters. */
struct ModelSpec {
  Technique technique = Technique::kLr;
  Hyperparams hyperparams;
  std::vector<std::string> feature_names = all_feature_names();
  KqiName target = KqiName::kTftd;
};

/*! \brief A trained regressor of any technique. */
struct TrainedModel {
  Technique technique = Technique::kLr;
  KqiName target = KqiName::kTftd;
  std::vector<std::string> feature_names;
  std::variant<LinearModel, TreeModel, ForestModel, SvrModel> impl;
};

/*!
 * \brief Train one model as described by its ModelSpec. seed feeds only the
 * randomized techniques (RFR); everything else is deterministic by
 * construction.
 */
inline TrainedModel train_model(const ModelSpec& spec, const Matrix& x,
                                std::span<const double> y, std::uint64_t seed,
                                int n_threads = 1) {
  if (spec.feature_names.empty()) {
    throw DomainError("train_model: feature list is empty");
  }
  if (spec.feature_names.size() != x.cols) {
    throw DomainError("train_model: feature list does not match matrix columns");
  }
  TrainedModel model;
  model.technique = spec.technique;
  model.target = spec.target;
  model.feature_names = spec.feature_names;
  switch (spec.technique) {
    case Technique::kLr:
      model.impl = train_linear(x, y, spec.feature_names);
      break;
    case Technique::kSwLr:
      model.impl = train_stepwise(x, y, spec.feature_names,
                                  spec.hyperparams.stepwise.removal_threshold);
      break;
    case Technique::kSvr:
      model.impl = train_svr(x, y, spec.hyperparams.svr);
      break;
    case Technique::kDtr:
      model.impl = train_tree(x, y, spec.hyperparams.tree);
      break;
    case Technique::kRfr:
      model.impl = train_forest(x, y, spec.hyperparams.forest, seed, n_threads);
      break;
  }
  return model;
}

/*! \brief Evaluate a trained model on one feature row. */
inline double predict(const TrainedModel& model, std::span<const double> x) {
  if (x.size() != model.feature_names.size()) {
    throw DomainError("predict: expected " +
                      std::to_string(model.feature_names.size()) +
                      " features, got " + std::to_string(x.size()));
  }
  return std::visit([&](const auto& impl) { return impl.predict(x); }, model.impl);
}

/*! \brief Predictions for every row of a matrix. */
inline std::vector<double> predict_rows(const TrainedModel& model, const Matrix& x) {
  std::vector<double> out(x.rows, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) out[i] = predict(model, x.row(i));
  return out;
}

/*! \brief Variable importance for tree-based models (DTR / RFR). */
inline std::map<std::string, double> model_importance(const TrainedModel& model) {
  if (const auto* tree = std::get_if<TreeModel>(&model.impl)) {
    return tree_importance(*tree, model.feature_names);
  }
  if (const auto* forest = std::get_if<ForestModel>(&model.impl)) {
    return forest_importance(*forest, model.feature_names);
  }
  throw DomainError("model_importance: only tree and forest models carry "
                    "split-based importance");
}

}  // namespace kqipred

#endif  // KQIPRED_MODEL_HPP_
