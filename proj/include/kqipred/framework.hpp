/*!
 * Copyright (c) 2026 by Contributors
 * \file framework.hpp
 * \brief Training/application orchestration and model persistence.
 *
 * The training phase cross-validates every configured technique per KQI,
 * selects the best by mean R-squared, refits it on the full dataset and
 * gates it through the adequacy threshold. The application phase predicts
 * KQIs from low-layer features alone; inadequate KQIs report "unavailable".
 * Re-training concatenates newly acquired data with the retained training
 * set and repeats the training phase.
 */
#ifndef KQIPRED_FRAMEWORK_HPP_
#define KQIPRED_FRAMEWORK_HPP_

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kqipred/dataset.hpp"
#include "kqipred/error.hpp"
#include "kqipred/evaluation.hpp"
#include "kqipred/model.hpp"

namespace kqipred {

inline constexpr int kRegistrySchemaVersion = 1;

/*! \brief Knobs of the training phase. */
struct FrameworkConfig {
  std::vector<Technique> techniques{kAllTechniques.begin(), kAllTechniques.end()};
  Hyperparams hyperparams;
  int k = 5;
  double adequacy_threshold = 0.8;
  std::uint64_t seed = 0;
  std::vector<std::string> feature_names = all_feature_names();
};

/*! \brief Per-KQI outcome of the training phase. */
struct RegistryEntry {
  Technique technique = Technique::kLr;   //!< selected (best mean R2) technique
  Fitness status = Fitness::kRetrain;
  CvReport cv;
  double training_rmse = 0.0;             //!< refit model's RMSE on its training set
  TrainedModel model;                     //!< refit on the full dataset
  std::map<std::string, std::string> technique_errors;  //!< technique -> message
  std::vector<CvReport> all_reports;      //!< every technique that trained
};

/*! \brief Trained models plus the evidence that selected them. */
struct ModelRegistry {
  int schema_version = kRegistrySchemaVersion;
  FrameworkConfig config;
  std::size_t fingerprint_n = 0;
  std::string fingerprint_hash;
  std::map<KqiName, RegistryEntry> entries;

  /*! Retained training data (in memory only; not persisted). Present on
   *  registries produced by train_phase; absent after load_registry. */
  std::optional<Dataset> training_data;
};

/*! \brief FNV-1a 64-bit over the canonical CSV rendering of the dataset. */
inline std::string dataset_fingerprint(const Dataset& dataset) {
  const std::string text = to_csv(dataset);
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream hex;
  hex << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return hex.str();
}

/*!
 * \brief Training phase: per KQI, cross-validate every configured technique,
 * pick the best mean R-squared (ties resolve in canonical technique order),
 * refit on the full dataset and apply the adequacy gate.
 *
 * A technique that fails to train is recorded and skipped; only a KQI with
 * no surviving technique aborts the phase.
 */
inline ModelRegistry train_phase(const Dataset& dataset,
                                 const FrameworkConfig& config,
                                 int n_threads = 1) {
  if (dataset.empty()) throw DomainError("train_phase: dataset is empty");
  if (config.k < 2) throw DomainError("train_phase: k must be >= 2");
  if (config.techniques.empty()) {
    throw DomainError("train_phase: no techniques configured");
  }

  ModelRegistry registry;
  registry.config = config;
  registry.fingerprint_n = dataset.size();
  registry.fingerprint_hash = dataset_fingerprint(dataset);
  registry.training_data = dataset;

  for (const KqiName kqi : kAllKqis) {
    RegistryEntry entry;
    bool have_best = false;
    CvReport best_report;

    for (const Technique technique : kAllTechniques) {
      if (std::find(config.techniques.begin(), config.techniques.end(), technique) ==
          config.techniques.end()) {
        continue;
      }
      ModelSpec spec{technique, config.hyperparams, config.feature_names, kqi};
      try {
        CvReport report = cross_validate(spec, dataset, config.k, config.seed,
                                         n_threads);
        if (!have_best || report.mean.r_squared > best_report.mean.r_squared) {
          have_best = true;
          best_report = report;
        }
        entry.all_reports.push_back(std::move(report));
      } catch (const Error& e) {
        entry.technique_errors[to_string(technique)] = e.what();
      }
    }
    if (!have_best) {
      throw DomainError(std::string("train_phase: every technique failed for ") +
                        to_string(kqi));
    }

    ModelSpec best_spec{best_report.technique, config.hyperparams,
                        config.feature_names, kqi};
    const auto [x, y] = to_matrix(dataset, config.feature_names, kqi);
    entry.model = train_model(
        best_spec, x, y,
        SplitMix64::derive(config.seed, 0x5eedULL,
                           static_cast<std::uint64_t>(kqi)),
        n_threads);
    entry.training_rmse = rmse(y, predict_rows(entry.model, x));
    entry.technique = best_report.technique;
    entry.cv = best_report;
    entry.status = fitness_gate(best_report.mean.r_squared,
                                config.adequacy_threshold);
    registry.entries[kqi] = std::move(entry);
  }
  return registry;
}

/*! \brief One KQI's application-phase answer. */
struct KqiEstimate {
  Fitness status = Fitness::kRetrain;
  double cv_mean_r2 = 0.0;
  std::optional<double> value;  //!< empty when the model is gated Retrain
};

/*! \brief Predict all KQIs from low-layer features alone. */
inline std::map<KqiName, KqiEstimate> predict_kqi(const ModelRegistry& registry,
                                                  const LowLayerFeatures& features) {
  validate_features(features, "predict_kqi");
  std::map<KqiName, KqiEstimate> out;
  for (const auto& [kqi, entry] : registry.entries) {
    KqiEstimate estimate;
    estimate.status = entry.status;
    estimate.cv_mean_r2 = entry.cv.mean.r_squared;
    if (entry.status == Fitness::kAdequate) {
      const std::vector<double> row = feature_row(features, entry.model.feature_names);
      estimate.value = predict(entry.model, row);
    }
    out[kqi] = estimate;
  }
  return out;
}

/*!
 * \brief Concatenate newly acquired data with the retained training set and
 * re-run the training phase under the given configuration.
 */
inline ModelRegistry augment_and_retrain(const ModelRegistry& registry,
                                         const Dataset& new_data,
                                         const FrameworkConfig& config,
                                         int n_threads = 1) {
  if (!registry.training_data.has_value()) {
    throw DomainError("augment_and_retrain: registry does not retain its "
                      "training dataset (was it loaded from disk?)");
  }
  const Dataset combined = concat(*registry.training_data, new_data);
  return train_phase(combined, config, n_threads);
}

// ---------------------------------------------------------------------------
// JSON persistence
// ---------------------------------------------------------------------------

namespace detail {

using nlohmann::json;

inline json to_json(const LinearModel& m) {
  json coeffs = json::object();
  for (const auto& [name, value] : m.coefficients) coeffs[name] = value;
  return json{{"type", "linear"}, {"intercept", m.intercept},
              {"coefficients", coeffs}};
}

inline json to_json(const TreeModel& m) {
  json nodes = json::array();
  for (const TreeNode& n : m.nodes) {
    if (n.is_leaf) {
      nodes.push_back(json{{"kind", "leaf"}, {"mean", n.mean},
                           {"n_samples", n.n_samples}});
    } else {
      nodes.push_back(json{{"kind", "branch"},
                           {"feature", n.feature},
                           {"threshold", n.threshold},
                           {"left", n.left},
                           {"right", n.right},
                           {"risk_reduction", n.risk_reduction},
                           {"n_samples", n.n_samples}});
    }
  }
  return json{{"type", "tree"}, {"root", m.root}, {"nodes", std::move(nodes)}};
}

inline json to_json(const ForestModel& m) {
  json trees = json::array();
  for (const TreeModel& t : m.trees) trees.push_back(to_json(t));
  return json{{"type", "forest"}, {"seed", m.seed}, {"trees", std::move(trees)}};
}

inline json to_json(const SvrModel& m) {
  return json{{"type", "svr"},
              {"weights", m.weights},
              {"bias", m.bias},
              {"feature_means", m.feature_mean},
              {"feature_stds", m.feature_std},
              {"target_mean", m.target_mean},
              {"target_std", m.target_std}};
}

inline json model_to_json(const TrainedModel& model) {
  json impl = std::visit([](const auto& m) { return to_json(m); }, model.impl);
  impl["technique"] = to_string(model.technique);
  impl["target"] = to_string(model.target);
  impl["feature_names"] = model.feature_names;
  return impl;
}

inline LinearModel linear_from_json(const json& j,
                                    const std::vector<std::string>& names) {
  LinearModel m;
  m.feature_names = names;
  m.intercept = j.at("intercept").get<double>();
  for (const auto& [name, value] : j.at("coefficients").items()) {
    m.coefficients[name] = value.get<double>();
  }
  return m;
}

inline TreeModel tree_from_json(const json& j, std::size_t n_features) {
  TreeModel m;
  m.n_features = n_features;
  m.root = j.at("root").get<int>();
  const json& nodes = j.at("nodes");
  m.nodes.reserve(nodes.size());
  for (const json& nj : nodes) {
    TreeNode n;
    const std::string kind = nj.at("kind").get<std::string>();
    n.n_samples = nj.at("n_samples").get<int>();
    if (kind == "leaf") {
      n.is_leaf = true;
      n.mean = nj.at("mean").get<double>();
    } else if (kind == "branch") {
      n.is_leaf = false;
      n.feature = nj.at("feature").get<int>();
      n.threshold = nj.at("threshold").get<double>();
      n.left = nj.at("left").get<int>();
      n.right = nj.at("right").get<int>();
      n.risk_reduction = nj.at("risk_reduction").get<double>();
      if (n.left < 0 || n.right < 0 ||
          static_cast<std::size_t>(n.left) >= nodes.size() ||
          static_cast<std::size_t>(n.right) >= nodes.size()) {
        throw ParseError("tree node child index out of range");
      }
    } else {
      throw ParseError("unknown tree node kind '" + kind + "'");
    }
    m.nodes.push_back(n);
  }
  if (m.nodes.empty() || m.root < 0 ||
      static_cast<std::size_t>(m.root) >= m.nodes.size()) {
    throw ParseError("tree root index out of range");
  }
  return m;
}

inline ForestModel forest_from_json(const json& j, std::size_t n_features) {
  ForestModel m;
  m.seed = j.at("seed").get<std::uint64_t>();
  for (const json& tj : j.at("trees")) m.trees.push_back(tree_from_json(tj, n_features));
  if (m.trees.empty()) throw ParseError("forest has no trees");
  return m;
}

inline SvrModel svr_from_json(const json& j) {
  SvrModel m;
  m.weights = j.at("weights").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  m.feature_mean = j.at("feature_means").get<std::vector<double>>();
  m.feature_std = j.at("feature_stds").get<std::vector<double>>();
  m.target_mean = j.at("target_mean").get<double>();
  m.target_std = j.at("target_std").get<double>();
  if (m.feature_mean.size() != m.weights.size() ||
      m.feature_std.size() != m.weights.size()) {
    throw ParseError("svr model standardization arrays do not match weights");
  }
  for (const double sd : m.feature_std) {
    if (!(sd > 0.0)) throw ParseError("svr model has a nonpositive feature std");
  }
  if (!(m.target_std > 0.0)) throw ParseError("svr model has a nonpositive target std");
  return m;
}

inline TrainedModel model_from_json(const json& j) {
  TrainedModel model;
  model.technique = technique_from_string(j.at("technique").get<std::string>());
  model.target = kqi_from_string(j.at("target").get<std::string>());
  model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  const std::string type = j.at("type").get<std::string>();
  if (type == "linear") {
    model.impl = linear_from_json(j, model.feature_names);
  } else if (type == "tree") {
    model.impl = tree_from_json(j, model.feature_names.size());
  } else if (type == "forest") {
    model.impl = forest_from_json(j, model.feature_names.size());
  } else if (type == "svr") {
    model.impl = svr_from_json(j);
  } else {
    throw ParseError("unknown model type '" + type + "'");
  }
  return model;
}

inline json config_to_json(const FrameworkConfig& c) {
  json techniques = json::array();
  for (const Technique t : c.techniques) techniques.push_back(to_string(t));
  return json{
      {"techniques", std::move(techniques)},
      {"k", c.k},
      {"adequacy_threshold", c.adequacy_threshold},
      {"seed", c.seed},
      {"feature_names", c.feature_names},
      {"hyperparams",
       json{{"swlr", json{{"removal_threshold", c.hyperparams.stepwise.removal_threshold}}},
            {"svr", json{{"c", c.hyperparams.svr.c},
                         {"epsilon", c.hyperparams.svr.epsilon},
                         {"epochs", c.hyperparams.svr.epochs},
                         {"step_size", c.hyperparams.svr.step_size}}},
            {"dtr", json{{"max_depth", c.hyperparams.tree.max_depth},
                         {"min_samples_leaf", c.hyperparams.tree.min_samples_leaf}}},
            {"rfr", json{{"n_trees", c.hyperparams.forest.n_trees},
                         {"mtry", c.hyperparams.forest.mtry},
                         {"max_depth", c.hyperparams.forest.tree.max_depth},
                         {"min_samples_leaf", c.hyperparams.forest.tree.min_samples_leaf},
                         {"bootstrap", c.hyperparams.forest.bootstrap}}}}}};
}

inline FrameworkConfig config_from_json(const json& j) {
  FrameworkConfig c;
  c.techniques.clear();
  for (const json& t : j.at("techniques")) {
    c.techniques.push_back(technique_from_string(t.get<std::string>()));
  }
  c.k = j.at("k").get<int>();
  c.adequacy_threshold = j.at("adequacy_threshold").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  const json& h = j.at("hyperparams");
  c.hyperparams.stepwise.removal_threshold =
      h.at("swlr").at("removal_threshold").get<double>();
  c.hyperparams.svr.c = h.at("svr").at("c").get<double>();
  c.hyperparams.svr.epsilon = h.at("svr").at("epsilon").get<double>();
  c.hyperparams.svr.epochs = h.at("svr").at("epochs").get<int>();
  c.hyperparams.svr.step_size = h.at("svr").at("step_size").get<double>();
  c.hyperparams.tree.max_depth = h.at("dtr").at("max_depth").get<int>();
  c.hyperparams.tree.min_samples_leaf = h.at("dtr").at("min_samples_leaf").get<int>();
  c.hyperparams.forest.n_trees = h.at("rfr").at("n_trees").get<int>();
  c.hyperparams.forest.mtry = h.at("rfr").at("mtry").get<int>();
  c.hyperparams.forest.tree.max_depth = h.at("rfr").at("max_depth").get<int>();
  c.hyperparams.forest.tree.min_samples_leaf =
      h.at("rfr").at("min_samples_leaf").get<int>();
  c.hyperparams.forest.bootstrap = h.at("rfr").at("bootstrap").get<bool>();
  return c;
}

inline json cv_to_json(const CvReport& r) {
  json folds = json::array();
  for (const Metrics& m : r.folds) {
    folds.push_back(json{{"r2", m.r_squared}, {"rmse", m.rmse}});
  }
  return json{{"technique", to_string(r.technique)},
              {"kqi", to_string(r.target)},
              {"k", r.k},
              {"seed", r.seed},
              {"folds", std::move(folds)},
              {"mean_r2", r.mean.r_squared},
              {"std_r2", r.stddev.r_squared},
              {"mean_rmse", r.mean.rmse},
              {"std_rmse", r.stddev.rmse}};
}

inline CvReport cv_from_json(const json& j) {
  CvReport r;
  r.technique = technique_from_string(j.at("technique").get<std::string>());
  r.target = kqi_from_string(j.at("kqi").get<std::string>());
  r.k = j.at("k").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const json& f : j.at("folds")) {
    r.folds.push_back(Metrics{f.at("r2").get<double>(), f.at("rmse").get<double>()});
  }
  r.mean.r_squared = j.at("mean_r2").get<double>();
  r.stddev.r_squared = j.at("std_r2").get<double>();
  r.mean.rmse = j.at("mean_rmse").get<double>();
  r.stddev.rmse = j.at("std_rmse").get<double>();
  return r;
}

}  // namespace detail

/*! \brief Serialize a registry (without its retained training data). */
inline nlohmann::json registry_to_json(const ModelRegistry& registry) {
  using nlohmann::json;
  json entries = json::object();
  for (const auto& [kqi, entry] : registry.entries) {
    json ej{{"technique", to_string(entry.technique)},
            {"status", to_string(entry.status)},
            {"cv", detail::cv_to_json(entry.cv)},
            {"training_rmse", entry.training_rmse},
            {"model", detail::model_to_json(entry.model)}};
    if (!entry.technique_errors.empty()) {
      json errors = json::object();
      for (const auto& [tech, msg] : entry.technique_errors) errors[tech] = msg;
      ej["technique_errors"] = std::move(errors);
    }
    entries[to_string(kqi)] = std::move(ej);
  }
  return json{{"schema_version", registry.schema_version},
              {"config", detail::config_to_json(registry.config)},
              {"dataset_fingerprint", json{{"n", registry.fingerprint_n},
                                           {"content_hash", registry.fingerprint_hash}}},
              {"entries", std::move(entries)}};
}

inline ModelRegistry registry_from_json(const nlohmann::json& j) {
  ModelRegistry registry;
  if (!j.is_object() || !j.contains("schema_version")) {
    throw ParseError("registry document has no schema_version");
  }
  const int version = j.at("schema_version").get<int>();
  if (version != kRegistrySchemaVersion) {
    throw IncompatibilityError(
        "registry schema_version " + std::to_string(version) +
        " is not supported; this build reads version " +
        std::to_string(kRegistrySchemaVersion));
  }
  registry.schema_version = version;
  registry.config = detail::config_from_json(j.at("config"));
  registry.fingerprint_n = j.at("dataset_fingerprint").at("n").get<std::size_t>();
  registry.fingerprint_hash =
      j.at("dataset_fingerprint").at("content_hash").get<std::string>();
  for (const auto& [key, ej] : j.at("entries").items()) {
    RegistryEntry entry;
    entry.technique = technique_from_string(ej.at("technique").get<std::string>());
    entry.status = fitness_from_string(ej.at("status").get<std::string>());
    entry.cv = detail::cv_from_json(ej.at("cv"));
    entry.training_rmse = ej.at("training_rmse").get<double>();
    entry.model = detail::model_from_json(ej.at("model"));
    if (ej.contains("technique_errors")) {
      for (const auto& [tech, msg] : ej.at("technique_errors").items()) {
        entry.technique_errors[tech] = msg.get<std::string>();
      }
    }
    registry.entries[kqi_from_string(key)] = std::move(entry);
  }
  return registry;
}

/*! \brief Write a registry document. */
inline void save_registry(const ModelRegistry& registry, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << registry_to_json(registry).dump() << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

/*! \brief Read a registry document; predictions match the saved registry. */
inline ModelRegistry load_registry(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("cannot parse registry document '" + path + "': " + e.what());
  }
  try {
    return registry_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed registry document '" + path + "': " + e.what());
  }
}

}  // namespace kqipred

#endif  // KQIPRED_FRAMEWORK_HPP_
