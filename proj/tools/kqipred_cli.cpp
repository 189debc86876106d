/*!
 * Copyright (c) 2026 by Contributors
 * \file kqipred_cli.cpp
 * \brief Command-line front end: campaign simulation, model training,
 *        evaluation and report emission.
 *
 * Exit codes: 0 success, 1 usage error, 2 data/validation/config error,
 * 3 adequacy-gate signal (train only: at least one KQI gated as retrain).
 */
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kqipred/config.hpp"
#include "kqipred/dataset.hpp"
#include "kqipred/error.hpp"
#include "kqipred/evaluation.hpp"
#include "kqipred/framework.hpp"
#include "kqipred/model.hpp"
#include "kqipred/reports.hpp"
#include "kqipred/simulator.hpp"

namespace {

using namespace kqipred;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRetrainGate = 3;

struct CommonArgs {
  std::uint64_t seed = 0;
  std::string config_path;
  std::string out;
  int threads = 0;
};

ToolConfig resolve_config(const CommonArgs& args) {
  if (args.config_path.empty()) return ToolConfig{};
  return load_config(args.config_path);
}

/*! One ModelSpec per configured technique for the given KQI. */
std::vector<ModelSpec> specs_for(const ToolConfig& config) {
  std::vector<ModelSpec> specs;
  for (const KqiName kqi : kAllKqis) {
    for (const Technique technique : kAllTechniques) {
      if (std::find(config.framework.techniques.begin(),
                    config.framework.techniques.end(),
                    technique) == config.framework.techniques.end()) {
        continue;
      }
      specs.push_back(ModelSpec{technique, config.framework.hyperparams,
                                config.framework.feature_names, kqi});
    }
  }
  return specs;
}

int cmd_simulate(const CommonArgs& args, std::size_t total) {
  const ToolConfig config = resolve_config(args);
  const Dataset campaign =
      run_campaign(config.grid, config.generator, total, args.seed, args.threads);
  save_csv(campaign, args.out);
  return kExitOk;
}

int cmd_evaluate(const CommonArgs& args, const std::string& data_path, int k) {
  const ToolConfig config = resolve_config(args);
  const Dataset dataset = load_csv(data_path);
  const std::vector<CvReport> table =
      compare_techniques(dataset, specs_for(config), k, args.seed, args.threads);
  detail::write_text_file(args.out + ".csv", evaluation_csv(table));
  detail::write_text_file(args.out + ".json", evaluation_json(table).dump(2) + "\n");
  return kExitOk;
}

int cmd_importance(const CommonArgs& args, const std::string& data_path,
                   const std::string& target_name) {
  const ToolConfig config = resolve_config(args);
  const Dataset dataset = load_csv(data_path);
  const KqiName target = kqi_from_string(target_name);

  const auto [x, y] = to_matrix(dataset, config.framework.feature_names, target);
  const TreeModel tree = train_tree(x, y, config.framework.hyperparams.tree);
  std::map<std::string, double> importance =
      tree_importance(tree, config.framework.feature_names);

  // Scores are divided by the target variance so that importance magnitudes
  // can be compared across KQIs with very different scales.
  double mean = 0.0;
  for (const double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double variance = 0.0;
  for (const double v : y) variance += (v - mean) * (v - mean);
  variance /= static_cast<double>(y.size());
  if (variance > 0.0) {
    for (auto& [name, score] : importance) score /= variance;
  }

  const std::vector<RankedImportance> rows =
      rank_importance(importance, config.framework.feature_names);
  detail::write_text_file(args.out + ".csv", importance_csv(target, rows));
  detail::write_text_file(
      args.out + ".json",
      importance_json(target, rows, "target_variance").dump(2) + "\n");
  return kExitOk;
}

int cmd_generalize(const CommonArgs& args, const std::string& data_path) {
  const ToolConfig config = resolve_config(args);
  const Dataset dataset = load_csv(data_path);

  const std::set<std::int64_t> a_sizes(config.a_sizes_bytes.begin(),
                                       config.a_sizes_bytes.end());
  const std::set<std::int64_t> b_sizes(config.b_sizes_bytes.begin(),
                                       config.b_sizes_bytes.end());
  const Dataset dataset_a = filter_by_file_size(dataset, a_sizes);
  const Dataset dataset_b = filter_by_file_size(dataset, b_sizes);

  const std::set<std::int64_t> present = distinct_file_sizes(dataset);
  std::string missing;
  for (const std::int64_t size : b_sizes) {
    if (present.count(size) == 0) missing += (missing.empty() ? "" : ", ") + std::to_string(size);
  }
  if (!missing.empty()) {
    throw DomainError("campaign has no rows for dataset-B file sizes: " + missing);
  }
  if (dataset_a.empty()) {
    throw DomainError("campaign has no rows for any dataset-A file size");
  }

  const GeneralizationReport report =
      full_vs_partial(dataset_a, dataset_b, specs_for(config), args.seed, args.threads);
  detail::write_text_file(args.out + ".csv", generalization_csv(report));
  detail::write_text_file(args.out + ".json", generalization_json(report).dump(2) + "\n");
  return kExitOk;
}

int cmd_train(const CommonArgs& args, const std::string& data_path,
              std::optional<int> k_override) {
  ToolConfig config = resolve_config(args);
  config.framework.seed = args.seed;
  if (k_override) config.framework.k = *k_override;
  const Dataset dataset = load_csv(data_path);
  const ModelRegistry registry = train_phase(dataset, config.framework, args.threads);
  save_registry(registry, args.out);
  for (const auto& [kqi, entry] : registry.entries) {
    std::cerr << to_string(kqi) << ": " << to_string(entry.technique)
              << " cv-mean-r2=" << entry.cv.mean.r_squared << " -> "
              << to_string(entry.status) << "\n";
    if (entry.status == Fitness::kRetrain) {
      std::cerr << "  (inadequate at threshold "
                << registry.config.adequacy_threshold
                << "; consider gathering more data and re-training)\n";
    }
  }
  for (const auto& [kqi, entry] : registry.entries) {
    if (entry.status == Fitness::kRetrain) return kExitRetrainGate;
  }
  return kExitOk;
}

/*! Feature-only CSV: the dataset header without the three KQI columns. */
constexpr std::string_view kFeatureCsvHeader =
    "rsrp_dbm,rsrq_db,rssi_dbm,bandwidth_mhz,load_level,file_size_bytes";

std::vector<LowLayerFeatures> load_features_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string text((std::istreambuf_iterator<char>(in)), {});

  std::vector<LowLayerFeatures> rows;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) -> bool {
    if (pos >= text.size()) return false;
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      line = std::string_view(text).substr(pos);
      pos = text.size();
    } else {
      line = std::string_view(text).substr(pos, nl - pos);
      pos = nl + 1;
    }
    return true;
  };
  std::string_view header;
  if (!next_line(header) || header != kFeatureCsvHeader) {
    throw SchemaError("missing or incorrect feature CSV header; expected '" +
                      std::string(kFeatureCsvHeader) + "'");
  }
  std::string_view line;
  std::size_t row = 0;
  while (next_line(line)) {
    if (line.empty() && pos >= text.size()) break;
    ++row;
    const std::string where = "row " + std::to_string(row);
    const auto fields = detail::split_fields(line);
    if (fields.size() != 6) {
      throw ValidationError(where + ": expected 6 fields, got " +
                            std::to_string(fields.size()));
    }
    LowLayerFeatures f;
    f.rsrp_dbm = detail::parse_double_field(fields[0], where);
    f.rsrq_db = detail::parse_double_field(fields[1], where);
    f.rssi_dbm = detail::parse_double_field(fields[2], where);
    f.bandwidth_mhz = detail::parse_double_field(fields[3], where);
    try {
      f.load_level = load_level_from_string(fields[4]);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    f.file_size_bytes = detail::parse_int_field(fields[5], where);
    validate_features(f, where);
    rows.push_back(f);
  }
  return rows;
}

int cmd_predict(const std::string& registry_path, const std::string& features_path,
                const std::string& out_path) {
  const ModelRegistry registry = load_registry(registry_path);
  const std::vector<LowLayerFeatures> rows = load_features_csv(features_path);

  std::string out = "index,iftd_s,fthr_mbps,tftd_s\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto estimates = predict_kqi(registry, rows[i]);
    out += std::to_string(i);
    for (const KqiName kqi : kAllKqis) {
      out += ',';
      const auto it = estimates.find(kqi);
      if (it != estimates.end() && it->second.value.has_value()) {
        out += detail::fmt(*it->second.value);
      } else {
        out += "unavailable";
      }
    }
    out += '\n';
  }
  detail::write_text_file(out_path, out);
  return kExitOk;
}

int cmd_trace(const std::string& registry_path, const std::string& data_path,
              const std::string& kqi_name, const std::string& out_path) {
  const ModelRegistry registry = load_registry(registry_path);
  const Dataset dataset = load_csv(data_path);
  const KqiName kqi = kqi_from_string(kqi_name);
  const auto it = registry.entries.find(kqi);
  if (it == registry.entries.end()) {
    throw DomainError("registry has no entry for " + kqi_name);
  }
  if (it->second.status != Fitness::kAdequate) {
    throw DomainError("registry model for " + kqi_name +
                      " is gated 'retrain'; nothing reliable to trace");
  }
  // The band is the model's RMSE over its own training dataset, mirroring a
  // constant shadow interval around the estimates.
  const std::vector<TraceRecord> records =
      prediction_trace(it->second.model, dataset, it->second.training_rmse);
  detail::write_text_file(out_path, trace_csv(records));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KQI prediction toolkit for file-transfer services"};
  app.require_subcommand(1);

  CommonArgs common;

  auto* simulate = app.add_subcommand(
      "simulate", "Generate a synthetic measurement campaign CSV");
  std::size_t total = 9000;
  simulate->add_option("--seed", common.seed, "Campaign seed")->default_val("0");
  simulate->add_option("--total", total, "Total number of samples")->required();
  simulate->add_option("--config", common.config_path, "Configuration JSON file");
  simulate->add_option("--out", common.out, "Output CSV path")->required();
  simulate->add_option("--threads", common.threads,
                       "Worker threads (0 = hardware)")
      ->check(CLI::NonNegativeNumber);

  auto* evaluate = app.add_subcommand(
      "evaluate", "Cross-validate every technique per KQI (writes .csv/.json)");
  std::string data_path;
  int k = 5;
  evaluate->add_option("--data", data_path, "Campaign CSV")->required();
  evaluate->add_option("--k", k, "Cross-validation folds")
      ->check(CLI::Range(2, 1000000));
  evaluate->add_option("--seed", common.seed, "Fold/shuffle seed")->default_val("0");
  evaluate->add_option("--config", common.config_path, "Configuration JSON file");
  evaluate->add_option("--out", common.out, "Output base path")->required();
  evaluate->add_option("--threads", common.threads, "Worker threads")
      ->check(CLI::NonNegativeNumber);

  auto* importance = app.add_subcommand(
      "importance", "Tree-model variable importance for one KQI (writes .csv/.json)");
  std::string target_name;
  importance->add_option("--data", data_path, "Campaign CSV")->required();
  importance->add_option("--target", target_name, "Target KQI")
      ->required()
      ->check(CLI::IsMember({"iftd_s", "fthr_mbps", "tftd_s"}));
  importance->add_option("--config", common.config_path, "Configuration JSON file");
  importance->add_option("--out", common.out, "Output base path")->required();

  auto* generalize = app.add_subcommand(
      "generalize", "Full-versus-partial training comparison (writes .csv/.json)");
  generalize->add_option("--data", data_path, "Campaign CSV")->required();
  generalize->add_option("--seed", common.seed, "Holdout seed")->default_val("0");
  generalize->add_option("--config", common.config_path, "Configuration JSON file");
  generalize->add_option("--out", common.out, "Output base path")->required();
  generalize->add_option("--threads", common.threads, "Worker threads")
      ->check(CLI::NonNegativeNumber);

  auto* train = app.add_subcommand(
      "train", "Training phase: select, refit, gate and persist models");
  std::optional<int> k_override;
  train->add_option("--data", data_path, "Campaign CSV")->required();
  train->add_option("--k", k_override, "Cross-validation folds")
      ->check(CLI::Range(2, 1000000));
  train->add_option("--seed", common.seed, "Training seed")->default_val("0");
  train->add_option("--config", common.config_path, "Configuration JSON file");
  train->add_option("--out", common.out, "Registry JSON path")->required();
  train->add_option("--threads", common.threads, "Worker threads")
      ->check(CLI::NonNegativeNumber);

  auto* predict = app.add_subcommand(
      "predict", "Predict KQIs for a feature-only CSV using a registry");
  std::string registry_path;
  std::string features_path;
  predict->add_option("--registry", registry_path, "Registry JSON")->required();
  predict->add_option("--features", features_path, "Feature CSV (no KQI columns)")
      ->required();
  predict->add_option("--out", common.out, "Output CSV path")->required();

  auto* trace = app.add_subcommand(
      "trace", "Measured vs predicted trace with an RMSE band");
  std::string trace_kqi = "tftd_s";
  trace->add_option("--registry", registry_path, "Registry JSON")->required();
  trace->add_option("--data", data_path, "Campaign CSV to trace")->required();
  trace->add_option("--kqi", trace_kqi, "KQI to trace")
      ->check(CLI::IsMember({"iftd_s", "fthr_mbps", "tftd_s"}));
  trace->add_option("--out", common.out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(common, total);
    if (evaluate->parsed()) return cmd_evaluate(common, data_path, k);
    if (importance->parsed()) return cmd_importance(common, data_path, target_name);
    if (generalize->parsed()) return cmd_generalize(common, data_path);
    if (train->parsed()) return cmd_train(common, data_path, k_override);
    if (predict->parsed()) return cmd_predict(registry_path, features_path, common.out);
    if (trace->parsed()) return cmd_trace(registry_path, data_path, trace_kqi, common.out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
