/*!
 * Copyright (c) 2026 by Contributors
 * \file config.hpp
 * \brief CLI configuration document: JSON overrides for the generator, the
 *        campaign grid, the training framework and the A/B size lists.
 *
 * Unknown keys are errors, not warnings; every override is type-checked.
 * Document layout (all sections and keys optional):
 * {
 *   "generator": {"prb_per_bw": {"5": 25, ...}, "load_fraction": {"none": 0.0, ...},
 *                 "rsrp_range_dbm": [-110, -75], "eff_max_bps_hz": 5.0,
 *                 "eff_midpoint_dbm": -99, "eff_slope_db": 10,
 *                 "overhead_factor": 0.75, "ramp_time_s": 0.4,
 *                 "ramp_scale_bytes": 50000, "server_delay_s": 0.12,
 *                 "noise": {"rate_lognormal_sigma": 0.1, "rsrq_sigma_db": 0.5,
 *                            "iftd_sigma_s": 0.005}},
 *   "grid": {"file_sizes_bytes": [...], "bandwidths_mhz": [...],
 *            "load_levels": ["none", "low", "medium"]},
 *   "framework": {"techniques": ["LR", ...], "k": 5,
 *                 "adequacy_threshold": 0.8, "feature_names": [...]},
 *   "hyperparams": {"swlr": {"removal_threshold": 1.96},
 *                   "svr": {"c": 10, "epsilon": 0.1, "epochs": 500, "step_size": 0.01},
 *                   "dtr": {"max_depth": 20, "min_samples_leaf": 25},
 *                   "rfr": {"n_trees": 100, "mtry": 0, "max_depth": 20,
 *                            "min_samples_leaf": 5, "bootstrap": true}},
 *   "ab_split": {"a_sizes_bytes": [...], "b_sizes_bytes": [...]}
 * }
 */
#ifndef KQIPRED_CONFIG_HPP_
#define KQIPRED_CONFIG_HPP_

#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "kqipred/error.hpp"
#include "kqipred/framework.hpp"
#include "kqipred/simulator.hpp"

namespace kqipred {

/*! \brief Everything the CLI can configure, with built-in defaults. */
struct ToolConfig {
  CampaignGrid grid = default_grid();
  GeneratorParams generator;
  FrameworkConfig framework;
  std::vector<std::int64_t> a_sizes_bytes = {1000, 100000, 1000000, 10000000,
                                             100000000};
  std::vector<std::int64_t> b_sizes_bytes = {10000, 500000, 5000000, 20000000};
};

namespace detail {

using nlohmann::json;

inline void require_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (allowed.count(key) == 0) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

inline double config_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + " must be a number");
  return v.get<double>();
}

inline int config_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where + " must be an integer");
  return v.get<int>();
}

inline void apply_generator(const json& g, GeneratorParams& params) {
  require_keys(g, {"prb_per_bw", "load_fraction", "rsrp_range_dbm",
                   "eff_max_bps_hz", "eff_midpoint_dbm", "eff_slope_db",
                   "overhead_factor", "ramp_time_s", "ramp_scale_bytes",
                   "server_delay_s", "noise"},
               "generator");
  if (g.contains("prb_per_bw")) {
    const json& m = g.at("prb_per_bw");
    if (!m.is_object()) throw ConfigError("generator.prb_per_bw must be an object");
    params.prb_per_bw.clear();
    for (const auto& [key, value] : m.items()) {
      try {
        params.prb_per_bw.emplace_back(std::stod(key),
                                       config_int(value, "generator.prb_per_bw." + key));
      } catch (const std::invalid_argument&) {
        throw ConfigError("generator.prb_per_bw key '" + key +
                          "' is not a bandwidth in MHz");
      }
    }
  }
  if (g.contains("load_fraction")) {
    const json& m = g.at("load_fraction");
    require_keys(m, {"none", "low", "medium"}, "generator.load_fraction");
    for (const auto& [token, value] : m.items()) {
      const double f = config_number(value, "generator.load_fraction." + token);
      if (f < 0.0 || f >= 1.0) {
        throw ConfigError("generator.load_fraction." + token +
                          " must be in [0, 1)");
      }
      params.load_fraction[static_cast<std::size_t>(load_level_from_string(token))] = f;
    }
  }
  if (g.contains("rsrp_range_dbm")) {
    const json& r = g.at("rsrp_range_dbm");
    if (!r.is_array() || r.size() != 2) {
      throw ConfigError("generator.rsrp_range_dbm must be [min, max]");
    }
    params.rsrp_min_dbm = config_number(r[0], "generator.rsrp_range_dbm[0]");
    params.rsrp_max_dbm = config_number(r[1], "generator.rsrp_range_dbm[1]");
    if (!(params.rsrp_min_dbm < params.rsrp_max_dbm)) {
      throw ConfigError("generator.rsrp_range_dbm must satisfy min < max");
    }
  }
  auto positive = [&](const char* key, double& out) {
    if (g.contains(key)) {
      const double v = config_number(g.at(key), std::string("generator.") + key);
      if (!(v > 0.0)) throw ConfigError(std::string("generator.") + key + " must be positive");
      out = v;
    }
  };
  positive("eff_max_bps_hz", params.eff_max_bps_hz);
  positive("eff_slope_db", params.eff_slope_db);
  positive("overhead_factor", params.overhead_factor);
  positive("ramp_time_s", params.ramp_time_s);
  positive("ramp_scale_bytes", params.ramp_scale_bytes);
  positive("server_delay_s", params.server_delay_s);
  if (g.contains("eff_midpoint_dbm")) {
    params.eff_midpoint_dbm = config_number(g.at("eff_midpoint_dbm"),
                                            "generator.eff_midpoint_dbm");
  }
  if (g.contains("noise")) {
    const json& n = g.at("noise");
    require_keys(n, {"rate_lognormal_sigma", "rsrq_sigma_db", "iftd_sigma_s"},
                 "generator.noise");
    auto nonneg = [&](const char* key, double& out) {
      if (n.contains(key)) {
        const double v = config_number(n.at(key), std::string("generator.noise.") + key);
        if (v < 0.0) {
          throw ConfigError(std::string("generator.noise.") + key +
                            " must be nonnegative");
        }
        out = v;
      }
    };
    nonneg("rate_lognormal_sigma", params.noise.rate_lognormal_sigma);
    nonneg("rsrq_sigma_db", params.noise.rsrq_sigma_db);
    nonneg("iftd_sigma_s", params.noise.iftd_sigma_s);
  }
}

inline void apply_grid(const json& g, CampaignGrid& grid) {
  require_keys(g, {"file_sizes_bytes", "bandwidths_mhz", "load_levels"}, "grid");
  if (g.contains("file_sizes_bytes")) {
    grid.file_sizes_bytes.clear();
    for (const json& v : g.at("file_sizes_bytes")) {
      if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) {
        throw ConfigError("grid.file_sizes_bytes entries must be positive integers");
      }
      grid.file_sizes_bytes.push_back(v.get<std::int64_t>());
    }
  }
  if (g.contains("bandwidths_mhz")) {
    grid.bandwidths_mhz.clear();
    for (const json& v : g.at("bandwidths_mhz")) {
      const double bw = config_number(v, "grid.bandwidths_mhz entry");
      if (!(bw > 0.0)) throw ConfigError("grid.bandwidths_mhz entries must be positive");
      grid.bandwidths_mhz.push_back(bw);
    }
  }
  if (g.contains("load_levels")) {
    grid.load_levels.clear();
    for (const json& v : g.at("load_levels")) {
      if (!v.is_string()) throw ConfigError("grid.load_levels entries must be strings");
      try {
        grid.load_levels.push_back(load_level_from_string(v.get<std::string>()));
      } catch (const ValidationError& e) {
        throw ConfigError(std::string("grid.load_levels: ") + e.what());
      }
    }
  }
  if (grid.file_sizes_bytes.empty() || grid.bandwidths_mhz.empty() ||
      grid.load_levels.empty()) {
    throw ConfigError("grid axes must all be non-empty");
  }
}

inline void apply_hyperparams(const json& h, Hyperparams& params) {
  require_keys(h, {"swlr", "svr", "dtr", "rfr"}, "hyperparams");
  if (h.contains("swlr")) {
    const json& s = h.at("swlr");
    require_keys(s, {"removal_threshold"}, "hyperparams.swlr");
    if (s.contains("removal_threshold")) {
      params.stepwise.removal_threshold =
          config_number(s.at("removal_threshold"), "hyperparams.swlr.removal_threshold");
    }
  }
  if (h.contains("svr")) {
    const json& s = h.at("svr");
    require_keys(s, {"c", "epsilon", "epochs", "step_size"}, "hyperparams.svr");
    if (s.contains("c")) params.svr.c = config_number(s.at("c"), "hyperparams.svr.c");
    if (s.contains("epsilon")) {
      params.svr.epsilon = config_number(s.at("epsilon"), "hyperparams.svr.epsilon");
    }
    if (s.contains("epochs")) {
      params.svr.epochs = config_int(s.at("epochs"), "hyperparams.svr.epochs");
    }
    if (s.contains("step_size")) {
      params.svr.step_size = config_number(s.at("step_size"), "hyperparams.svr.step_size");
    }
  }
  auto apply_tree = [&](const json& t, TreeParams& tree, const std::string& where) {
    if (t.contains("max_depth")) {
      tree.max_depth = config_int(t.at("max_depth"), where + ".max_depth");
      if (tree.max_depth < 0) throw ConfigError(where + ".max_depth must be >= 0");
    }
    if (t.contains("min_samples_leaf")) {
      tree.min_samples_leaf = config_int(t.at("min_samples_leaf"),
                                         where + ".min_samples_leaf");
      if (tree.min_samples_leaf < 1) {
        throw ConfigError(where + ".min_samples_leaf must be >= 1");
      }
    }
  };
  if (h.contains("dtr")) {
    const json& t = h.at("dtr");
    require_keys(t, {"max_depth", "min_samples_leaf"}, "hyperparams.dtr");
    apply_tree(t, params.tree, "hyperparams.dtr");
  }
  if (h.contains("rfr")) {
    const json& f = h.at("rfr");
    require_keys(f, {"n_trees", "mtry", "max_depth", "min_samples_leaf", "bootstrap"},
                 "hyperparams.rfr");
    if (f.contains("n_trees")) {
      params.forest.n_trees = config_int(f.at("n_trees"), "hyperparams.rfr.n_trees");
      if (params.forest.n_trees < 1) {
        throw ConfigError("hyperparams.rfr.n_trees must be >= 1");
      }
    }
    if (f.contains("mtry")) {
      params.forest.mtry = config_int(f.at("mtry"), "hyperparams.rfr.mtry");
      if (params.forest.mtry < 0) throw ConfigError("hyperparams.rfr.mtry must be >= 0");
    }
    if (f.contains("bootstrap")) {
      if (!f.at("bootstrap").is_boolean()) {
        throw ConfigError("hyperparams.rfr.bootstrap must be a boolean");
      }
      params.forest.bootstrap = f.at("bootstrap").get<bool>();
    }
    apply_tree(f, params.forest.tree, "hyperparams.rfr");
  }
}

inline void apply_framework(const json& f, FrameworkConfig& config) {
  require_keys(f, {"techniques", "k", "adequacy_threshold", "feature_names"},
               "framework");
  if (f.contains("techniques")) {
    config.techniques.clear();
    for (const json& t : f.at("techniques")) {
      if (!t.is_string()) throw ConfigError("framework.techniques entries must be strings");
      try {
        config.techniques.push_back(technique_from_string(t.get<std::string>()));
      } catch (const DomainError& e) {
        throw ConfigError(std::string("framework.techniques: ") + e.what());
      }
    }
    if (config.techniques.empty()) {
      throw ConfigError("framework.techniques must be non-empty");
    }
  }
  if (f.contains("k")) {
    config.k = config_int(f.at("k"), "framework.k");
    if (config.k < 2) throw ConfigError("framework.k must be >= 2");
  }
  if (f.contains("adequacy_threshold")) {
    config.adequacy_threshold =
        config_number(f.at("adequacy_threshold"), "framework.adequacy_threshold");
    if (config.adequacy_threshold < 0.0 || config.adequacy_threshold > 1.0) {
      throw ConfigError("framework.adequacy_threshold must be in [0, 1]");
    }
  }
  if (f.contains("feature_names")) {
    config.feature_names.clear();
    for (const json& n : f.at("feature_names")) {
      if (!n.is_string()) throw ConfigError("framework.feature_names entries must be strings");
      const std::string name = n.get<std::string>();
      if (std::find(all_feature_names().begin(), all_feature_names().end(), name) ==
          all_feature_names().end()) {
        throw ConfigError("framework.feature_names: unknown feature '" + name + "'");
      }
      config.feature_names.push_back(name);
    }
    if (config.feature_names.empty()) {
      throw ConfigError("framework.feature_names must be non-empty");
    }
  }
}

inline void apply_ab_split(const json& s, ToolConfig& config) {
  require_keys(s, {"a_sizes_bytes", "b_sizes_bytes"}, "ab_split");
  auto read_sizes = [&](const char* key, std::vector<std::int64_t>& out) {
    if (!s.contains(key)) return;
    out.clear();
    for (const json& v : s.at(key)) {
      if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) {
        throw ConfigError(std::string("ab_split.") + key +
                          " entries must be positive integers");
      }
      out.push_back(v.get<std::int64_t>());
    }
    if (out.empty()) throw ConfigError(std::string("ab_split.") + key + " is empty");
  };
  read_sizes("a_sizes_bytes", config.a_sizes_bytes);
  read_sizes("b_sizes_bytes", config.b_sizes_bytes);
  for (const std::int64_t a : config.a_sizes_bytes) {
    for (const std::int64_t b : config.b_sizes_bytes) {
      if (a == b) {
        throw ConfigError("ab_split: size " + std::to_string(a) +
                          " appears in both lists");
      }
    }
  }
}

}  // namespace detail

/*! \brief Apply a parsed configuration document on top of the defaults. */
inline void apply_config_json(const nlohmann::json& doc, ToolConfig& config) {
  if (!doc.is_object()) throw ConfigError("configuration document must be an object");
  detail::require_keys(doc, {"generator", "grid", "framework", "hyperparams", "ab_split"},
                       "configuration document");
  if (doc.contains("generator")) detail::apply_generator(doc.at("generator"), config.generator);
  if (doc.contains("grid")) detail::apply_grid(doc.at("grid"), config.grid);
  if (doc.contains("framework")) detail::apply_framework(doc.at("framework"), config.framework);
  if (doc.contains("hyperparams")) {
    detail::apply_hyperparams(doc.at("hyperparams"), config.framework.hyperparams);
  }
  if (doc.contains("ab_split")) detail::apply_ab_split(doc.at("ab_split"), config);
}

/*! \brief Load and apply a configuration file. */
inline ToolConfig load_config(const std::string& path) {
  ToolConfig config;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse config file '" + path + "': " + e.what());
  }
  apply_config_json(doc, config);
  return config;
}

}  // namespace kqipred

#endif  // KQIPRED_CONFIG_HPP_
