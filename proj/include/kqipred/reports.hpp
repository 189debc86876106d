/*!
 * Copyright (c) 2026 by Contributors
 * \file reports.hpp
 * \brief Plot-ready CSV and JSON report writers.
 *
 * Report schemas:
 *   evaluate    CSV `technique,kqi,fold,r2,rmse`      (one row per fold)
 *   importance  CSV `kqi,feature,score,rank`          (descending by score)
 *   generalize  CSV `technique,kqi,arm,r2,rmse`       (arm = full | partial)
 *   trace       CSV `index,bandwidth_mhz,measured,predicted,band_low,band_high`
 * The JSON variants carry the same content plus aggregate statistics.
 */
#ifndef KQIPRED_REPORTS_HPP_
#define KQIPRED_REPORTS_HPP_

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "kqipred/dataset.hpp"
#include "kqipred/error.hpp"
#include "kqipred/evaluation.hpp"
#include "kqipred/framework.hpp"

namespace kqipred {

namespace detail {

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline std::string fmt(double v) {
  std::string s;
  append_double(s, v);
  return s;
}

}  // namespace detail

/*! \brief Cross-validation table, one CSV row per fold. */
inline std::string evaluation_csv(const std::vector<CvReport>& table) {
  std::string out = "technique,kqi,fold,r2,rmse\n";
  for (const CvReport& report : table) {
    for (std::size_t fold = 0; fold < report.folds.size(); ++fold) {
      out += to_string(report.technique);
      out += ',';
      out += to_string(report.target);
      out += ',';
      out += std::to_string(fold);
      out += ',';
      out += detail::fmt(report.folds[fold].r_squared);
      out += ',';
      out += detail::fmt(report.folds[fold].rmse);
      out += '\n';
    }
  }
  return out;
}

inline nlohmann::json evaluation_json(const std::vector<CvReport>& table) {
  nlohmann::json entries = nlohmann::json::array();
  for (const CvReport& report : table) entries.push_back(detail::cv_to_json(report));
  return nlohmann::json{{"report", "evaluate"}, {"entries", std::move(entries)}};
}

/*! \brief One importance row after ranking. */
struct RankedImportance {
  std::string feature;
  double score = 0.0;
  int rank = 0;
};

/*!
 * \brief Order an importance map by descending score (canonical feature
 * order breaks ties) and attach 1-based ranks.
 */
inline std::vector<RankedImportance> rank_importance(
    const std::map<std::string, double>& importance,
    const std::vector<std::string>& feature_order) {
  std::vector<RankedImportance> rows;
  for (const std::string& name : feature_order) {
    const auto it = importance.find(name);
    if (it != importance.end()) rows.push_back({name, it->second, 0});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const RankedImportance& a, const RankedImportance& b) {
                     return a.score > b.score;
                   });
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = static_cast<int>(i + 1);
  return rows;
}

inline std::string importance_csv(KqiName kqi,
                                  const std::vector<RankedImportance>& rows) {
  std::string out = "kqi,feature,score,rank\n";
  for (const RankedImportance& row : rows) {
    out += to_string(kqi);
    out += ',';
    out += row.feature;
    out += ',';
    out += detail::fmt(row.score);
    out += ',';
    out += std::to_string(row.rank);
    out += '\n';
  }
  return out;
}

inline nlohmann::json importance_json(KqiName kqi,
                                      const std::vector<RankedImportance>& rows,
                                      const std::string& normalization) {
  nlohmann::json entries = nlohmann::json::array();
  for (const RankedImportance& row : rows) {
    entries.push_back(nlohmann::json{
        {"feature", row.feature}, {"score", row.score}, {"rank", row.rank}});
  }
  return nlohmann::json{{"report", "importance"},
                        {"kqi", to_string(kqi)},
                        {"normalization", normalization},
                        {"entries", std::move(entries)}};
}

/*! \brief Generalization table: full and partial arms per technique and KQI. */
inline std::string generalization_csv(const GeneralizationReport& report) {
  std::string out = "technique,kqi,arm,r2,rmse\n";
  for (const GeneralizationCell& cell : report.cells) {
    for (const bool full_arm : {true, false}) {
      const Metrics& m = full_arm ? cell.full : cell.partial;
      out += to_string(cell.technique);
      out += ',';
      out += to_string(cell.target);
      out += ',';
      out += full_arm ? "full" : "partial";
      out += ',';
      out += detail::fmt(m.r_squared);
      out += ',';
      out += detail::fmt(m.rmse);
      out += '\n';
    }
  }
  return out;
}

inline nlohmann::json generalization_json(const GeneralizationReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const GeneralizationCell& cell : report.cells) {
    cells.push_back(nlohmann::json{
        {"technique", to_string(cell.technique)},
        {"kqi", to_string(cell.target)},
        {"full", {{"r2", cell.full.r_squared}, {"rmse", cell.full.rmse}}},
        {"partial", {{"r2", cell.partial.r_squared}, {"rmse", cell.partial.rmse}}}});
  }
  return nlohmann::json{{"report", "generalize"},
                        {"a_sizes_bytes", report.a_sizes},
                        {"b_sizes_bytes", report.b_sizes},
                        {"seed", report.seed},
                        {"cells", std::move(cells)}};
}

/*! \brief Per-sample measured-versus-predicted trace. */
inline std::string trace_csv(const std::vector<TraceRecord>& records) {
  std::string out = "index,bandwidth_mhz,measured,predicted,band_low,band_high\n";
  for (const TraceRecord& rec : records) {
    out += std::to_string(rec.index);
    out += ',';
    out += detail::fmt(rec.bandwidth_mhz);
    out += ',';
    out += detail::fmt(rec.measured);
    out += ',';
    out += detail::fmt(rec.predicted);
    out += ',';
    out += detail::fmt(rec.band_low);
    out += ',';
    out += detail::fmt(rec.band_high);
    out += '\n';
  }
  return out;
}

}  // namespace kqipred

#endif  // KQIPRED_REPORTS_HPP_
