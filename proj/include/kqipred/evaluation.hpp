/*!
 * Copyright (c) 2026 by Contributors
 * \file evaluation.hpp
 * \brief Metrics, k-fold cross-validation, technique comparison, the
 *        full-versus-partial generalization experiment and the adequacy gate.
 */
#ifndef KQIPRED_EVALUATION_HPP_
#define KQIPRED_EVALUATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kqipred/dataset.hpp"
#include "kqipred/error.hpp"
#include "kqipred/model.hpp"
#include "kqipred/rng.hpp"

namespace kqipred {

/*! \brief Model fit quality on one evaluation set. */
struct Metrics {
  double r_squared = 0.0;  //!< <= 1; negative means worse than the mean
  double rmse = 0.0;       //!< in units of the target KQI
};

/*!
 * \brief Coefficient of determination, 1 - SS_res / SS_tot, with the mean
 * of y (the evaluation set itself) in the denominator.
 */
inline double r_squared(std::span<const double> y, std::span<const double> yhat) {
  if (y.size() != yhat.size()) {
    throw DomainError("r_squared: length mismatch");
  }
  if (y.size() < 2) {
    throw DomainError("r_squared: need at least two observations");
  }
  double mean = 0.0;
  for (const double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_tot = 0.0;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_tot += (y[i] - mean) * (y[i] - mean);
    ss_res += (y[i] - yhat[i]) * (y[i] - yhat[i]);
  }
  if (ss_tot == 0.0) {
    throw DegenerateInputError("r_squared: target is constant");
  }
  return 1.0 - ss_res / ss_tot;
}

/*! \brief Root mean square error. */
inline double rmse(std::span<const double> y, std::span<const double> yhat) {
  if (y.size() != yhat.size()) {
    throw DomainError("rmse: length mismatch");
  }
  if (y.empty()) {
    throw DomainError("rmse: need at least one observation");
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss += (y[i] - yhat[i]) * (y[i] - yhat[i]);
  }
  return std::sqrt(ss / static_cast<double>(y.size()));
}

inline Metrics compute_metrics(std::span<const double> y,
                               std::span<const double> yhat) {
  return Metrics{r_squared(y, yhat), rmse(y, yhat)};
}

/*! \brief Cross-validation result for one (technique, KQI) pair. */
struct CvReport {
  Technique technique = Technique::kLr;
  KqiName target = KqiName::kTftd;
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<Metrics> folds;
  Metrics mean;    //!< per-metric mean over folds
  Metrics stddev;  //!< per-metric sample standard deviation over folds
};

namespace detail {

inline std::pair<double, double> mean_and_sd(std::span<const double> v) {
  double mean = 0.0;
  for (const double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  const double sd = v.size() > 1
                        ? std::sqrt(ss / static_cast<double>(v.size() - 1))
                        : 0.0;
  return {mean, sd};
}

inline Matrix gather_rows(const Matrix& x, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), x.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < x.cols; ++j) out.at(i, j) = x.at(rows[i], j);
  }
  return out;
}

template <typename T>
std::vector<T> gather(std::span<const T> v, std::span<const std::size_t> rows) {
  std::vector<T> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = v[rows[i]];
  return out;
}

}  // namespace detail

/*!
 * \brief Classical k-fold cross-validation of one model spec.
 *
 * Folds come from kfold_partition(dataset, k, seed); the fold-i model is
 * trained on every other fold with the sub-stream derive(seed, i) and
 * evaluated on fold i alone.
 */
inline CvReport cross_validate(const ModelSpec& spec, const Dataset& dataset,
                               int k, std::uint64_t seed, int n_threads = 1) {
  const FoldAssignment folds = kfold_partition(dataset, k, seed);
  const auto [x, y] = to_matrix(dataset, spec.feature_names, spec.target);

  CvReport report;
  report.technique = spec.technique;
  report.target = spec.target;
  report.k = k;
  report.seed = seed;
  report.folds.resize(static_cast<std::size_t>(k));

  for (int fold = 0; fold < k; ++fold) {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      (folds.assignment[i] == fold ? test_rows : train_rows).push_back(i);
    }
    const Matrix x_train = detail::gather_rows(x, train_rows);
    const Matrix x_test = detail::gather_rows(x, test_rows);
    const std::vector<double> y_train =
        detail::gather<double>(y, train_rows);
    const std::vector<double> y_test = detail::gather<double>(y, test_rows);
    try {
      const TrainedModel model =
          train_model(spec, x_train, y_train,
                      SplitMix64::derive(seed, static_cast<std::uint64_t>(fold)),
                      n_threads);
      const std::vector<double> yhat = predict_rows(model, x_test);
      report.folds[static_cast<std::size_t>(fold)] = compute_metrics(y_test, yhat);
    } catch (const Error& e) {
      throw DomainError("cross_validate: fold " + std::to_string(fold) + ": " +
                        e.what());
    }
  }

  std::vector<double> r2s, rmses;
  for (const Metrics& m : report.folds) {
    r2s.push_back(m.r_squared);
    rmses.push_back(m.rmse);
  }
  std::tie(report.mean.r_squared, report.stddev.r_squared) = detail::mean_and_sd(r2s);
  std::tie(report.mean.rmse, report.stddev.rmse) = detail::mean_and_sd(rmses);
  return report;
}

/*! \brief Cross-validate every spec on the same fold partition. */
inline std::vector<CvReport> compare_techniques(const Dataset& dataset,
                                                const std::vector<ModelSpec>& specs,
                                                int k, std::uint64_t seed,
                                                int n_threads = 1) {
  std::vector<CvReport> table;
  table.reserve(specs.size());
  for (const ModelSpec& spec : specs) {
    table.push_back(cross_validate(spec, dataset, k, seed, n_threads));
  }
  return table;
}

/*! \brief One cell of the generalization experiment. */
struct GeneralizationCell {
  Technique technique = Technique::kLr;
  KqiName target = KqiName::kTftd;
  Metrics full;     //!< trained on A + B-train
  Metrics partial;  //!< trained on A only
};

/*! \brief Full-versus-partial training comparison, shared B-test arm. */
struct GeneralizationReport {
  std::vector<GeneralizationCell> cells;
  std::vector<std::int64_t> a_sizes;
  std::vector<std::int64_t> b_sizes;
  std::uint64_t seed = 0;
};

namespace detail {

/*!
 * \brief Evaluate both training arms against one shared test set.
 * Exposed separately so the identical-arms case can be checked directly.
 */
inline std::vector<GeneralizationCell> evaluate_arm_pair(
    const Dataset& partial_train, const Dataset& full_train, const Dataset& test,
    const std::vector<ModelSpec>& specs, std::uint64_t seed, int n_threads) {
  std::vector<GeneralizationCell> cells;
  cells.reserve(specs.size());
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const ModelSpec& spec = specs[s];
    const auto [x_test, y_test] = to_matrix(test, spec.feature_names, spec.target);

    GeneralizationCell cell;
    cell.technique = spec.technique;
    cell.target = spec.target;
    // Both arms draw the same sub-stream: identical training sets must give
    // identical models, randomized techniques included.
    for (const bool full_arm : {false, true}) {
      const Dataset& train = full_arm ? full_train : partial_train;
      const auto [x_train, y_train] = to_matrix(train, spec.feature_names, spec.target);
      const TrainedModel model =
          train_model(spec, x_train, y_train, SplitMix64::derive(seed, s), n_threads);
      const std::vector<double> yhat = predict_rows(model, x_test);
      (full_arm ? cell.full : cell.partial) = compute_metrics(y_test, yhat);
    }
    cells.push_back(cell);
  }
  return cells;
}

}  // namespace detail

/*!
 * \brief The generalization experiment: B is holdout-split 70/30; the
 * partial arm trains on all of A, the full arm on A + B-train; both arms are
 * evaluated on the same B-test rows. A and B must not share file sizes.
 */
inline GeneralizationReport full_vs_partial(const Dataset& dataset_a,
                                            const Dataset& dataset_b,
                                            const std::vector<ModelSpec>& specs,
                                            std::uint64_t seed, int n_threads = 1) {
  const std::set<std::int64_t> a_sizes = distinct_file_sizes(dataset_a);
  const std::set<std::int64_t> b_sizes = distinct_file_sizes(dataset_b);
  for (const std::int64_t size : b_sizes) {
    if (a_sizes.count(size) != 0) {
      throw DomainError("full_vs_partial: datasets A and B share file size " +
                        std::to_string(size));
    }
  }
  auto [b_train, b_test] = split_holdout(dataset_b, 0.7, seed);
  const Dataset full_train = concat(dataset_a, b_train);

  GeneralizationReport report;
  report.seed = seed;
  report.a_sizes.assign(a_sizes.begin(), a_sizes.end());
  report.b_sizes.assign(b_sizes.begin(), b_sizes.end());
  report.cells = detail::evaluate_arm_pair(dataset_a, full_train, b_test, specs,
                                           seed, n_threads);
  return report;
}

/*! \brief Model-adequacy verdict of the training loop. */
enum class Fitness : int { kAdequate = 0, kRetrain = 1 };

inline const char* to_string(Fitness f) {
  return f == Fitness::kAdequate ? "adequate" : "retrain";
}

inline Fitness fitness_from_string(std::string_view token) {
  if (token == "adequate") return Fitness::kAdequate;
  if (token == "retrain") return Fitness::kRetrain;
  throw ParseError("unknown fitness status '" + std::string(token) + "'");
}

/*! \brief Adequate iff r2 >= threshold (inclusive). */
inline Fitness fitness_gate(double r2, double threshold) {
  return r2 >= threshold ? Fitness::kAdequate : Fitness::kRetrain;
}

/*! \brief One measured-versus-predicted record with an error band. */
struct TraceRecord {
  std::size_t index = 0;
  double bandwidth_mhz = 0.0;
  double measured = 0.0;
  double predicted = 0.0;
  double band_low = 0.0;
  double band_high = 0.0;
};

/*!
 * \brief Per-sample measured and predicted target values, with a constant
 * +-rmse_band interval around the prediction. Dataset order is preserved
 * and the bandwidth label is carried so consumers can group samples per
 * bandwidth.
 */
inline std::vector<TraceRecord> prediction_trace(const TrainedModel& model,
                                                 const Dataset& dataset,
                                                 double rmse_band) {
  if (dataset.empty()) throw DomainError("prediction_trace: dataset is empty");
  const auto [x, y] = to_matrix(dataset, model.feature_names, model.target);
  std::vector<TraceRecord> records;
  records.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    TraceRecord rec;
    rec.index = i;
    rec.bandwidth_mhz = dataset[i].features.bandwidth_mhz;
    rec.measured = y[i];
    rec.predicted = predict(model, x.row(i));
    rec.band_low = rec.predicted - rmse_band;
    rec.band_high = rec.predicted + rmse_band;
    records.push_back(rec);
  }
  return records;
}

}  // namespace kqipred

#endif  // KQIPRED_EVALUATION_HPP_
