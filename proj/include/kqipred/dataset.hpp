/*!
 * Copyright (c) 2026 by Contributors
 * \file dataset.hpp
 * \brief Measurement-sample domain types, CSV round-tripping and partitioning.
 *
 * A measurement sample pairs the low-layer features of one file-transfer
 * experiment (radio metrics, cell configuration, file size) with the three
 * service-level indicators observed for it: initial file transfer delay
 * (IFTD, s), average throughput (FTHR, Mbps) and total transfer delay
 * (TFTD, s).
 *
 * CSV schema (exact header, comma separated, UTF-8, '.' decimal separator):
 *   rsrp_dbm,rsrq_db,rssi_dbm,bandwidth_mhz,load_level,file_size_bytes,iftd_s,fthr_mbps,tftd_s
 * load_level is one of none/low/medium; file_size_bytes is an integer; all
 * other fields are decimals rendered with shortest round-trip precision.
 */
#ifndef KQIPRED_DATASET_HPP_
#define KQIPRED_DATASET_HPP_

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kqipred/error.hpp"
#include "kqipred/matrix.hpp"
#include "kqipred/rng.hpp"

namespace kqipred {

/*! \brief Cell traffic-demand level, ordinal when used as a model feature. */
enum class LoadLevel : int { kNone = 0, kLow = 1, kMedium = 2 };

inline const char* to_string(LoadLevel level) {
  switch (level) {
    case LoadLevel::kNone: return "none";
    case LoadLevel::kLow: return "low";
    case LoadLevel::kMedium: return "medium";
  }
  return "?";
}

inline LoadLevel load_level_from_string(std::string_view token) {
  if (token == "none") return LoadLevel::kNone;
  if (token == "low") return LoadLevel::kLow;
  if (token == "medium") return LoadLevel::kMedium;
  throw ValidationError("unknown load_level token '" + std::string(token) + "'");
}

/*! \brief The three file-transfer KQIs, by canonical column name. */
enum class KqiName : int { kIftd = 0, kFthr = 1, kTftd = 2 };

inline constexpr std::array<KqiName, 3> kAllKqis = {
    KqiName::kIftd, KqiName::kFthr, KqiName::kTftd};

inline const char* to_string(KqiName name) {
  switch (name) {
    case KqiName::kIftd: return "iftd_s";
    case KqiName::kFthr: return "fthr_mbps";
    case KqiName::kTftd: return "tftd_s";
  }
  return "?";
}

inline KqiName kqi_from_string(std::string_view token) {
  for (KqiName k : kAllKqis) {
    if (token == to_string(k)) return k;
  }
  throw DomainError("unknown KQI name '" + std::string(token) + "'");
}

/*! \brief Canonical feature column order. */
inline const std::vector<std::string>& all_feature_names() {
  static const std::vector<std::string> names = {
      "rsrp_dbm", "rsrq_db",    "rssi_dbm",
      "bandwidth_mhz", "load_level", "file_size_bytes"};
  return names;
}

/*! \brief One row of independent variables. */
struct LowLayerFeatures {
  double rsrp_dbm = 0.0;
  double rsrq_db = 0.0;
  double rssi_dbm = 0.0;
  double bandwidth_mhz = 0.0;
  LoadLevel load_level = LoadLevel::kNone;
  std::int64_t file_size_bytes = 0;

  bool operator==(const LowLayerFeatures&) const = default;
};

/*! \brief The three dependent KQIs of one experiment. */
struct KqiVector {
  double iftd_s = 0.0;
  double fthr_mbps = 0.0;
  double tftd_s = 0.0;

  double get(KqiName name) const {
    switch (name) {
      case KqiName::kIftd: return iftd_s;
      case KqiName::kFthr: return fthr_mbps;
      case KqiName::kTftd: return tftd_s;
    }
    return 0.0;
  }

  bool operator==(const KqiVector&) const = default;
};

/*! \brief Throws ValidationError if a feature invariant is violated. */
inline void validate_features(const LowLayerFeatures& f, const std::string& where) {
  if (!(f.file_size_bytes > 0)) {
    throw ValidationError(where + ": file_size_bytes must be positive, got " +
                          std::to_string(f.file_size_bytes));
  }
  if (!(f.bandwidth_mhz > 0.0)) {
    throw ValidationError(where + ": bandwidth_mhz must be positive");
  }
  if (!(f.rsrq_db < 0.0)) {
    throw ValidationError(where + ": rsrq_db must be negative");
  }
  if (!(f.rssi_dbm >= f.rsrp_dbm)) {
    throw ValidationError(where + ": rssi_dbm must be >= rsrp_dbm");
  }
}

/*! \brief Throws ValidationError if a KQI invariant is violated. */
inline void validate_kqis(const KqiVector& k, const std::string& where) {
  if (!(k.iftd_s >= 0.0)) {
    throw ValidationError(where + ": iftd_s must be nonnegative");
  }
  if (!(k.fthr_mbps > 0.0)) {
    throw ValidationError(where + ": fthr_mbps must be positive");
  }
  if (!(k.tftd_s > 0.0)) {
    throw ValidationError(where + ": tftd_s must be positive");
  }
  if (!(k.tftd_s >= k.iftd_s)) {
    throw ValidationError(where + ": tftd_s must be >= iftd_s");
  }
}

/*! \brief One validated measurement: features plus observed KQIs. */
struct MeasurementSample {
  LowLayerFeatures features;
  KqiVector kqis;

  bool operator==(const MeasurementSample&) const = default;
};

/*!
 * \brief Ordered, immutable-after-construction collection of samples.
 *
 * Order is significant and preserved by CSV round trips. Equality compares
 * samples only; the provenance label is descriptive metadata.
 */
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::string provenance) : provenance_(std::move(provenance)) {}

  void append(const MeasurementSample& sample) {
    const std::string where = "sample " + std::to_string(samples_.size());
    validate_features(sample.features, where);
    validate_kqis(sample.kqis, where);
    samples_.push_back(sample);
  }

  /*! \brief Append without re-validating; caller guarantees validity. */
  void append_unchecked(MeasurementSample sample) {
    samples_.push_back(std::move(sample));
  }

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const MeasurementSample& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<MeasurementSample>& samples() const { return samples_; }

  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

  bool operator==(const Dataset& other) const { return samples_ == other.samples_; }

 private:
  std::vector<MeasurementSample> samples_;
  std::string provenance_;
};

/*! \brief Fold labels aligned with dataset order. */
struct FoldAssignment {
  int k = 0;
  std::vector<int> assignment;  //!< fold index in [0, k) per sample
  std::uint64_t seed = 0;
};

inline constexpr std::string_view kCsvHeader =
    "rsrp_dbm,rsrq_db,rssi_dbm,bandwidth_mhz,load_level,file_size_bytes,"
    "iftd_s,fthr_mbps,tftd_s";

namespace detail {

/*! \brief Shortest decimal rendering that parses back to the same double. */
inline void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

inline double parse_double_field(std::string_view field, const std::string& where) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end || field.empty()) {
    throw ValidationError(where + ": non-numeric field '" + std::string(field) + "'");
  }
  return v;
}

inline std::int64_t parse_int_field(std::string_view field, const std::string& where) {
  std::int64_t v = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end || field.empty()) {
    throw ValidationError(where + ": non-integer field '" + std::string(field) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t comma = line.find(',', begin);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(begin));
      return fields;
    }
    fields.push_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
}

}  // namespace detail

/*! \brief Serialize one sample as a CSV row (no newline). */
inline void append_csv_row(std::string& out, const MeasurementSample& s) {
  detail::append_double(out, s.features.rsrp_dbm);
  out.push_back(',');
  detail::append_double(out, s.features.rsrq_db);
  out.push_back(',');
  detail::append_double(out, s.features.rssi_dbm);
  out.push_back(',');
  detail::append_double(out, s.features.bandwidth_mhz);
  out.push_back(',');
  out.append(to_string(s.features.load_level));
  out.push_back(',');
  out.append(std::to_string(s.features.file_size_bytes));
  out.push_back(',');
  detail::append_double(out, s.kqis.iftd_s);
  out.push_back(',');
  detail::append_double(out, s.kqis.fthr_mbps);
  out.push_back(',');
  detail::append_double(out, s.kqis.tftd_s);
}

/*! \brief Render a dataset as a CSV document (header + one row per sample). */
inline std::string to_csv(const Dataset& dataset) {
  std::string out;
  out.reserve(64 * (dataset.size() + 1));
  out.append(kCsvHeader);
  out.push_back('\n');
  for (const MeasurementSample& s : dataset.samples()) {
    append_csv_row(out, s);
    out.push_back('\n');
  }
  return out;
}

/*! \brief Parse a CSV document; row numbers in errors are 1-based data rows. */
inline Dataset from_csv(std::string_view text, const std::string& provenance) {
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) -> bool {
    if (pos >= text.size()) return false;
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      line = text.substr(pos);
      pos = text.size();
    } else {
      line = text.substr(pos, nl - pos);
      pos = nl + 1;
    }
    return true;
  };

  std::string_view header;
  if (!next_line(header) || header != kCsvHeader) {
    throw SchemaError("missing or incorrect CSV header; expected '" +
                      std::string(kCsvHeader) + "'");
  }

  Dataset dataset(provenance);
  std::string_view line;
  std::size_t row = 0;
  while (next_line(line)) {
    if (line.empty() && pos >= text.size()) break;  // trailing newline
    ++row;
    const std::string where = "row " + std::to_string(row);
    const auto fields = detail::split_fields(line);
    if (fields.size() != 9) {
      throw ValidationError(where + ": expected 9 fields, got " +
                            std::to_string(fields.size()));
    }
    MeasurementSample s;
    s.features.rsrp_dbm = detail::parse_double_field(fields[0], where);
    s.features.rsrq_db = detail::parse_double_field(fields[1], where);
    s.features.rssi_dbm = detail::parse_double_field(fields[2], where);
    s.features.bandwidth_mhz = detail::parse_double_field(fields[3], where);
    try {
      s.features.load_level = load_level_from_string(fields[4]);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    s.features.file_size_bytes = detail::parse_int_field(fields[5], where);
    s.kqis.iftd_s = detail::parse_double_field(fields[6], where);
    s.kqis.fthr_mbps = detail::parse_double_field(fields[7], where);
    s.kqis.tftd_s = detail::parse_double_field(fields[8], where);
    validate_features(s.features, where);
    validate_kqis(s.kqis, where);
    dataset.append_unchecked(std::move(s));
  }
  return dataset;
}

/*! \brief Load a dataset from a CSV file. */
inline Dataset load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_csv(buffer.str(), path);
}

/*! \brief Write a dataset to a CSV file. */
inline void save_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  const std::string text = to_csv(dataset);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write to '" + path + "' failed");
}

/*!
 * \brief Seeded 70/30-style holdout split.
 *
 * Indices are shuffled with SplitMix64(seed); the first ceil(n * fraction)
 * shuffled samples form the training set. Union of the two parts equals the
 * input as a multiset.
 */
inline std::pair<Dataset, Dataset> split_holdout(const Dataset& dataset,
                                                 double train_fraction,
                                                 std::uint64_t seed) {
  if (dataset.empty()) throw DomainError("split_holdout: dataset is empty");
  if (!(train_fraction > 0.0) || train_fraction > 1.0) {
    throw DomainError("split_holdout: train_fraction must be in (0, 1]");
  }
  const std::size_t n = dataset.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  SplitMix64 rng(seed);
  rng.shuffle(order);

  const auto n_train = static_cast<std::size_t>(
      std::min<double>(std::ceil(train_fraction * static_cast<double>(n)),
                       static_cast<double>(n)));
  Dataset train(dataset.provenance() + "[train]");
  Dataset test(dataset.provenance() + "[test]");
  for (std::size_t i = 0; i < n; ++i) {
    (i < n_train ? train : test).append_unchecked(dataset[order[i]]);
  }
  return {std::move(train), std::move(test)};
}

/*!
 * \brief Seeded k-fold partition: shuffle, then round-robin fold labels.
 *
 * Fold sizes differ by at most one; every sample lands in exactly one fold.
 */
inline FoldAssignment kfold_partition(const Dataset& dataset, int k,
                                      std::uint64_t seed) {
  const std::size_t n = dataset.size();
  if (k < 2) throw DomainError("kfold_partition: k must be >= 2");
  if (static_cast<std::size_t>(k) > n) {
    throw DomainError("kfold_partition: k (" + std::to_string(k) +
                      ") exceeds dataset size (" + std::to_string(n) + ")");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  SplitMix64 rng(seed);
  rng.shuffle(order);

  FoldAssignment folds;
  folds.k = k;
  folds.seed = seed;
  folds.assignment.assign(n, 0);
  for (std::size_t pos = 0; pos < n; ++pos) {
    folds.assignment[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(k));
  }
  return folds;
}

/*! \brief Keep samples whose file size is in the given set, order preserved. */
inline Dataset filter_by_file_size(const Dataset& dataset,
                                   const std::set<std::int64_t>& sizes) {
  Dataset out(dataset.provenance() + "[filtered]");
  for (const MeasurementSample& s : dataset.samples()) {
    if (sizes.count(s.features.file_size_bytes) != 0) out.append_unchecked(s);
  }
  return out;
}

/*! \brief Numeric value of one feature column (load encoded ordinally 0/1/2). */
inline double feature_value(const LowLayerFeatures& f, std::string_view name) {
  if (name == "rsrp_dbm") return f.rsrp_dbm;
  if (name == "rsrq_db") return f.rsrq_db;
  if (name == "rssi_dbm") return f.rssi_dbm;
  if (name == "bandwidth_mhz") return f.bandwidth_mhz;
  if (name == "load_level") return static_cast<double>(static_cast<int>(f.load_level));
  if (name == "file_size_bytes") return static_cast<double>(f.file_size_bytes);
  throw DomainError("unknown feature name '" + std::string(name) + "'");
}

/*! \brief Extract the design matrix and target vector for one KQI. */
inline std::pair<Matrix, std::vector<double>> to_matrix(
    const Dataset& dataset, const std::vector<std::string>& feature_names,
    KqiName target) {
  for (const std::string& name : feature_names) {
    if (std::find(all_feature_names().begin(), all_feature_names().end(), name) ==
        all_feature_names().end()) {
      throw DomainError("unknown feature name '" + name + "'");
    }
  }
  Matrix x(dataset.size(), feature_names.size());
  std::vector<double> y(dataset.size(), 0.0);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const MeasurementSample& s = dataset[i];
    for (std::size_t j = 0; j < feature_names.size(); ++j) {
      x.at(i, j) = feature_value(s.features, feature_names[j]);
    }
    y[i] = s.kqis.get(target);
  }
  return {std::move(x), std::move(y)};
}

/*! \brief Feature row in the given column order. */
inline std::vector<double> feature_row(const LowLayerFeatures& f,
                                       const std::vector<std::string>& names) {
  std::vector<double> row(names.size(), 0.0);
  for (std::size_t j = 0; j < names.size(); ++j) row[j] = feature_value(f, names[j]);
  return row;
}

/*! \brief Concatenate two datasets (left then right). */
inline Dataset concat(const Dataset& a, const Dataset& b) {
  Dataset out(a.provenance() + "+" + b.provenance());
  for (const auto& s : a.samples()) out.append_unchecked(s);
  for (const auto& s : b.samples()) out.append_unchecked(s);
  return out;
}

/*! \brief Distinct file sizes present, ascending. */
inline std::set<std::int64_t> distinct_file_sizes(const Dataset& dataset) {
  std::set<std::int64_t> sizes;
  for (const auto& s : dataset.samples()) sizes.insert(s.features.file_size_bytes);
  return sizes;
}

}  // namespace kqipred

#endif  // KQIPRED_DATASET_HPP_
