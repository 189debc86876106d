/*!
 * Copyright (c) 2026 by Contributors
 * \file test_dataset.cpp
 */
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "kqipred/dataset.hpp"
#include "kqipred/rng.hpp"

using namespace kqipred;

namespace {

MeasurementSample make_sample(double rsrp, double bw, LoadLevel load,
                              std::int64_t size, double iftd, double fthr,
                              double tftd) {
  MeasurementSample s;
  s.features.rsrp_dbm = rsrp;
  s.features.rsrq_db = -10.8;
  s.features.rssi_dbm = rsrp + 27.0;
  s.features.bandwidth_mhz = bw;
  s.features.load_level = load;
  s.features.file_size_bytes = size;
  s.kqis.iftd_s = iftd;
  s.kqis.fthr_mbps = fthr;
  s.kqis.tftd_s = tftd;
  return s;
}

Dataset random_dataset(std::uint64_t seed, std::size_t n) {
  SplitMix64 rng(seed);
  Dataset d("random");
  for (std::size_t i = 0; i < n; ++i) {
    const double rsrp = rng.uniform(-110.0, -75.0);
    const double iftd = rng.uniform(0.1, 0.2);
    const std::int64_t sizes[] = {1000, 10000, 100000, 500000};
    d.append(make_sample(rsrp, 5.0 + 5.0 * static_cast<double>(rng.below(4)),
                         static_cast<LoadLevel>(rng.below(3)),
                         sizes[rng.below(4)], iftd,
                         rng.uniform(0.01, 80.0), iftd + rng.uniform(0.01, 300.0)));
  }
  return d;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = (std::filesystem::temp_directory_path() / name).string();
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("header-only file loads as an empty dataset") {
  TempFile f("kqipred_empty.csv");
  std::ofstream(f.path) << kCsvHeader << "\n";
  const Dataset d = load_csv(f.path);
  CHECK(d.size() == 0);
}

TEST_CASE("missing header is a schema error") {
  TempFile f("kqipred_noheader.csv");
  std::ofstream(f.path) << "a,b,c\n";
  CHECK_THROWS_AS(load_csv(f.path), SchemaError);
}

TEST_CASE("negative file size is a validation error citing row 1") {
  TempFile f("kqipred_badrow.csv");
  std::ofstream(f.path) << kCsvHeader << "\n"
                        << "-90,-10.8,-63,10,none,-5,0.12,1.5,2.0\n";
  try {
    load_csv(f.path);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    CHECK(std::string(e.what()).find("file_size_bytes") != std::string::npos);
  }
}

TEST_CASE("unknown load level token names the row") {
  TempFile f("kqipred_badload.csv");
  std::ofstream(f.path) << kCsvHeader << "\n"
                        << "-90,-10.8,-63,10,none,1000,0.12,1.5,2.0\n"
                        << "-90,-10.8,-63,10,huge,1000,0.12,1.5,2.0\n";
  try {
    load_csv(f.path);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    CHECK(std::string(e.what()).find("huge") != std::string::npos);
  }
}

TEST_CASE("non-numeric field is rejected with its row number") {
  TempFile f("kqipred_nonnum.csv");
  std::ofstream(f.path) << kCsvHeader << "\n"
                        << "oops,-10.8,-63,10,none,1000,0.12,1.5,2.0\n";
  CHECK_THROWS_AS(load_csv(f.path), ValidationError);
}

TEST_CASE("save then load round-trips field by field") {
  const Dataset d = random_dataset(99, 500);
  TempFile f("kqipred_roundtrip.csv");
  save_csv(d, f.path);
  const Dataset back = load_csv(f.path);
  REQUIRE(back.size() == d.size());
  CHECK(back == d);
}

TEST_CASE("empty dataset saves as exactly the header line") {
  const Dataset d("empty");
  CHECK(to_csv(d) == std::string(kCsvHeader) + "\n");
}

TEST_CASE("save, load, save produces byte-identical files") {
  const Dataset d = random_dataset(7, 200);
  TempFile f1("kqipred_double1.csv");
  TempFile f2("kqipred_double2.csv");
  save_csv(d, f1.path);
  save_csv(load_csv(f1.path), f2.path);
  std::ifstream a(f1.path, std::ios::binary), b(f2.path, std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(a)), {});
  const std::string sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);
  CHECK(!sa.empty());
}

TEST_CASE("holdout split: n=10, fraction=0.7 gives 7/3") {
  const Dataset d = random_dataset(1, 10);
  const auto [train, test] = split_holdout(d, 0.7, 11);
  CHECK(train.size() == 7);
  CHECK(test.size() == 3);
}

TEST_CASE("holdout split: fraction=1.0 keeps everything in train") {
  const Dataset d = random_dataset(2, 9);
  const auto [train, test] = split_holdout(d, 1.0, 11);
  CHECK(train.size() == 9);
  CHECK(test.size() == 0);
}

TEST_CASE("holdout split is deterministic and multiset-preserving") {
  const Dataset d = random_dataset(3, 40);
  const auto [train1, test1] = split_holdout(d, 0.7, 5);
  const auto [train2, test2] = split_holdout(d, 0.7, 5);
  CHECK(train1 == train2);
  CHECK(test1 == test2);

  auto key = [](const MeasurementSample& s) {
    return std::make_pair(s.features.rsrp_dbm, s.kqis.tftd_s);
  };
  std::multiset<std::pair<double, double>> original, recombined;
  for (const auto& s : d.samples()) original.insert(key(s));
  for (const auto& s : train1.samples()) recombined.insert(key(s));
  for (const auto& s : test1.samples()) recombined.insert(key(s));
  CHECK(original == recombined);
}

TEST_CASE("holdout split rejects an empty dataset") {
  const Dataset d("empty");
  CHECK_THROWS_AS(split_holdout(d, 0.7, 1), DomainError);
}

TEST_CASE("holdout split rejects fractions outside (0, 1]") {
  const Dataset d = random_dataset(21, 5);
  CHECK_THROWS_AS(split_holdout(d, 0.0, 1), DomainError);
  CHECK_THROWS_AS(split_holdout(d, -0.2, 1), DomainError);
  CHECK_THROWS_AS(split_holdout(d, 1.2, 1), DomainError);
}

TEST_CASE("kfold: n=10, k=5 gives five folds of two") {
  const Dataset d = random_dataset(4, 10);
  const FoldAssignment folds = kfold_partition(d, 5, 3);
  std::map<int, int> sizes;
  for (const int f : folds.assignment) sizes[f]++;
  REQUIRE(sizes.size() == 5);
  for (const auto& [fold, count] : sizes) CHECK(count == 2);
}

TEST_CASE("kfold: n=7, k=5 sizes are {2,2,1,1,1}") {
  const Dataset d = random_dataset(5, 7);
  const FoldAssignment folds = kfold_partition(d, 5, 3);
  std::multiset<int> sizes;
  std::map<int, int> count;
  for (const int f : folds.assignment) count[f]++;
  for (const auto& [fold, c] : count) sizes.insert(c);
  CHECK(sizes == std::multiset<int>{1, 1, 1, 2, 2});
}

TEST_CASE("kfold: n=9000, k=5 gives folds of 1800") {
  const Dataset d = random_dataset(6, 9000);
  const FoldAssignment folds = kfold_partition(d, 5, 3);
  std::map<int, int> count;
  for (const int f : folds.assignment) count[f]++;
  for (const auto& [fold, c] : count) CHECK(c == 1800);
}

TEST_CASE("kfold rejects k out of range") {
  const Dataset d = random_dataset(7, 4);
  CHECK_THROWS_AS(kfold_partition(d, 1, 3), DomainError);
  CHECK_THROWS_AS(kfold_partition(d, 5, 3), DomainError);
}

TEST_CASE("every sample lands in exactly one fold") {
  const Dataset d = random_dataset(8, 103);
  const FoldAssignment folds = kfold_partition(d, 7, 12);
  REQUIRE(folds.assignment.size() == d.size());
  for (const int f : folds.assignment) {
    CHECK(f >= 0);
    CHECK(f < 7);
  }
}

TEST_CASE("filter_by_file_size keeps matching rows in order") {
  const Dataset d = random_dataset(9, 60);
  const Dataset small = filter_by_file_size(d, {1000, 10000});
  std::size_t seen = 0;
  for (const auto& s : d.samples()) {
    if (s.features.file_size_bytes == 1000 || s.features.file_size_bytes == 10000) {
      CHECK(small[seen] == s);
      ++seen;
    }
  }
  CHECK(seen == small.size());
}

TEST_CASE("filter with empty size set is empty") {
  const Dataset d = random_dataset(10, 20);
  CHECK(filter_by_file_size(d, {}).empty());
}

TEST_CASE("A/B size filters partition a mixed dataset exactly") {
  // The four sizes used by random_dataset all fall in one list or the other.
  const Dataset d = random_dataset(11, 200);
  const Dataset a = filter_by_file_size(d, {1000, 100000, 1000000, 10000000, 100000000});
  const Dataset b = filter_by_file_size(d, {10000, 500000, 5000000, 20000000});
  CHECK(a.size() + b.size() == d.size());
}

TEST_CASE("to_matrix: single feature, single sample") {
  Dataset d("one");
  d.append(make_sample(-90.0, 15.0, LoadLevel::kNone, 1000, 0.12, 2.0, 3.0));
  const auto [x, y] = to_matrix(d, {"bandwidth_mhz"}, KqiName::kTftd);
  REQUIRE(x.rows == 1);
  REQUIRE(x.cols == 1);
  CHECK(x.at(0, 0) == 15.0);
  CHECK(y[0] == 3.0);
}

TEST_CASE("to_matrix encodes load levels ordinally") {
  Dataset d("loads");
  d.append(make_sample(-90.0, 10.0, LoadLevel::kNone, 1000, 0.12, 2.0, 3.0));
  d.append(make_sample(-90.0, 10.0, LoadLevel::kLow, 1000, 0.12, 2.0, 3.0));
  d.append(make_sample(-90.0, 10.0, LoadLevel::kMedium, 1000, 0.12, 2.0, 3.0));
  const auto [x, y] = to_matrix(d, {"load_level"}, KqiName::kIftd);
  CHECK(x.at(0, 0) == 0.0);
  CHECK(x.at(1, 0) == 1.0);
  CHECK(x.at(2, 0) == 2.0);
}

TEST_CASE("to_matrix full six-feature extraction matches fields by hand") {
  Dataset d("three");
  d.append(make_sample(-80.0, 5.0, LoadLevel::kLow, 2000, 0.11, 1.0, 2.5));
  d.append(make_sample(-95.0, 10.0, LoadLevel::kNone, 4000, 0.12, 2.0, 3.5));
  d.append(make_sample(-102.0, 20.0, LoadLevel::kMedium, 8000, 0.13, 3.0, 4.5));
  const auto [x, y] = to_matrix(d, all_feature_names(), KqiName::kFthr);
  REQUIRE(x.rows == 3);
  REQUIRE(x.cols == 6);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& f = d[i].features;
    CHECK(x.at(i, 0) == f.rsrp_dbm);
    CHECK(x.at(i, 1) == f.rsrq_db);
    CHECK(x.at(i, 2) == f.rssi_dbm);
    CHECK(x.at(i, 3) == f.bandwidth_mhz);
    CHECK(x.at(i, 4) == static_cast<double>(static_cast<int>(f.load_level)));
    CHECK(x.at(i, 5) == static_cast<double>(f.file_size_bytes));
    CHECK(y[i] == d[i].kqis.fthr_mbps);
  }
}

TEST_CASE("to_matrix rejects unknown names") {
  const Dataset d = random_dataset(12, 3);
  CHECK_THROWS_AS(to_matrix(d, {"snr_db"}, KqiName::kTftd), DomainError);
  CHECK_THROWS_AS(kqi_from_string("latency"), DomainError);
}

TEST_CASE("mutated CSV input always fails with a typed error, never crashes") {
  const Dataset d = random_dataset(31, 30);
  const std::string good = to_csv(d);
  SplitMix64 rng(32);
  int rejected = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::string text = good;
    const std::size_t pos = rng.below(text.size());
    text[pos] = static_cast<char>(rng.below(256));
    try {
      const Dataset back = from_csv(text, "mutated");
      (void)back;
    } catch (const Error&) {
      ++rejected;
    }
  }
  CHECK(rejected > 0);  // most single-byte edits must be caught
}

TEST_CASE("dataset append validates invariants") {
  Dataset d("checks");
  MeasurementSample bad = make_sample(-90.0, 10.0, LoadLevel::kNone, 1000, 0.12, 2.0, 3.0);
  bad.kqis.tftd_s = 0.05;  // below iftd
  CHECK_THROWS_AS(d.append(bad), ValidationError);
  bad = make_sample(-90.0, 10.0, LoadLevel::kNone, 1000, 0.12, 2.0, 3.0);
  bad.features.rsrq_db = 1.0;
  CHECK_THROWS_AS(d.append(bad), ValidationError);
  bad = make_sample(-90.0, 10.0, LoadLevel::kNone, 1000, 0.12, 2.0, 3.0);
  bad.features.rssi_dbm = -100.0;  // below rsrp
  CHECK_THROWS_AS(d.append(bad), ValidationError);
}
