/*!
 * Copyright (c) 2026 by Contributors
 * \file simulator.hpp
 * \brief Synthetic measurement-campaign generator.
 *
 * Stands in for a physical LTE testbed: draws plausible radio conditions and
 * computes ground-truth KQIs from a small channel model, over a grid of file
 * sizes, cell bandwidths and demand levels. The model is shaped so that
 *   - file size and bandwidth dominate the total transfer delay,
 *   - RSRP materially affects throughput via a logistic spectral-efficiency
 *     curve,
 *   - the initial transfer delay is a server-side constant plus noise,
 *     independent of the radio.
 *
 * Generation formulas (dB quantities unless noted):
 *   rssi  = rsrp + 10*log10(12 * N_PRB) + 3 * load_fraction
 *   rsrq  = 10*log10(N_PRB) + rsrp - rssi + N(0, rsrq_sigma)
 *   eta   = eff_max / (1 + exp(-(rsrp - eff_midpoint) / eff_slope))   [bps/Hz]
 *   rate  = eta * bandwidth_hz * overhead * (1 - load_fraction) * LogN(0, rate_sigma)
 *   iftd  = max(1e-6, server_delay + N(0, iftd_sigma))
 *   t_tx  = size_bits / rate + ramp_time * (1 - exp(-size_bytes / ramp_scale))
 *   tftd  = iftd + t_tx
 *   fthr  = size_bits / 1e6 / (tftd - iftd)                           [Mbps]
 *
 * Per-sample randomness comes from a sub-stream derived from
 * (seed, combination index, replicate index); see rng.hpp. Draw order within
 * a sample is fixed: rsrp uniform, rsrq noise, rate noise, iftd noise.
 */
#ifndef KQIPRED_SIMULATOR_HPP_
#define KQIPRED_SIMULATOR_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kqipred/dataset.hpp"
#include "kqipred/error.hpp"
#include "kqipred/parallel.hpp"
#include "kqipred/rng.hpp"

namespace kqipred {

/*! \brief Experiment grid: every combination of the three axes is visited. */
struct CampaignGrid {
  std::vector<std::int64_t> file_sizes_bytes;
  std::vector<double> bandwidths_mhz;
  std::vector<LoadLevel> load_levels;

  std::size_t combinations() const {
    return file_sizes_bytes.size() * bandwidths_mhz.size() * load_levels.size();
  }
};

/*! \brief Noise magnitudes; zero disables the corresponding term. */
struct NoiseParams {
  double rate_lognormal_sigma = 0.1;
  double rsrq_sigma_db = 0.5;
  double iftd_sigma_s = 0.005;
};

/*! \brief Channel-model constants. All overridable via the CLI config file. */
struct GeneratorParams {
  std::vector<std::pair<double, int>> prb_per_bw = {
      {5.0, 25}, {10.0, 50}, {15.0, 75}, {20.0, 100}};
  std::vector<double> load_fraction = {0.0, 0.2, 0.5};  //!< none/low/medium
  double rsrp_min_dbm = -110.0;
  double rsrp_max_dbm = -75.0;
  double eff_max_bps_hz = 5.0;
  double eff_midpoint_dbm = -99.0;
  double eff_slope_db = 10.0;
  double overhead_factor = 0.75;
  double ramp_time_s = 0.4;
  double ramp_scale_bytes = 50000.0;
  double server_delay_s = 0.12;
  NoiseParams noise;

  int prb_count(double bandwidth_mhz) const {
    for (const auto& [bw, prb] : prb_per_bw) {
      if (bw == bandwidth_mhz) return prb;
    }
    throw DomainError("no PRB mapping for bandwidth " +
                      std::to_string(bandwidth_mhz) + " MHz");
  }

  double load_frac(LoadLevel level) const {
    return load_fraction[static_cast<std::size_t>(level)];
  }

  /*! \brief Copy with all noise terms disabled. */
  GeneratorParams without_noise() const {
    GeneratorParams p = *this;
    p.noise = NoiseParams{0.0, 0.0, 0.0};
    return p;
  }
};

/*! \brief Nine file sizes x four bandwidths x three load levels. */
inline CampaignGrid default_grid() {
  CampaignGrid grid;
  grid.file_sizes_bytes = {1000,     10000,    100000,   500000,   1000000,
                           5000000,  10000000, 20000000, 100000000};
  grid.bandwidths_mhz = {5.0, 10.0, 15.0, 20.0};
  grid.load_levels = {LoadLevel::kNone, LoadLevel::kLow, LoadLevel::kMedium};
  return grid;
}

struct RadioSample {
  double rsrp_dbm = 0.0;
  double rsrq_db = 0.0;
  double rssi_dbm = 0.0;
};

/*! \brief Draw RSRP/RSRQ/RSSI for one experiment. */
inline RadioSample sample_radio(double bandwidth_mhz, LoadLevel load,
                                const GeneratorParams& params, SplitMix64& rng) {
  const int prb = params.prb_count(bandwidth_mhz);
  const double lf = params.load_frac(load);
  RadioSample radio;
  radio.rsrp_dbm = rng.uniform(params.rsrp_min_dbm, params.rsrp_max_dbm);
  radio.rssi_dbm =
      radio.rsrp_dbm + 10.0 * std::log10(12.0 * prb) + 3.0 * lf;
  radio.rsrq_db = 10.0 * std::log10(static_cast<double>(prb)) + radio.rsrp_dbm -
                  radio.rssi_dbm + rng.gaussian(params.noise.rsrq_sigma_db);
  radio.rsrq_db = std::min(radio.rsrq_db, -1e-6);  // RSRQ is negative in LTE
  return radio;
}

/*! \brief Ground-truth KQIs for one feature row. */
inline KqiVector ground_truth_kqi(const LowLayerFeatures& features,
                                  const GeneratorParams& params,
                                  SplitMix64& rng) {
  const double lf = params.load_frac(features.load_level);
  const double eta =
      params.eff_max_bps_hz /
      (1.0 + std::exp(-(features.rsrp_dbm - params.eff_midpoint_dbm) /
                      params.eff_slope_db));
  const double rate_bps = eta * features.bandwidth_mhz * 1e6 *
                          params.overhead_factor * (1.0 - lf) *
                          rng.lognormal(params.noise.rate_lognormal_sigma);
  const double iftd =
      std::max(1e-6, params.server_delay_s + rng.gaussian(params.noise.iftd_sigma_s));
  const double size_bytes = static_cast<double>(features.file_size_bytes);
  const double size_bits = size_bytes * 8.0;
  const double transfer_time =
      size_bits / rate_bps +
      params.ramp_time_s * (1.0 - std::exp(-size_bytes / params.ramp_scale_bytes));

  KqiVector kqis;
  kqis.iftd_s = iftd;
  kqis.tftd_s = iftd + transfer_time;
  // Derive throughput from the rounded delay difference so that
  // fthr * (tftd - iftd) reproduces size_bits / 1e6 to the last ulp.
  kqis.fthr_mbps = size_bits / 1e6 / (kqis.tftd_s - kqis.iftd_s);
  return kqis;
}

/*!
 * \brief Generate a full campaign over the grid.
 *
 * total_samples are spread across grid combinations as evenly as possible:
 * with C combinations, each gets floor(total/C) samples and the first
 * total mod C combinations (in grid iteration order: file size outermost,
 * then bandwidth, then load) get one extra. Output is deterministic in
 * (grid, params, total_samples, seed) and independent of thread count.
 */
inline Dataset run_campaign(const CampaignGrid& grid, const GeneratorParams& params,
                            std::size_t total_samples, std::uint64_t seed,
                            int n_threads = 1) {
  const std::size_t n_comb = grid.combinations();
  if (n_comb == 0) throw DomainError("run_campaign: grid has no combinations");
  if (total_samples < n_comb) {
    throw DomainError("run_campaign: total_samples (" +
                      std::to_string(total_samples) +
                      ") is below the minimum of one sample per grid "
                      "combination (" +
                      std::to_string(n_comb) + ")");
  }
  for (double bw : grid.bandwidths_mhz) params.prb_count(bw);  // validate mapping

  const std::size_t base = total_samples / n_comb;
  const std::size_t extra = total_samples % n_comb;

  std::vector<std::vector<MeasurementSample>> per_comb(n_comb);
  parallel_for(n_comb, n_threads, [&](std::size_t comb) {
    const std::size_t i_load = comb % grid.load_levels.size();
    const std::size_t i_bw = (comb / grid.load_levels.size()) % grid.bandwidths_mhz.size();
    const std::size_t i_size = comb / (grid.load_levels.size() * grid.bandwidths_mhz.size());
    const std::size_t count = base + (comb < extra ? 1 : 0);
    per_comb[comb].reserve(count);
    for (std::size_t rep = 0; rep < count; ++rep) {
      SplitMix64 rng(SplitMix64::derive(seed, comb, rep));
      LowLayerFeatures f;
      f.bandwidth_mhz = grid.bandwidths_mhz[i_bw];
      f.load_level = grid.load_levels[i_load];
      f.file_size_bytes = grid.file_sizes_bytes[i_size];
      const RadioSample radio = sample_radio(f.bandwidth_mhz, f.load_level, params, rng);
      f.rsrp_dbm = radio.rsrp_dbm;
      f.rsrq_db = radio.rsrq_db;
      f.rssi_dbm = radio.rssi_dbm;
      MeasurementSample s;
      s.features = f;
      s.kqis = ground_truth_kqi(f, params, rng);
      per_comb[comb].push_back(std::move(s));
    }
  });

  Dataset dataset("campaign(seed=" + std::to_string(seed) +
                  ",total=" + std::to_string(total_samples) + ")");
  for (std::size_t comb = 0; comb < n_comb; ++comb) {
    for (MeasurementSample& s : per_comb[comb]) {
      const std::string where = "campaign sample";
      validate_features(s.features, where);
      validate_kqis(s.kqis, where);
      dataset.append_unchecked(std::move(s));
    }
  }
  return dataset;
}

}  // namespace kqipred

#endif  // KQIPRED_SIMULATOR_HPP_
