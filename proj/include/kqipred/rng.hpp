/*!
 * Copyright (c) 2026 by Contributors
 * \file rng.hpp
 * \brief Deterministic pseudo-random number generation.
 *
 * Every randomized operation in the toolkit draws from SplitMix64
 * (Steele, Lea & Flood, 2014): a 64-bit seedable generator with a fixed,
 * platform-independent update rule. Sub-streams are derived by hashing the
 * parent seed together with stream labels, so independent work items
 * (campaign combinations, forest trees, cross-validation folds) can be
 * generated in any order, or in parallel, with identical results.
 *
 * Derived quantities use fixed constructions:
 *   - uniform doubles take the top 53 bits of the next 64-bit word;
 *   - bounded integers use rejection sampling (no modulo bias);
 *   - Gaussians use the Marsaglia polar method (no trigonometric calls);
 *   - shuffles are top-down Fisher-Yates.
 */
#ifndef KQIPRED_RNG_HPP_
#define KQIPRED_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

namespace kqipred {

/*! \brief SplitMix64 generator. */
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  /*! \brief Next raw 64-bit word. */
  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return finalize(state_);
  }

  /*! \brief Uniform double in [0, 1) with 53 bits of precision. */
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /*! \brief Uniform double in [lo, hi). */
  double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

  /*! \brief Uniform integer in [0, bound); bound must be nonzero. */
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /*! \brief Zero-mean Gaussian draw; sigma == 0 consumes no state. */
  double gaussian(double sigma) {
    if (sigma == 0.0) return 0.0;
    for (;;) {
      const double u = 2.0 * next_double() - 1.0;
      const double v = 2.0 * next_double() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) {
        return sigma * u * std::sqrt(-2.0 * std::log(s) / s);
      }
    }
  }

  /*! \brief exp(gaussian(sigma)); equals 1 exactly when sigma == 0. */
  double lognormal(double sigma) {
    if (sigma == 0.0) return 1.0;
    return std::exp(gaussian(sigma));
  }

  /*! \brief Top-down Fisher-Yates shuffle. */
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::uint64_t j = below(i);
      std::swap(values[i - 1], values[j]);
    }
  }

  /*! \brief SplitMix64 finalizer; also usable as a standalone 64-bit hash. */
  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /*! \brief Derive a sub-stream seed from a parent seed and a stream label. */
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t label) {
    return finalize(seed + 0x9e3779b97f4a7c15ULL * (label + 1));
  }

  /*! \brief Two-label sub-stream derivation, derive(derive(a, b), c). */
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t label1,
                              std::uint64_t label2) {
    return derive(derive(seed, label1), label2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace kqipred

#endif  // KQIPRED_RNG_HPP_
