#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace spmex {

/** Reproducible Gaussian noise source.  The algorithm is part of the output
 *  contract (see docs/output-format.md): mt19937_64 seeded directly, each
 *  normal consumes exactly two 64-bit draws mapped to (0,1) via
 *  u = ((x >> 11) + 0.5) * 2^-53, combined by the cosine Box-Muller branch
 *  z = sqrt(-2 ln u1) * cos(2 pi u2).  No library distribution is used, so
 *  the stream is identical across standard libraries.
 */
class NoiseGenerator {
public:
  explicit NoiseGenerator(std::uint64_t seed) : rng_(seed) {}

  double standard_normal() {
    const double u1 = to_unit(rng_());
    const double u2 = to_unit(rng_());
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// value + sigma * z; the generator advances even when sigma == 0.
  double add_noise(double value, double sigma) {
    const double z = standard_normal();
    return value + sigma * z;
  }

private:
  static double to_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1p-53; // in (0,1), log-safe
  }
  std::mt19937_64 rng_;
};

} // namespace spmex
