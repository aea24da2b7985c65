#pragma once

#include <cstdint>

namespace plc {

/// Splittable counter-based generator (SplitMix64 of Steele, Lea & Flood).
///
/// A stream is keyed by (master seed, stream id); consuming one stream never
/// affects another, so replications keyed by index produce identical draws
/// for any scheduling order or worker count. Draws are reproducible across
/// platforms: normals come from the inverse CDF, not from std::distributions.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1).
  double next_uniform();

  /// Standard normal via Wichura's AS241 inverse CDF.
  double next_normal();

 private:
  std::uint64_t state_;
};

/// AS241 inverse of the standard normal CDF; |error| < 1e-15 on (0,1).
double inverse_normal_cdf(double p);

/// Standard normal CDF, via erfc.
double normal_cdf(double x);

/// Standard normal density.
double normal_pdf(double x);

}  // namespace plc
