#pragma once

#include <cstdint>
#include <random>

namespace migstock {

/// Deterministic random source. mt19937_64 supplies the bit stream; all
/// distribution transforms are implemented here so draw sequences do not
/// depend on the standard library in use.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Splitmix64-style sub-seed derivation for independent streams.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on the open interval (0, 1).
  double uniform();

  /// Standard normal via Box-Muller (pair cached).
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Normal(mean, sd) truncated to [lo, hi], inverse-CDF method.
  double truncated_normal(double mean, double sd, double lo, double hi);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

double norm_cdf(double x);
double norm_quantile(double p);
double norm_logpdf(double x, double mean, double var);

}  // namespace migstock
