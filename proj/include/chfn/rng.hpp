#pragma once

#include <cstdint>
#include <random>

namespace chfn {

/// Seeded generator for one (seed, stream) pair. Streams with different
/// indices are independent; the variate transforms are implemented here, not
/// taken from <random> distributions, so sequences are identical across
/// standard libraries.
class Rng {
public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t bits() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  double normal();
  /// Exp(1).
  double exponential();
  /// Gamma(shape, 1); shape > 0.
  double gamma(double shape);
  /// Poisson(mean); mean >= 0.
  std::uint64_t poisson(double mean);
  /// Failures before the first success, P(N = k) = (1 − r) r^k, 0 <= r < 1.
  std::uint64_t geometric(double r);
  bool coin() { return (engine_() >> 63) != 0; }

private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace chfn
