#include "chfn/rng.hpp"

#include <cmath>

#include "chfn/error.hpp"

namespace chfn {

namespace {

constexpr double kPoissonChunk = 30.0;

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(make_engine(seed, stream)) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() {
  double u;
  do u = uniform();
  while (u == 0.0);
  return u;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  // Marsaglia polar method.
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * m;
  has_spare_ = true;
  return u * m;
}

double Rng::exponential() {
  return -std::log(uniform_open());
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw ParameterError("gamma shape must be > 0");
  if (shape < 1.0) {
    // Gamma(k) = Gamma(k + 1) · U^{1/k}.
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform_open(), 1.0 / shape);
  }
  // Marsaglia and Tsang.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::uint64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw ParameterError("Poisson mean must be >= 0");
  std::uint64_t total = 0;
  // Sums of independent Poissons are Poisson, so large means are split into
  // chunks small enough for the multiplication method.
  while (mean > 0.0) {
    const double m = std::min(mean, kPoissonChunk);
    mean -= m;
    const double limit = std::exp(-m);
    double prod = uniform_open();
    while (prod > limit) {
      ++total;
      prod *= uniform_open();
    }
  }
  return total;
}

std::uint64_t Rng::geometric(double r) {
  if (!(r >= 0.0 && r < 1.0)) throw ParameterError("geometric ratio must lie in [0, 1)");
  if (r == 0.0) return 0;
  return static_cast<std::uint64_t>(std::floor(std::log(uniform_open()) / std::log(r)));
}

}  // namespace chfn
