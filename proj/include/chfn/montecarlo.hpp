#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "chfn/charfn.hpp"
#include "chfn/inversion.hpp"

namespace chfn {

/// Laws with exact samplers.
namespace law {

struct Exponential {
  double rate;
};
struct Gamma {
  double shape;
  double scale;
};
struct Normal {
  double mean;
  double var;
};
/// Density (rate/2) e^{−rate|x|}.
struct Laplace {
  double rate;
};
/// w0·δ₀ + (1 − w0)·Laplace(rate).
struct AtomLaplaceMix {
  double w0;
  double rate;
};
/// P(X = kt) = ((1 − r)/(1 + r)) r^{|k|}.
struct TwoSidedGeometric {
  double r;
  double t;
};
/// X − Y with X ~ Exp(rate1), Y ~ Exp(rate2).
struct ExpDifference {
  double rate1;
  double rate2;
};
/// bG + √(2aG)·Z with G ~ Gamma(β, scale 1/β).
struct GammaNormalDrift {
  double beta;
  double a;
  double b;
};
/// Sampled by rejection from a Laplace envelope; the density must be
/// certified nonnegative.
struct SignedMixture {
  DensityMixture density;
};
/// Y₁(T) + Y₂(T) for independent Lévy processes with exponents ψ1, ψ2 at an
/// independent time T distributed as the kernel's mixing law.
struct SubordinatedSum {
  LKExponent psi1;
  LKExponent psi2;
  CMKernel kernel;
};

}  // namespace law

using LawSpec = std::variant<law::Exponential, law::Gamma, law::Normal, law::Laplace,
                             law::AtomLaplaceMix, law::TwoSidedGeometric, law::ExpDifference,
                             law::GammaNormalDrift, law::SignedMixture, law::SubordinatedSum>;

/// Samples are generated in blocks of this size; block i uses stream i.
inline constexpr std::size_t kSampleBlock = 65536;

struct SampleBatch {
  std::vector<double> values;
  std::uint64_t seed = 0;
  /// Acceptance rate of the rejection sampler, when one was used.
  std::optional<double> acceptance;
};

/// Deterministic in (law, n, seed) regardless of thread count. Throws
/// ParameterError for invalid laws or n = 0, RefusalError for an uncertified
/// SignedMixture and EnvelopeError when the rejection acceptance is below 1%.
SampleBatch sample(const LawSpec& law, std::size_t n, std::uint64_t seed);

struct EmpiricalCF {
  std::vector<double> grid;
  std::vector<cplx> estimates;
  std::size_t n = 0;
};

/// φ̂(ξ) = N^{−1} Σ e^{iξX_k}. Throws ParameterError on an empty batch.
EmpiricalCF empirical_cf(const SampleBatch& batch, std::span<const double> grid);

inline constexpr double kMcTolerance = 5.0;

struct McPoint {
  double xi;
  cplx empirical;
  cplx target;
  double error;
  bool pass;
};

struct McReport {
  std::vector<McPoint> points;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;  ///< c/√n
  std::optional<double> acceptance;
  double max_error = 0.0;
  bool pass = false;
};

/// Compares φ̂ with target pointwise at tolerance c/√n. Needs a grid of at
/// most 64 points and n >= 10⁴ (ParameterError otherwise).
McReport mc_validate(const LawSpec& law, const CharFn& target, std::span<const double> grid,
                     std::size_t n, std::uint64_t seed, double c = kMcTolerance);

/// sup_x |F_n(x) − F(x)| for a continuous cdf.
double kolmogorov_distance(const SampleBatch& batch, const std::function<double(double)>& cdf);
/// Same for a mixture, accounting for its atom at 0.
double kolmogorov_distance(const SampleBatch& batch, const DensityMixture& p);

}  // namespace chfn
