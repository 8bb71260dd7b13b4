#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chfn/charfn.hpp"

namespace chfn {

/// A/(ξ² + λ).
struct PoleTerm {
  double weight;
  double lambda;
};

/// Partial fractions Σ A_k/(ξ² + λ_k) of a real even, strictly proper
/// rational, with λ_k increasing. Throws ParameterError when f is not real,
/// even and strictly proper or has a pole on the real line,
/// ConjugatePairError for complex λ and MultiplicityError for repeated λ.
std::vector<PoleTerm> partial_fractions_even(const ComplexRational& f);

/// (A/(2r)) e^{−r|x|} with r = √λ; its mass is A/λ.
struct DensityTerm {
  double weight;
  double rate;

  double mass() const { return weight / (rate * rate); }
  double operator()(double x) const;
};

/// atom0·δ₀ plus a signed sum of Laplace densities.
struct DensityMixture {
  double atom0 = 0.0;
  std::vector<DensityTerm> terms;

  /// Continuous part at x.
  double density(double x) const;
  double mass() const;
  /// P(X <= x), atom included.
  double cdf(double x) const;
  /// Smallest rate; throws ParameterError without terms.
  double min_rate() const;
};

/// Density of a real even rational characteristic function; the value at
/// |ξ| → ∞ becomes atom0. Throws ParameterError for non-rational, non-even or
/// improper f and inherits the partial-fraction errors.
DensityMixture density_from_even_rational(const CharFn& f);

inline constexpr double kPositivityThreshold = -1e-12;

struct PositivityReport {
  double min_value = 0.0;
  double argmin = 0.0;
  /// A₊/(2√λ₋) + A₋/(2√λ₊) when the mixture has exactly two terms with the
  /// slower one positive and the faster one negative; a lower bound for
  /// e^{√λ₋|x|} p(x).
  std::optional<double> analytic_bound;
  double threshold = kPositivityThreshold;
  bool pass = false;
};

/// 2001 points on [0, 10/min_rate].
std::vector<double> positivity_grid(const DensityMixture& p);
PositivityReport positivity_report(const DensityMixture& p, std::span<const double> grid);
PositivityReport positivity_report(const DensityMixture& p);

/// Quadrature inversion p(x) = (1/2π)∫ e^{−iξx} f(ξ) dξ.
struct TabulatedDensity {
  std::vector<double> x;
  std::vector<double> p;
  /// Weight at x = 0 split off before integrating (rational f only).
  double atom0 = 0.0;
  /// Truncation point Ξ and step.
  double cutoff = 0.0;
  double step = 0.0;
  /// max_x |T_h − T_{2h}|, a conservative bound on the quadrature error.
  double error_estimate = 0.0;
  std::optional<std::string> warning;
};

TabulatedDensity numeric_inversion(const CharFn& f, std::span<const double> x);

/// Fails when min p < threshold − error_estimate.
PositivityReport positivity_report(const TabulatedDensity& p);

/// Smallest eigenvalue of [f(ξ_j − ξ_k)]. Throws ParameterError with fewer
/// than two distinct points.
double bochner_min_eig(const CharFn& f, std::span<const double> points);

}  // namespace chfn
