#pragma once

#include <complex>
#include <optional>
#include <string>

namespace chfn {

/// Mixing law ρ with L(s) = ∫ e^{−st} ρ(dt), for the kernels where it is a
/// named distribution.
struct MixingLaw {
  enum class Kind { PointMass, Exponential, Gamma };
  Kind kind;
  /// Gamma shape (1 for Exponential); the point mass sits at 1.
  double shape = 1.0;
  /// Gamma scale (1 for Exponential).
  double scale = 1.0;
};

/// An injective completely monotone L: [0, ∞) → (0, 1] with L(0) = 1.
///
///   Exp          e^{−s}
///   Kac          (1 + s)^{−1}
///   GammaBeta    (1 + s/β)^{−β},  β > 0
///   GenLinnik    (1 + s^β)^{−α},  α > 0, 0 < β ≤ 1
///   StableExp    e^{−s^β},        0 < β ≤ 1
class CMKernel {
public:
  enum class Family { Exp, Kac, GammaBeta, GenLinnik, StableExp };

  static CMKernel exp() { return CMKernel(Family::Exp, 1.0, 1.0); }
  static CMKernel kac() { return CMKernel(Family::Kac, 1.0, 1.0); }
  /// Throws ParameterError unless beta > 0.
  static CMKernel gamma_beta(double beta);
  /// Throws ParameterError unless alpha > 0 and 0 < beta <= 1.
  static CMKernel gen_linnik(double alpha, double beta);
  /// Throws ParameterError unless 0 < beta <= 1.
  static CMKernel stable_exp(double beta);

  Family family() const noexcept { return family_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  std::optional<MixingLaw> mixing_law() const;
  std::string name() const;

  friend bool operator==(const CMKernel&, const CMKernel&) = default;

private:
  CMKernel(Family f, double alpha, double beta) : family_(f), alpha_(alpha), beta_(beta) {}

  Family family_;
  double alpha_;
  double beta_;
};

/// L(s) for s ≥ 0; throws DomainError on s < 0.
double kernel_eval(const CMKernel& L, double s);

/// L(s) for complex s with Re s ≥ 0, principal branches throughout.
std::complex<double> kernel_eval(const CMKernel& L, std::complex<double> s);

/// The unique s ≥ 0 with L(s) = v; throws DomainError unless v ∈ (0, 1].
double kernel_inverse(const CMKernel& L, double v);

/// Φ_L(x, y) = L(L^{−1}(x) + L^{−1}(y)) on I_L × I_L.
double phi_L(const CMKernel& L, double x, double y);

/// Complex Φ_L, available for Kac (Kac's operation) and GammaBeta (principal
/// branch of (x^{−1/β} + y^{−1/β} − 1)^{−β}). Other families and arguments on
/// the cut (−∞, 0] throw DomainError.
std::complex<double> phi_L(const CMKernel& L, std::complex<double> x, std::complex<double> y);

/// Kac's operation Φ(x, y) = 1/(1/x + 1/y − 1).
/// Throws DomainError on x = 0, y = 0 or 1/x + 1/y = 1.
std::complex<double> kac_phi(std::complex<double> x, std::complex<double> y);

}  // namespace chfn
