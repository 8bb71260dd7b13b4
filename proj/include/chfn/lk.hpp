#pragma once

#include <complex>
#include <variant>
#include <vector>

namespace chfn {

/// Atoms closer than this are merged into one.
inline constexpr double kAtomMergeTolerance = 1e-12;

/// Point mass c at t in a finite atomic Lévy measure.
struct LevyAtom {
  double position;
  double weight;
  friend bool operator==(const LevyAtom&, const LevyAtom&) = default;
};

/// Symmetric exponent ψ(ξ) = ½σ²ξ² + Σ c_i (1 − cos(t_i ξ)), t_i > 0.
///
/// Atoms are kept sorted by position with coincident positions merged, so two
/// exponents describing the same measure compare equal.
class LKExponent {
public:
  LKExponent() = default;
  /// Throws ParameterError on sigma2 < 0, t <= 0 or c <= 0.
  LKExponent(double sigma2, std::vector<LevyAtom> atoms);

  static LKExponent gaussian(double sigma2) { return {sigma2, {}}; }
  /// ψ(ξ) = c ξ², i.e. sigma2 = 2c.
  static LKExponent quadratic(double c) { return {2.0 * c, {}}; }
  static LKExponent cosine(double t, double c) { return {0.0, {{t, c}}}; }

  double sigma2() const noexcept { return sigma2_; }
  const std::vector<LevyAtom>& atoms() const noexcept { return atoms_; }
  bool is_zero() const noexcept { return sigma2_ == 0.0 && atoms_.empty(); }

  friend bool operator==(const LKExponent&, const LKExponent&) = default;

private:
  double sigma2_ = 0.0;
  std::vector<LevyAtom> atoms_;
};

/// Drifted exponent with −ψ(ξ) = iγξ − ½σ²ξ² + Σ c_i (e^{iξx_i} − 1 − iξx_i 1{|x_i| ≤ 1}).
class DriftedLKExponent {
public:
  DriftedLKExponent() = default;
  /// Throws ParameterError on sigma2 < 0, x == 0 or c <= 0.
  DriftedLKExponent(double gamma, double sigma2, std::vector<LevyAtom> atoms);

  double gamma() const noexcept { return gamma_; }
  double sigma2() const noexcept { return sigma2_; }
  const std::vector<LevyAtom>& atoms() const noexcept { return atoms_; }

  friend bool operator==(const DriftedLKExponent&, const DriftedLKExponent&) = default;

private:
  double gamma_ = 0.0;
  double sigma2_ = 0.0;
  std::vector<LevyAtom> atoms_;
};

using Exponent = std::variant<LKExponent, DriftedLKExponent>;

/// ψ(ξ) ≥ 0 for the symmetric form.
double lk_eval(const LKExponent& psi, double xi);
/// ψ(ξ) (not −ψ) for the drifted form.
std::complex<double> lk_eval(const DriftedLKExponent& psi, double xi);
std::complex<double> lk_eval(const Exponent& psi, double xi);

/// s1·ψ1 + s2·ψ2 with atom measures added.
LKExponent lk_combine(const LKExponent& psi1, const LKExponent& psi2, double scale1, double scale2);

enum class Decomposability { IndecomposableGaussian, IndecomposableCosine, Decomposable, Zero };

struct IndecomposabilityResult {
  Decomposability kind;
  /// Atom position for IndecomposableCosine, 0 otherwise.
  double position = 0.0;
};

/// Classifies ψ against the indecomposable rays c·ξ² and c·(1 − cos tξ).
IndecomposabilityResult is_indecomposable(const LKExponent& psi);

const char* to_string(Decomposability d);

}  // namespace chfn
