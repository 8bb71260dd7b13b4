#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "chfn/charfn.hpp"
#include "chfn/factor.hpp"
#include "chfn/kernel.hpp"
#include "chfn/polynomial.hpp"

namespace chfn {

/// Coefficients below this value are flagged as negative.
inline constexpr double kCoefficientFloor = -1e-14;
/// Relative residual above which G^{−1/n} − 1 is not affine in (1 − z).
inline constexpr double kAffineTolerance = 1e-8;

/// Point mass c at s in the Lévy measure of a Bernstein function.
struct BernsteinAtom {
  double position;  ///< s > 0
  double weight;    ///< c > 0
};

/// η(u) = b·u + Σ c_i (1 − e^{−u s_i}), so η(0) = 0 and η is nondecreasing.
class BernsteinFn {
public:
  BernsteinFn() = default;
  /// Throws ParameterError unless b ≥ 0 and every atom has s > 0, c > 0.
  /// Atoms are sorted and merged like Lévy atoms.
  BernsteinFn(double b, std::vector<BernsteinAtom> atoms);

  static BernsteinFn linear(double b) { return {b, {}}; }

  double b() const noexcept { return b_; }
  const std::vector<BernsteinAtom>& atoms() const noexcept { return atoms_; }

  double operator()(double u) const;

  friend bool operator==(const BernsteinFn&, const BernsteinFn&) = default;

private:
  double b_ = 0.0;
  std::vector<BernsteinAtom> atoms_;
};

enum class BernsteinKind { Linear, ExpAtom, Decomposable, Zero };

struct BernsteinClass {
  BernsteinKind kind;
  /// Atom position s for ExpAtom, 0 otherwise.
  double position = 0.0;
};

/// Only positive multiples of u and of 1 − e^{−su} are indecomposable.
BernsteinClass bernstein_indecomposable(const BernsteinFn& eta);
const char* to_string(BernsteinKind k);

class PGF;

/// num(z) / den(z) with real coefficients.
struct RationalZ {
  RPoly num;
  RPoly den;
};

/// L(a·η(1 − z)).
struct ComposedZ {
  CMKernel kernel;
  double a;
  BernsteinFn eta;
};

/// base(z)^n.
struct PowerOf {
  std::shared_ptr<const PGF> base;
  unsigned n;
};

/// A probability generating function on [0, 1].
class PGF {
public:
  using Variant = std::variant<RationalZ, ComposedZ, PowerOf>;

  /// Throws InvalidPgfError when den(0) = 0 or G(1) differs from 1 by more
  /// than 1e-12.
  PGF(RationalZ r);
  /// Throws ParameterError for a < 0.
  PGF(ComposedZ c);
  /// Throws ParameterError for n = 0 or a null base.
  PGF(PowerOf p);

  static PGF power(const PGF& base, unsigned n);
  /// (1 + μ(1 − z))^{−1}.
  static PGF geometric(double mu);

  const Variant& variant() const noexcept { return v_; }

private:
  Variant v_;
};

/// G(z) for z ∈ [0, 1]. Throws DomainError outside [0, 1] and
/// EvaluationError at a pole.
double pgf_eval(const PGF& G, double z);

/// op(G1(z), G2(z)) for Kac's Φ or Φ_n (any PhiOp with a GammaBeta kernel).
/// Throws DomainError when either value is nonpositive or the result is
/// undefined.
double pgf_phi(const PhiOp& op, const PGF& G1, const PGF& G2, double z);

/// Real operation on positive reals; see pgf_phi.
double phi_real(const PhiOp& op, double x, double y);

// -- coefficients --------------------------------------------------------------

/// weight·ratio^k, one simple pole at z = 1/ratio.
struct GeometricTerm {
  double weight;
  double ratio;
};

/// Two geometric terms A·p^k + B·q^k with p > q.
struct TwoTermBound {
  double A;
  double p;
  double B;
  double q;
  /// p^k (A + B), a lower bound on the coefficients when B < 0.
  double lower(std::size_t k) const;
};

struct NonnegReport {
  double min_coeff = 0.0;
  std::size_t argmin = 0;
  double floor = kCoefficientFloor;
  /// Indices with coefficient < floor.
  std::vector<std::size_t> negative;
  double partial_sum = 0.0;
  /// partial_sum ≤ 1 − floor: the mass check uses the same rounding slack.
  bool mass_ok = true;
  std::optional<TwoTermBound> bound;
  /// Every coefficient is at least bound->lower(k); true when no bound applies.
  bool bound_holds = true;
  bool pass = false;
};

struct CoefficientSeries {
  std::vector<double> coeffs;
  NonnegReport report;
};

/// Polynomial part and geometric terms of a rational pgf whose poles are real
/// and simple: c_k = poly_k + Σ A_j p_j^k. Returns nullopt when a pole is
/// complex. Throws MultiplicityError for repeated poles and InvalidPgfError
/// for a pole with |z| ≤ 1.
struct RationalExpansion {
  std::vector<double> polynomial;
  std::vector<GeometricTerm> terms;  ///< sorted by decreasing ratio
};
std::optional<RationalExpansion> rational_expansion(const RationalZ& r);

/// First N + 1 series coefficients with a nonnegativity report; N ≥ 1.
CoefficientSeries coefficients(const PGF& G, std::size_t N);

// -- counterexample and family tests -------------------------------------------

struct DiscreteCounterexample {
  PGF g1;
  PGF g2;
  /// (1 + λ/n (1 − z))^{−n}.
  PGF target;
  PhiOp op;
};

/// The pair G1, G2 with op(G1, G2) = target for Kac's Φ (n = 1) and, with
/// λ → λ/n and n-th powers, for Φ_n. Throws ParameterError unless λ > 0,
/// 0 < θ < 1/2 and n ≥ 1.
DiscreteCounterexample discrete_counterexample(double lambda, double theta, unsigned n);

struct AffinenessReport {
  double residual;  ///< relative least-squares residual
  bool affine;
};

/// Fits G^{−1/n} − 1 against α + β(1 − z) on 11 points of [0, 1]; affine
/// means G could be geometric (n = 1) or negative binomial of order n.
AffinenessReport affineness_test(const PGF& G, unsigned n = 1);

/// Recovers a with G = L(a·η(1 − z)) for an indecomposable η, using the stored
/// exponent of a same-kernel ComposedZ and L^{−1}(G) otherwise. Throws
/// PreconditionError unless η is Linear or ExpAtom, and StructureError when
/// the exponent of G is not a·η for some a ∈ [0, 1].
FactorFit discrete_factor_recover(const CMKernel& L, const BernsteinFn& eta, const PGF& G);

}  // namespace chfn
