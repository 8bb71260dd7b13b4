#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "chfn/kernel.hpp"
#include "chfn/lk.hpp"
#include "chfn/rational.hpp"

namespace chfn {

/// Default identity-check tolerance for closed forms.
inline constexpr double kIdentityTolerance = 1e-10;

/// L(a·ψ(ξ)) for a completely monotone kernel L.
struct Composed {
  CMKernel kernel;
  double scale;
  Exponent exponent;
};

/// base(ξ)^power on the principal branch; integer powers use repeated
/// multiplication.
struct RationalPower {
  ComplexRational base;
  double power;
};

/// Samples on a sorted grid, linearly interpolated.
class Tabulated {
public:
  /// Throws ParameterError on unsorted/mismatched input or, when 0 lies in
  /// the grid range, a value at 0 farther than 1e-12 from 1.
  Tabulated(std::vector<double> grid, std::vector<cplx> values);

  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<cplx>& values() const noexcept { return values_; }
  /// Throws RangeError outside [grid.front(), grid.back()].
  cplx operator()(double xi) const;

private:
  std::vector<double> grid_;
  std::vector<cplx> values_;
};

/// A characteristic function (or candidate) on the real line.
class CharFn {
public:
  using Variant = std::variant<ComplexRational, Composed, RationalPower, Tabulated>;

  /// Rational, Composed and RationalPower forms must equal 1 at ξ = 0.
  CharFn(ComplexRational r);
  CharFn(Composed c);
  CharFn(RationalPower p);
  CharFn(Tabulated t) : v_(std::move(t)) {}

  static CharFn one() { return CharFn(ComplexRational::constant(1.0)); }
  /// 1/(1 + a ξ²).
  static CharFn laplace(double a);
  /// e^{−c ξ²}.
  static CharFn gaussian(double c);

  const Variant& variant() const noexcept { return v_; }
  const ComplexRational* rational() const noexcept { return std::get_if<ComplexRational>(&v_); }
  const Composed* composed() const noexcept { return std::get_if<Composed>(&v_); }

private:
  Variant v_;
};

/// f(ξ). Throws EvaluationError at a real pole and RangeError outside a
/// tabulated grid.
cplx eval_cf(const CharFn& f, double xi);

/// Exact rational form when one exists: Rational, integer RationalPower, and
/// Kac / integer-β GammaBeta kernels composed with atom-free exponents.
std::optional<ComplexRational> to_rational(const CharFn& f);

/// Binary operation on characteristic-function values: Kac's Φ, Φ_β, Φ_n or a
/// general Φ_L. Complex arguments are supported for Kac and GammaBeta kernels;
/// other kernels require real values in (0, 1].
class PhiOp {
public:
  static PhiOp kac() { return PhiOp(CMKernel::kac()); }
  static PhiOp beta(double b) { return PhiOp(CMKernel::gamma_beta(b)); }
  static PhiOp power(unsigned n) { return PhiOp(CMKernel::gamma_beta(static_cast<double>(n))); }
  static PhiOp kernel(const CMKernel& L) { return PhiOp(L); }

  const CMKernel& kernel() const noexcept { return kernel_; }
  cplx operator()(cplx x, cplx y) const;
  std::string name() const;

private:
  explicit PhiOp(CMKernel k) : kernel_(k) {}
  CMKernel kernel_;
};

struct IdentityPoint {
  double xi;
  cplx f1;
  cplx f2;
  cplx target;
  cplx combined;
  double residual;
};

struct PointFailure {
  double xi;
  std::string message;
};

struct VerificationReport {
  std::vector<IdentityPoint> points;
  std::vector<PointFailure> failures;
  double max_residual = 0.0;
  double tolerance = kIdentityTolerance;
  bool pass = false;
};

/// Checks op(f1(ξ), f2(ξ)) = target(ξ) on a finite grid (a necessary
/// condition for the identity on all of ℝ).
VerificationReport verify_identity(const CharFn& f1, const CharFn& f2, const CharFn& target,
                                   std::span<const double> grid, const PhiOp& op,
                                   double tolerance = kIdentityTolerance);

/// n equally spaced points on [lo, hi]; n ≥ 2.
std::vector<double> linspace(double lo, double hi, std::size_t n);
/// 401 points on [−20, 20].
std::vector<double> default_grid();

// -- counterexample families ------------------------------------------------

/// f1 = φ_{X−Y}, f2 = φ_{Y−X} for X ~ Exp(1), Y ~ Exp(2).
struct ExpDifference {};
/// Real even pair with a signed-mixture f2; 0 < a < 1/2.
struct SignedMixture {
  double a;
};
/// f_{1,2} = (1 + (a_{1,2}ξ² ∓ ibξ)/β)^{−β}.
struct GammaDrift {
  double beta;
  double a1;
  double a2;
  double b;
};
/// n-th powers of the rescaled SignedMixture pair with parameter θ.
struct PowerFamily {
  double a;
  unsigned n;
  double theta;
};

using CounterexampleKind = std::variant<ExpDifference, SignedMixture, GammaDrift, PowerFamily>;

struct Counterexample {
  CharFn f1;
  CharFn f2;
  CharFn target;
  /// The operation under which op(f1, f2) = target.
  PhiOp op;
};

/// Right-hand side of the principal-branch condition for GammaDrift with
/// β > 2: 2√β tan(π/β) min(√a1, √a2). Infinite for β ≤ 2.
double gamma_drift_bound(double beta, double a1, double a2);

/// Throws ParameterError for out-of-range parameters and AdmissibilityError
/// (carrying the bound) when the GammaDrift branch condition fails.
Counterexample make_counterexample(const CounterexampleKind& kind);

struct BranchReport {
  double grid_max_arg = 0.0;
  /// |ξ| = √(β/a), where |arg w| peaks.
  double maximizer = 0.0;
  /// arctan(|b| / (2√(aβ))).
  double analytic_max_arg = 0.0;
  double limit = 0.0;  ///< π/β
  bool branch_ok = false;
  /// max |(w^{−β})^{−1/β} − w| / |w| over the grid.
  double roundtrip_error = 0.0;
  bool roundtrip_ok = false;
  bool pass = false;
};

/// Principal-branch diagnostics for w(ξ) = 1 + (aξ² − ibξ)/β.
BranchReport principal_branch_check(double beta, double a, double b, std::span<const double> grid);

// -- Gaussian limit ----------------------------------------------------------

struct PowerFamilyScan {
  double a;
  double theta;
  std::vector<unsigned> n_values;
};

struct GammaDriftScan {
  double a1;
  double a2;
  std::vector<double> betas;
  /// One drift per β; each pair must satisfy the branch condition.
  std::vector<double> drifts;
};

using LimitScanSpec = std::variant<PowerFamilyScan, GammaDriftScan>;

struct LimitEntry {
  double index;  ///< n or β
  double sup_f1;
  double sup_f2;
  double sup;  ///< max(sup_f1, sup_f2)
};

struct LimitReport {
  std::vector<LimitEntry> entries;
  bool non_increasing = false;
  double final_sup = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// sup over the grid of |f_j − Gaussian limit| for every family member;
/// passes when the sups are non-increasing from `monotone_from` on and the
/// last one is below `threshold`.
LimitReport gaussian_limit_scan(const LimitScanSpec& spec, std::span<const double> grid,
                                double threshold, std::size_t monotone_from = 0);

/// Shrinking admissible drift min(1, √β tan(π / max(β, 2.01))).
double shrinking_drift(double beta);

}  // namespace chfn
