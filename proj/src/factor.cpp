#include "chfn/factor.hpp"

#include <algorithm>
#include <cmath>

#include "chfn/error.hpp"
#include "detail/format.hpp"

namespace chfn {

using detail::fmt;

namespace {

constexpr double kRealTolerance = 1e-12;
constexpr double kUnitSlack = 1e-12;

// η(ξ) on the grid.
std::vector<double> exponent_values(const CMKernel& L, const CharFn& f,
                                    std::span<const double> grid) {
  std::vector<double> eta;
  eta.reserve(grid.size());
  const Composed* c = f.composed();
  const LKExponent* stored = c ? std::get_if<LKExponent>(&c->exponent) : nullptr;
  if (c && stored && c->kernel == L) {
    for (double xi : grid) eta.push_back(c->scale * lk_eval(*stored, xi));
    return eta;
  }
  for (double xi : grid) {
    const cplx v = eval_cf(f, xi);
    if (std::abs(v.imag()) > kRealTolerance)
      throw StructureError("f is not real-valued at xi = " + fmt(xi), std::abs(v.imag()));
    eta.push_back(kernel_inverse(L, v.real()));
  }
  return eta;
}

}  // namespace

CharFn compose(const CMKernel& L, double a, const Exponent& psi) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw ParameterError("compose needs a >= 0, got " + fmt(a));
  return CharFn(Composed{L, a, psi});
}

FactorFit factor_recover(const CMKernel& L, const LKExponent& psi, const CharFn& f,
                         std::span<const double> grid) {
  const auto kind = is_indecomposable(psi).kind;
  if (kind == Decomposability::Decomposable || kind == Decomposability::Zero)
    throw PreconditionError(std::string("factor_recover needs an indecomposable exponent, got ") +
                            to_string(kind));

  const std::vector<double> eta = exponent_values(L, f, grid);
  double num = 0.0, den = 0.0, norm_eta = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = lk_eval(psi, grid[i]);
    num += eta[i] * p;
    den += p * p;
    norm_eta += eta[i] * eta[i];
  }
  if (den == 0.0) throw PreconditionError("psi vanishes on the whole grid");
  const double a = num / den;

  double res = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = eta[i] - a * lk_eval(psi, grid[i]);
    res += d * d;
  }
  const double residual = norm_eta > 0.0 ? std::sqrt(res / norm_eta) : 0.0;
  if (!(residual < kFactorResidualTolerance))
    throw StructureError(
        "stored exponent is not a multiple of psi (relative residual " + fmt(residual) + ")",
        residual);
  if (a < -kUnitSlack || a > 1.0 + kUnitSlack)
    throw StructureError("fitted factor a = " + fmt(a) + " lies outside [0, 1]", residual);
  return {std::clamp(a, 0.0, 1.0), residual};
}

FactorFit factor_recover(const CMKernel& L, const LKExponent& psi, const CharFn& f) {
  const auto grid = default_grid();
  return factor_recover(L, psi, f, grid);
}

}  // namespace chfn
