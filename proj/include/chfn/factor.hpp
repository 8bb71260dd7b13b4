#pragma once

#include <span>

#include "chfn/charfn.hpp"

namespace chfn {

/// Relative least-squares residual above which η is not a multiple of ψ.
inline constexpr double kFactorResidualTolerance = 1e-10;

/// L(a·ψ(ξ)); throws ParameterError for a < 0.
CharFn compose(const CMKernel& L, double a, const Exponent& psi);

struct FactorFit {
  double a;
  /// ‖η − aψ‖ / ‖η‖ over the grid.
  double residual;
};

/// Recovers a with f = L(aψ) for an indecomposable ψ. η is the stored
/// exponent when f is composed through L itself, and L^{−1}(f(ξ)) otherwise.
/// Throws PreconditionError when ψ is decomposable or zero, and StructureError
/// (carrying the residual) when η is not aψ for some a ∈ [0, 1].
FactorFit factor_recover(const CMKernel& L, const LKExponent& psi, const CharFn& f,
                         std::span<const double> grid);
FactorFit factor_recover(const CMKernel& L, const LKExponent& psi, const CharFn& f);

}  // namespace chfn
