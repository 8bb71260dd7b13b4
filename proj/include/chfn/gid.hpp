#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "chfn/charfn.hpp"

namespace chfn {

/// Relative tolerance for coefficient comparison, and the cut-off below which
/// a drift counts as zero.
inline constexpr double kCoefficientTolerance = 1e-10;

enum class GidVerdict { Gid, NotGid, Unknown };
const char* to_string(GidVerdict v);

/// ψ(ξ) = −iγξ + aξ², the exponent of 1/(1 − iγξ + aξ²).
struct DriftedQuadratic {
  double gamma;
  double a;
};

/// Exact match of ψ = 1/f − 1 against −iγξ + aξ² (a ≥ 0), by coefficients.
std::optional<DriftedQuadratic> drifted_quadratic(const ComplexRational& f);

struct GramCheck {
  double t;
  double min_eig;
};

struct GidReport {
  GidVerdict verdict = GidVerdict::Unknown;
  /// Set for a structural match.
  std::optional<DriftedQuadratic> form;
  std::string reason;
  /// Minimum eigenvalue of [e^{−tψ(ξ_i − ξ_j)}] per t.
  std::vector<GramCheck> gram;
};

/// Semi-decision for geometric infinite divisibility of a rational f. A
/// structural match proves it; a negative Gram eigenvalue disproves it;
/// anything else is Unknown. Throws ParameterError for non-rational f and
/// EvaluationError when f vanishes at a test point.
GidReport geometric_id_check(const CharFn& f);

enum class Symmetry { RealValued, Even, None };

/// f_j = 1/(1 + a_j ξ²).
struct LaplaceFactors {
  double a1;
  double a2;
};

/// f_j = 1/(1 − iγ_j ξ + a_j ξ²).
struct DriftedFactors {
  double gamma1;
  double a1;
  double gamma2;
  double a2;
  bool drifts_cancel;      ///< |γ1 + γ2| <= tolerance
  bool scales_sum_to_one;  ///< |a1 + a2 − 1| <= tolerance
};

struct NotGidFactor {
  int factor;  ///< 1 or 2
  std::string reason;
};

using Classification = std::variant<LaplaceFactors, DriftedFactors, NotGidFactor>;

/// Classifies a rational pair with Φ(f1, f2) = 1/(1 + ξ²). Throws
/// PreconditionError when the identity or the claimed symmetry of f1 fails on
/// the grid, and ParameterError for non-rational input.
Classification main_theorem_classify(const CharFn& f1, const CharFn& f2, Symmetry symmetry,
                                     std::span<const double> grid);
Classification main_theorem_classify(const CharFn& f1, const CharFn& f2, Symmetry symmetry);

}  // namespace chfn
