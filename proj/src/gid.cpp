#include "chfn/gid.hpp"

#include <array>
#include <cmath>

#include "chfn/error.hpp"
#include "chfn/rng.hpp"
#include "detail/format.hpp"
#include "detail/hermitian.hpp"

namespace chfn {

using detail::fmt;

namespace {

constexpr std::array kGramTimes{0.1, 0.5, 1.0, 2.0};
constexpr std::size_t kGramPoints = 16;
constexpr double kGramHalfWidth = 5.0;
constexpr std::uint64_t kGramSeed = 0x6a09e667f3bcc908ULL;
constexpr double kGramFloor = -1e-10;

ComplexRational require_rational(const CharFn& f, const char* what) {
  auto r = to_rational(f);
  if (!r) throw ParameterError(std::string(what) + " has no exact rational form");
  return *std::move(r);
}

cplx exponent_at(const ComplexRational& f, double xi) {
  const cplx v = f(xi);
  if (v == cplx{}) throw EvaluationError("f vanishes at xi = " + fmt(xi));
  return 1.0 / v - 1.0;
}

std::vector<GramCheck> gram_checks(const ComplexRational& f) {
  Rng rng(kGramSeed, 0);
  std::vector<double> pts(kGramPoints);
  for (auto& p : pts) p = kGramHalfWidth * (2.0 * rng.uniform() - 1.0);

  Eigen::MatrixXcd psi(kGramPoints, kGramPoints);
  for (std::size_t i = 0; i < kGramPoints; ++i)
    for (std::size_t j = 0; j <= i; ++j) psi(i, j) = exponent_at(f, pts[i] - pts[j]);

  std::vector<GramCheck> out;
  for (double t : kGramTimes) {
    Eigen::MatrixXcd m(kGramPoints, kGramPoints);
    for (std::size_t i = 0; i < kGramPoints; ++i)
      for (std::size_t j = 0; j <= i; ++j) m(i, j) = std::exp(-t * psi(i, j));
    out.push_back({t, detail::hermitian_min_eig(m)});
  }
  return out;
}

bool near(double x, double y, double tol) {
  return std::abs(x - y) <= tol;
}

}  // namespace

const char* to_string(GidVerdict v) {
  switch (v) {
    case GidVerdict::Gid: return "gid";
    case GidVerdict::NotGid: return "not-gid";
    case GidVerdict::Unknown: return "unknown";
  }
  return "?";
}

std::optional<DriftedQuadratic> drifted_quadratic(const ComplexRational& f) {
  const ComplexRational psi = f.reciprocal() - ComplexRational::constant(1.0);
  if (psi.den().degree() > 0) return std::nullopt;
  const CPoly& p = psi.num();
  const double scale = p.max_abs_coeff();
  if (scale == 0.0) return DriftedQuadratic{0.0, 0.0};
  const double tol = kCoefficientTolerance * scale;
  for (int k = 3; k <= p.degree(); ++k)
    if (std::abs(p.coeff(k)) > tol) return std::nullopt;
  const cplx c0 = p.coeff(0), c1 = p.coeff(1), c2 = p.coeff(2);
  if (std::abs(c0) > tol || std::abs(c1.real()) > tol || std::abs(c2.imag()) > tol)
    return std::nullopt;
  if (c2.real() < -tol) return std::nullopt;
  return DriftedQuadratic{-c1.imag(), std::max(c2.real(), 0.0)};
}

GidReport geometric_id_check(const CharFn& f) {
  const ComplexRational r = require_rational(f, "geometric_id_check input");
  GidReport rep;
  rep.gram = gram_checks(r);
  rep.form = drifted_quadratic(r);
  if (rep.form) {
    rep.verdict = GidVerdict::Gid;
    rep.reason = "1/f - 1 = -i*gamma*xi + a*xi^2";
    return rep;
  }
  for (const auto& g : rep.gram) {
    if (g.min_eig < kGramFloor) {
      rep.verdict = GidVerdict::NotGid;
      rep.reason = "exp(-t*psi) is not positive definite at t = " + fmt(g.t) + " (min eigenvalue " +
                   fmt(g.min_eig) + ")";
      return rep;
    }
  }
  rep.verdict = GidVerdict::Unknown;
  rep.reason = "1/f - 1 is not a drifted quadratic; Gram test inconclusive";
  return rep;
}

Classification main_theorem_classify(const CharFn& f1, const CharFn& f2, Symmetry symmetry,
                                     std::span<const double> grid) {
  const ComplexRational r1 = require_rational(f1, "f1");
  const ComplexRational r2 = require_rational(f2, "f2");

  const auto check = verify_identity(f1, f2, CharFn::laplace(1.0), grid, PhiOp::kac());
  if (!check.pass)
    throw PreconditionError("Phi(f1, f2) = 1/(1 + xi^2) fails on the grid (max residual " +
                            fmt(check.max_residual) + ")");

  for (double xi : grid) {
    const cplx v = r1(xi);
    if (symmetry == Symmetry::RealValued && std::abs(v.imag()) > kCoefficientTolerance)
      throw PreconditionError("f1 is not real-valued at xi = " + fmt(xi));
    if (symmetry == Symmetry::Even && std::abs(v - r1(-xi)) > kCoefficientTolerance)
      throw PreconditionError("f1 is not even at xi = " + fmt(xi));
  }

  const auto q1 = drifted_quadratic(r1);
  if (!q1) return NotGidFactor{1, "1/f1 - 1 is not of the form -i*gamma*xi + a*xi^2"};
  const auto q2 = drifted_quadratic(r2);
  if (!q2) return NotGidFactor{2, "1/f2 - 1 is not of the form -i*gamma*xi + a*xi^2"};

  auto zeroed = [](double g) { return std::abs(g) < kCoefficientTolerance ? 0.0 : g; };
  const double g1 = zeroed(q1->gamma), g2 = zeroed(q2->gamma);
  if (symmetry != Symmetry::None) {
    if (g1 != 0.0 || g2 != 0.0)
      throw StructureError("symmetric f1 but nonzero drift", std::max(std::abs(g1), std::abs(g2)));
    return LaplaceFactors{q1->a, q2->a};
  }
  return DriftedFactors{g1,
                        q1->a,
                        g2,
                        q2->a,
                        near(g1 + g2, 0.0, kCoefficientTolerance),
                        near(q1->a + q2->a, 1.0, kCoefficientTolerance)};
}

Classification main_theorem_classify(const CharFn& f1, const CharFn& f2, Symmetry symmetry) {
  const auto grid = default_grid();
  return main_theorem_classify(f1, f2, symmetry, grid);
}

}  // namespace chfn
