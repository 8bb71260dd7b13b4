#include "chfn/pgf.hpp"

#include <algorithm>
#include <cmath>

#include "chfn/error.hpp"
#include "chfn/lk.hpp"
#include "chfn/rational.hpp"
#include "detail/format.hpp"
#include "detail/series.hpp"

namespace chfn {

using detail::fmt;
using detail::Series;

namespace {

constexpr double kNormalizationTolerance = 1e-12;
constexpr double kImagRootTolerance = 1e-9;
constexpr double kRepeatedRootTolerance = 1e-8;
constexpr double kUnitSlack = 1e-12;
constexpr std::size_t kAffinePoints = 11;
constexpr std::size_t kRecoverPoints = 101;

void check_unit_interval(double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("pgf argument must lie in [0, 1], got " + fmt(z));
}

// Power series of a·η(1 − z) at z = 0, using e^{−s(1−z)} = e^{−s} Σ s^k z^k / k!.
Series exponent_series(const ComposedZ& c, std::size_t n) {
  Series e(n, 0.0);
  const BernsteinFn& eta = c.eta;
  e[0] = eta(1.0);
  if (n > 1) e[1] = -eta.b();
  for (const auto& atom : eta.atoms()) {
    double t = atom.weight * std::exp(-atom.position);  // c e^{−s} s^k / k!
    for (std::size_t k = 1; k < n; ++k) {
      t *= atom.position / static_cast<double>(k);
      e[k] -= t;
    }
  }
  for (auto& v : e) v *= c.a;
  return e;
}

Series composed_series(const ComposedZ& c, std::size_t n) {
  Series s = exponent_series(c, n);
  if (s[0] == 0.0) {
    Series one(n, 0.0);
    one[0] = 1.0;
    return one;
  }
  const CMKernel& L = c.kernel;
  auto negate = [](Series v) {
    for (auto& x : v) x = -x;
    return v;
  };
  auto shift_one = [](Series v) {
    v[0] += 1.0;
    return v;
  };
  switch (L.family()) {
    case CMKernel::Family::Exp: return detail::series_exp(negate(std::move(s)));
    case CMKernel::Family::Kac: return detail::series_pow(shift_one(std::move(s)), -1.0);
    case CMKernel::Family::GammaBeta: {
      for (auto& x : s) x /= L.beta();
      return detail::series_pow(shift_one(std::move(s)), -L.beta());
    }
    case CMKernel::Family::GenLinnik:
      return detail::series_pow(shift_one(detail::series_pow(s, L.beta())), -L.alpha());
    case CMKernel::Family::StableExp:
      return detail::series_exp(negate(detail::series_pow(s, L.beta())));
  }
  return s;
}

Series padded(const RPoly& p, std::size_t n) {
  Series s(n, 0.0);
  for (std::size_t k = 0; k < n && k < p.coeffs().size(); ++k) s[k] = p.coeffs()[k];
  return s;
}

Series power_series(const Series& base, unsigned n) {
  Series result(base.size(), 0.0);
  result[0] = 1.0;
  Series b = base;
  while (n > 0) {
    if (n & 1u) result = detail::series_mul(result, b);
    n >>= 1u;
    if (n > 0) b = detail::series_mul(b, b);
  }
  return result;
}

struct Expanded {
  Series coeffs;
  std::optional<TwoTermBound> bound;
};

Expanded rational_series(const RationalZ& r, std::size_t n) {
  const auto expansion = rational_expansion(r);
  if (!expansion) return {detail::series_div(padded(r.num, n), padded(r.den, n)), std::nullopt};

  Series c(n, 0.0);
  for (std::size_t k = 0; k < n && k < expansion->polynomial.size(); ++k)
    c[k] = expansion->polynomial[k];
  for (std::size_t k = 0; k < n; ++k)
    for (const auto& t : expansion->terms)
      c[k] += t.weight * std::pow(t.ratio, static_cast<double>(k));

  std::optional<TwoTermBound> bound;
  const bool no_poly = std::all_of(expansion->polynomial.begin(), expansion->polynomial.end(),
                                   [](double v) { return v == 0.0; });
  if (no_poly && expansion->terms.size() == 2 && expansion->terms[1].weight < 0.0) {
    const auto& big = expansion->terms[0];
    const auto& small = expansion->terms[1];
    bound = TwoTermBound{big.weight, big.ratio, small.weight, small.ratio};
  }
  return {std::move(c), bound};
}

Series series_of(const PGF& G, std::size_t n) {
  return std::visit(
      [n](const auto& v) -> Series {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RationalZ>)
          return rational_series(v, n).coeffs;
        else if constexpr (std::is_same_v<T, ComposedZ>)
          return composed_series(v, n);
        else
          return power_series(series_of(*v.base, n), v.n);
      },
      G.variant());
}

// Pairwise sum, which keeps the partial mass accurate over thousands of terms.
double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

}  // namespace

// -- Bernstein functions ---------------------------------------------------------

BernsteinFn::BernsteinFn(double b, std::vector<BernsteinAtom> atoms) : b_(b) {
  if (!(b >= 0.0) || !std::isfinite(b))
    throw ParameterError("Bernstein linear coefficient must be >= 0, got " + fmt(b));
  for (const auto& a : atoms) {
    if (!(a.position > 0.0) || !std::isfinite(a.position))
      throw ParameterError("Bernstein atom position must be > 0, got " + fmt(a.position));
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw ParameterError("Bernstein atom weight must be > 0, got " + fmt(a.weight));
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const BernsteinAtom& x, const BernsteinAtom& y) { return x.position < y.position; });
  for (const auto& a : atoms) {
    if (!atoms_.empty() && std::abs(a.position - atoms_.back().position) <= kAtomMergeTolerance)
      atoms_.back().weight += a.weight;
    else
      atoms_.push_back(a);
  }
}

double BernsteinFn::operator()(double u) const {
  double v = b_ * u;
  for (const auto& a : atoms_) v -= a.weight * std::expm1(-u * a.position);
  return v;
}

BernsteinClass bernstein_indecomposable(const BernsteinFn& eta) {
  const bool lin = eta.b() > 0.0;
  const auto n = eta.atoms().size();
  if (!lin && n == 0) return {BernsteinKind::Zero};
  if (lin && n == 0) return {BernsteinKind::Linear};
  if (!lin && n == 1) return {BernsteinKind::ExpAtom, eta.atoms().front().position};
  return {BernsteinKind::Decomposable};
}

const char* to_string(BernsteinKind k) {
  switch (k) {
    case BernsteinKind::Linear: return "linear";
    case BernsteinKind::ExpAtom: return "exp-atom";
    case BernsteinKind::Decomposable: return "decomposable";
    case BernsteinKind::Zero: return "zero";
  }
  return "?";
}

// -- PGF -------------------------------------------------------------------------

PGF::PGF(RationalZ r) {
  if (r.den.is_zero() || r.den(0.0) == 0.0)
    throw InvalidPgfError("pgf denominator vanishes at z = 0");
  const double d1 = r.den(1.0);
  if (d1 == 0.0) throw InvalidPgfError("pgf has a pole at z = 1");
  const double g1 = r.num(1.0) / d1;
  if (!(std::abs(g1 - 1.0) <= kNormalizationTolerance))
    throw InvalidPgfError("pgf must equal 1 at z = 1, got " + fmt(g1));
  v_ = std::move(r);
}

PGF::PGF(ComposedZ c) {
  if (!(c.a >= 0.0) || !std::isfinite(c.a))
    throw ParameterError("composed pgf needs a >= 0, got " + fmt(c.a));
  v_ = std::move(c);
}

PGF::PGF(PowerOf p) {
  if (!p.base) throw ParameterError("PowerOf needs a base pgf");
  if (p.n == 0) throw ParameterError("PowerOf needs n >= 1");
  v_ = std::move(p);
}

PGF PGF::power(const PGF& base, unsigned n) {
  return PGF(PowerOf{std::make_shared<const PGF>(base), n});
}

PGF PGF::geometric(double mu) {
  return PGF(ComposedZ{CMKernel::kac(), mu, BernsteinFn::linear(1.0)});
}

double pgf_eval(const PGF& G, double z) {
  check_unit_interval(z);
  return std::visit(
      [z](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RationalZ>) {
          const double d = v.den(z);
          if (d == 0.0) throw EvaluationError("pgf pole at z = " + fmt(z));
          const double g = v.num(z) / d;
          // Rounding can push a normalized rational a few ulp above 1.
          return g > 1.0 && g <= 1.0 + kNormalizationTolerance ? 1.0 : g;
        } else if constexpr (std::is_same_v<T, ComposedZ>) {
          return kernel_eval(v.kernel, v.a * v.eta(1.0 - z));
        } else {
          return std::pow(pgf_eval(*v.base, z), static_cast<double>(v.n));
        }
      },
      G.variant());
}

double phi_real(const PhiOp& op, double x, double y) {
  if (!(x > 0.0) || !(y > 0.0))
    throw DomainError("pgf operation needs positive arguments, got " + fmt(x) + ", " + fmt(y));
  const CMKernel& L = op.kernel();
  double base = 0.0;
  double power = 1.0;
  switch (L.family()) {
    case CMKernel::Family::Kac: base = 1.0 / x + 1.0 / y - 1.0; break;
    case CMKernel::Family::GammaBeta:
      power = L.beta();
      base = std::pow(x, -1.0 / power) + std::pow(y, -1.0 / power) - 1.0;
      break;
    default: return phi_L(L, x, y);
  }
  if (!(base > 0.0)) throw DomainError("pgf operation undefined: base " + fmt(base) + " <= 0");
  return std::pow(base, -power);
}

double pgf_phi(const PhiOp& op, const PGF& G1, const PGF& G2, double z) {
  return phi_real(op, pgf_eval(G1, z), pgf_eval(G2, z));
}

// -- coefficients ----------------------------------------------------------------

double TwoTermBound::lower(std::size_t k) const {
  return std::pow(p, static_cast<double>(k)) * (A + B);
}

std::optional<RationalExpansion> rational_expansion(const RationalZ& r) {
  RationalExpansion out;
  if (r.num.is_zero()) return out;
  const int deg = r.den.degree();
  if (deg == 0) {
    for (double c : r.num.coeffs()) out.polynomial.push_back(c / r.den.coeff(0));
    return out;
  }
  const auto roots = real_poly_roots(r.den);
  for (const cplx& z : roots)
    if (std::abs(z) <= 1.0)
      throw InvalidPgfError("pgf has a pole inside the closed unit disc at z = " + fmt(z));
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) <= kRepeatedRootTolerance * std::abs(roots[i]))
        throw MultiplicityError("repeated pgf pole at z = " + fmt(roots[i]));
  for (const cplx& z : roots)
    if (std::abs(z.imag()) > kImagRootTolerance * std::abs(z)) return std::nullopt;

  auto [quo, rem] = divmod(r.num, r.den);
  out.polynomial = quo.coeffs();
  const RPoly dden = r.den.derivative();
  for (const cplx& root : roots) {
    const double z = root.real();
    // rem/(den) ∋ res/(z − z_k) = −(res/z_k) Σ (z/z_k)^n.
    out.terms.push_back({-rem(z) / (z * dden(z)), 1.0 / z});
  }
  std::sort(out.terms.begin(), out.terms.end(),
            [](const GeometricTerm& a, const GeometricTerm& b) { return a.ratio > b.ratio; });
  return out;
}

CoefficientSeries coefficients(const PGF& G, std::size_t N) {
  if (N < 1) throw ParameterError("coefficients need N >= 1");
  CoefficientSeries out;
  if (const auto* r = std::get_if<RationalZ>(&G.variant())) {
    auto e = rational_series(*r, N + 1);
    out.coeffs = std::move(e.coeffs);
    out.report.bound = e.bound;
  } else {
    out.coeffs = series_of(G, N + 1);
  }

  NonnegReport& rep = out.report;
  const auto& c = out.coeffs;
  rep.min_coeff = c[0];
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] < rep.min_coeff) {
      rep.min_coeff = c[k];
      rep.argmin = k;
    }
    if (c[k] < rep.floor) rep.negative.push_back(k);
    if (rep.bound && c[k] < rep.bound->lower(k)) rep.bound_holds = false;
  }
  rep.partial_sum = pairwise_sum(c.data(), c.size());
  rep.mass_ok = rep.partial_sum <= 1.0 - rep.floor;
  rep.pass = rep.negative.empty() && rep.bound_holds && rep.mass_ok;
  return out;
}

// -- counterexample ----------------------------------------------------------------

DiscreteCounterexample discrete_counterexample(double lambda, double theta, unsigned n) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ParameterError("lambda must be > 0, got " + fmt(lambda));
  if (!(theta > 0.0 && theta < 0.5))
    throw ParameterError("theta must lie in (0, 1/2), got " + fmt(theta));
  if (n == 0) throw ParameterError("n must be >= 1");

  const double m = lambda / n;
  const double s = theta * m;
  // G1 = (2 + s w) / (2 (1 + s w)) and G2 = (2 + s w) / (2 + 2 m w + θ m² w²), w = 1 − z.
  const RPoly g1_num{2.0 + s, -s};
  const RPoly g1_den{2.0 + 2.0 * s, -2.0 * s};
  const double q2 = theta * m * m;
  const RPoly g2_num{2.0 + s, -s};
  const RPoly g2_den{2.0 + 2.0 * m + q2, -2.0 * m - 2.0 * q2, q2};
  PGF g1(RationalZ{g1_num, g1_den});
  PGF g2(RationalZ{g2_num, g2_den});

  if (n == 1) return {std::move(g1), std::move(g2), PGF::geometric(lambda), PhiOp::kac()};
  return {PGF::power(g1, n), PGF::power(g2, n),
          PGF(ComposedZ{CMKernel::gamma_beta(n), lambda, BernsteinFn::linear(1.0)}),
          PhiOp::power(n)};
}

AffinenessReport affineness_test(const PGF& G, unsigned n) {
  if (n == 0) throw ParameterError("affineness test needs n >= 1");
  const auto zs = linspace(0.0, 1.0, kAffinePoints);
  std::vector<double> w, y;
  for (double z : zs) {
    w.push_back(1.0 - z);
    y.push_back(std::pow(pgf_eval(G, z), -1.0 / n) - 1.0);
  }
  // Least squares y ≈ α + β w.
  const double k = static_cast<double>(zs.size());
  double sw = 0.0, sy = 0.0, sww = 0.0, swy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    sw += w[i];
    sy += y[i];
    sww += w[i] * w[i];
    swy += w[i] * y[i];
    syy += y[i] * y[i];
  }
  const double beta = (k * swy - sw * sy) / (k * sww - sw * sw);
  const double alpha = (sy - beta * sw) / k;
  double res = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const double d = y[i] - alpha - beta * w[i];
    res += d * d;
  }
  const double residual = syy > 0.0 ? std::sqrt(res / syy) : 0.0;
  return {residual, !(residual > kAffineTolerance)};
}

FactorFit discrete_factor_recover(const CMKernel& L, const BernsteinFn& eta, const PGF& G) {
  const auto kind = bernstein_indecomposable(eta).kind;
  if (kind == BernsteinKind::Decomposable || kind == BernsteinKind::Zero)
    throw PreconditionError(
        std::string("discrete_factor_recover needs an indecomposable eta, got ") + to_string(kind));

  const auto zs = linspace(0.0, 1.0, kRecoverPoints);
  const auto* stored = std::get_if<ComposedZ>(&G.variant());
  const bool use_stored = stored && stored->kernel == L;
  double num = 0.0, den = 0.0, norm = 0.0;
  std::vector<double> target, basis;
  for (double z : zs) {
    const double u = 1.0 - z;
    const double t = use_stored ? stored->a * stored->eta(u) : kernel_inverse(L, pgf_eval(G, z));
    const double e = eta(u);
    target.push_back(t);
    basis.push_back(e);
    num += t * e;
    den += e * e;
    norm += t * t;
  }
  const double a = num / den;
  double res = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const double d = target[i] - a * basis[i];
    res += d * d;
  }
  const double residual = norm > 0.0 ? std::sqrt(res / norm) : 0.0;
  if (!(residual < kFactorResidualTolerance))
    throw StructureError(
        "pgf exponent is not a multiple of eta (relative residual " + fmt(residual) + ")",
        residual);
  if (a < -kUnitSlack || a > 1.0 + kUnitSlack)
    throw StructureError("fitted factor a = " + fmt(a) + " lies outside [0, 1]", residual);
  return {std::clamp(a, 0.0, 1.0), residual};
}

}  // namespace chfn
