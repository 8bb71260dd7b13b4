#include "chfn/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chfn/error.hpp"

namespace chfn {

using namespace std::complex_literals;

namespace {

constexpr double kNormalizationTolerance = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void check_normalized(cplx at_zero, const char* what) {
  if (std::abs(at_zero - 1.0) > kNormalizationTolerance)
    throw ParameterError(std::string(what) + " must equal 1 at xi = 0");
}

cplx int_pow(cplx z, unsigned n) {
  cplx r = 1.0;
  while (n > 0) {
    if (n & 1u) r *= z;
    n >>= 1u;
    if (n > 0) z *= z;
  }
  return r;
}

bool is_integer(double p) {
  return std::isfinite(p) && p == std::floor(p) && std::abs(p) < 1e6;
}

cplx rational_power(cplx base, double power) {
  if (is_integer(power)) {
    const auto n = static_cast<unsigned>(std::abs(power));
    const cplx v = int_pow(base, n);
    return power >= 0 ? v : 1.0 / v;
  }
  if (base == cplx{}) throw EvaluationError("non-integer power of zero");
  return std::exp(power * std::log(base));
}

// Polynomial form of scale·ψ for an atom-free exponent, if it has one.
std::optional<CPoly> exponent_polynomial(const Exponent& e, double scale) {
  if (const auto* s = std::get_if<LKExponent>(&e)) {
    if (!s->atoms().empty()) return std::nullopt;
    return CPoly{0.0, 0.0, 0.5 * s->sigma2() * scale};
  }
  const auto& d = std::get<DriftedLKExponent>(e);
  if (!d.atoms().empty()) return std::nullopt;
  return CPoly{0.0, -1i * d.gamma() * scale, 0.5 * d.sigma2() * scale};
}

}  // namespace

Tabulated::Tabulated(std::vector<double> grid, std::vector<cplx> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() != values_.size() || grid_.size() < 2)
    throw ParameterError("tabulated function needs >= 2 grid points and matching values");
  for (std::size_t i = 1; i < grid_.size(); ++i)
    if (!(grid_[i] > grid_[i - 1])) throw ParameterError("tabulated grid must be increasing");
  if (grid_.front() <= 0.0 && grid_.back() >= 0.0) check_normalized((*this)(0.0), "tabulated f");
}

cplx Tabulated::operator()(double xi) const {
  if (!(xi >= grid_.front() && xi <= grid_.back()))
    throw RangeError("xi = " + fmt(xi) + " outside tabulated range [" + fmt(grid_.front()) + ", " +
                     fmt(grid_.back()) + "]");
  auto it = std::upper_bound(grid_.begin(), grid_.end(), xi);
  if (it == grid_.end()) return values_.back();
  const auto hi = static_cast<std::size_t>(it - grid_.begin());
  const auto lo = hi - 1;
  const double t = (xi - grid_[lo]) / (grid_[hi] - grid_[lo]);
  return values_[lo] + t * (values_[hi] - values_[lo]);
}

CharFn::CharFn(ComplexRational r) : v_(std::move(r)) {
  check_normalized(std::get<ComplexRational>(v_).num().coeff(0), "rational f");
}

CharFn::CharFn(Composed c) : v_(std::move(c)) {
  const auto& comp = std::get<Composed>(v_);
  if (!(comp.scale >= 0.0) || !std::isfinite(comp.scale))
    throw ParameterError("composition scale must be >= 0, got " + fmt(comp.scale));
}

CharFn::CharFn(RationalPower p) : v_(std::move(p)) {
  const auto& rp = std::get<RationalPower>(v_);
  if (!std::isfinite(rp.power)) throw ParameterError("power must be finite");
  check_normalized(rp.base(0.0), "power base");
}

CharFn CharFn::laplace(double a) {
  if (!(a >= 0.0)) throw ParameterError("Laplace parameter must be >= 0, got " + fmt(a));
  return Composed{CMKernel::kac(), a, LKExponent::quadratic(1.0)};
}

CharFn CharFn::gaussian(double c) {
  if (!(c >= 0.0)) throw ParameterError("Gaussian parameter must be >= 0, got " + fmt(c));
  return Composed{CMKernel::exp(), c, LKExponent::quadratic(1.0)};
}

cplx eval_cf(const CharFn& f, double xi) {
  return std::visit(
      [xi](const auto& v) -> cplx {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ComplexRational>) {
          return v(xi);
        } else if constexpr (std::is_same_v<T, Composed>) {
          if (v.scale == 0.0) return 1.0;
          if (const auto* s = std::get_if<LKExponent>(&v.exponent))
            return kernel_eval(v.kernel, v.scale * lk_eval(*s, xi));
          return kernel_eval(v.kernel, v.scale * lk_eval(v.exponent, xi));
        } else if constexpr (std::is_same_v<T, RationalPower>) {
          return rational_power(v.base(xi), v.power);
        } else {
          return v(xi);
        }
      },
      f.variant());
}

std::optional<ComplexRational> to_rational(const CharFn& f) {
  if (const auto* r = f.rational()) return *r;
  if (const auto* rp = std::get_if<RationalPower>(&f.variant())) {
    if (!is_integer(rp->power)) return std::nullopt;
    const auto n = static_cast<unsigned>(std::abs(rp->power));
    const auto p = rp->base.pow(n);
    return rp->power >= 0 ? p : p.reciprocal();
  }
  if (const auto* c = f.composed()) {
    const auto fam = c->kernel.family();
    double beta = 1.0;
    if (fam == CMKernel::Family::GammaBeta) {
      beta = c->kernel.beta();
      if (!is_integer(beta)) return std::nullopt;
    } else if (fam != CMKernel::Family::Kac) {
      return std::nullopt;
    }
    auto s = exponent_polynomial(c->exponent, c->scale);
    if (!s) return std::nullopt;
    const CPoly base = CPoly::constant(1.0) + (*s) * cplx(1.0 / beta);
    return ComplexRational(CPoly::constant(1.0), base.pow(static_cast<unsigned>(beta)));
  }
  return std::nullopt;
}

cplx PhiOp::operator()(cplx x, cplx y) const {
  const auto fam = kernel_.family();
  if (fam == CMKernel::Family::Kac || fam == CMKernel::Family::GammaBeta)
    return phi_L(kernel_, x, y);
  auto real_of = [](cplx v) {
    if (std::abs(v.imag()) > 1e-14 * std::max(1.0, std::abs(v)))
      throw DomainError("Phi_L for this kernel needs real arguments");
    return v.real();
  };
  return phi_L(kernel_, real_of(x), real_of(y));
}

std::string PhiOp::name() const {
  if (kernel_.family() == CMKernel::Family::Kac) return "kac";
  if (kernel_.family() == CMKernel::Family::GammaBeta)
    return "phi-beta(" + fmt(kernel_.beta()) + ")";
  return "phi-L(" + kernel_.name() + ")";
}

VerificationReport verify_identity(const CharFn& f1, const CharFn& f2, const CharFn& target,
                                   std::span<const double> grid, const PhiOp& op,
                                   double tolerance) {
  VerificationReport rep;
  rep.tolerance = tolerance;
  rep.points.reserve(grid.size());
  for (double xi : grid) {
    try {
      IdentityPoint p{xi, eval_cf(f1, xi), eval_cf(f2, xi), eval_cf(target, xi), {}, 0.0};
      p.combined = op(p.f1, p.f2);
      p.residual = std::abs(p.combined - p.target);
      rep.max_residual = std::max(rep.max_residual, p.residual);
      rep.points.push_back(p);
    } catch (const Error& e) {
      rep.failures.push_back({xi, e.what()});
    }
  }
  rep.pass = rep.failures.empty() && !rep.points.empty() && rep.max_residual < tolerance;
  return rep;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw ParameterError("linspace needs at least 2 points");
  std::vector<double> g(n);
  const double last = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * (static_cast<double>(i) / last);
  g.back() = hi;
  return g;
}

std::vector<double> default_grid() {
  return linspace(-20.0, 20.0, 401);
}

double gamma_drift_bound(double beta, double a1, double a2) {
  if (beta <= 2.0) return std::numeric_limits<double>::infinity();
  return 2.0 * std::sqrt(beta) * std::tan(std::numbers::pi / beta) *
         std::min(std::sqrt(a1), std::sqrt(a2));
}

namespace {

// (2 + s θ ξ²) / (2 (1 + s θ ξ²))  and  (2 + sθξ²) / (2 + 2sξ² + θ s² ξ⁴).
std::pair<ComplexRational, ComplexRational> mixture_pair(double theta, double s) {
  const CPoly top{2.0, 0.0, theta * s};
  ComplexRational u1(top, CPoly{2.0, 0.0, 2.0 * theta * s});
  ComplexRational u2(top, CPoly{2.0, 0.0, 2.0 * s, 0.0, theta * s * s});
  return {u1, u2};
}

Counterexample build(const ExpDifference&) {
  ComplexRational f1(CPoly{1.0}, CPoly{1.0, -0.5i, 0.5});
  ComplexRational f2(CPoly{1.0}, CPoly{1.0, 0.5i, 0.5});
  return {f1, f2, CharFn::laplace(1.0), PhiOp::kac()};
}

Counterexample build(const SignedMixture& k) {
  if (!(k.a > 0.0 && k.a < 0.5))
    throw ParameterError("SignedMixture needs 0 < a < 1/2, got a = " + fmt(k.a));
  auto [f1, f2] = mixture_pair(k.a, 1.0);
  return {f1, f2, CharFn::laplace(1.0), PhiOp::kac()};
}

Counterexample build(const GammaDrift& k) {
  if (!(k.beta > 0.0) || !std::isfinite(k.beta))
    throw ParameterError("GammaDrift needs beta > 0, got " + fmt(k.beta));
  if (!(k.a1 > 0.0)) throw ParameterError("GammaDrift needs a1 > 0, got " + fmt(k.a1));
  if (!(k.a2 > 0.0)) throw ParameterError("GammaDrift needs a2 > 0, got " + fmt(k.a2));
  if (k.b == 0.0 || !std::isfinite(k.b))
    throw ParameterError("GammaDrift needs b != 0, got " + fmt(k.b));
  const double bound = gamma_drift_bound(k.beta, k.a1, k.a2);
  if (!(std::abs(k.b) < bound))
    throw AdmissibilityError(
        "GammaDrift branch condition violated: |b| = " + fmt(std::abs(k.b)) +
            " must be < 2 sqrt(beta) tan(pi/beta) min(sqrt(a1), sqrt(a2)) = " + fmt(bound),
        bound);
  const auto L = CMKernel::gamma_beta(k.beta);
  Composed f1{L, 1.0, DriftedLKExponent(k.b, 2.0 * k.a1, {})};
  Composed f2{L, 1.0, DriftedLKExponent(-k.b, 2.0 * k.a2, {})};
  Composed target{L, k.a1 + k.a2, LKExponent::quadratic(1.0)};
  return {f1, f2, target, PhiOp::beta(k.beta)};
}

Counterexample build(const PowerFamily& k) {
  if (!(k.a > 0.0)) throw ParameterError("PowerFamily needs a > 0, got " + fmt(k.a));
  if (k.n < 1) throw ParameterError("PowerFamily needs n >= 1");
  if (!(k.theta > 0.0 && k.theta < 0.5))
    throw ParameterError("PowerFamily needs 0 < theta < 1/2, got theta = " + fmt(k.theta));
  const double n = static_cast<double>(k.n);
  auto [u1, u2] = mixture_pair(k.theta, k.a / n);
  Composed target{CMKernel::gamma_beta(n), k.a, LKExponent::quadratic(1.0)};
  return {RationalPower{u1, n}, RationalPower{u2, n}, target, PhiOp::power(k.n)};
}

}  // namespace

Counterexample make_counterexample(const CounterexampleKind& kind) {
  return std::visit([](const auto& k) { return build(k); }, kind);
}

BranchReport principal_branch_check(double beta, double a, double b, std::span<const double> grid) {
  if (!(beta > 0.0)) throw ParameterError("principal_branch_check needs beta > 0");
  if (!(a > 0.0)) throw ParameterError("principal_branch_check needs a > 0");
  BranchReport r;
  r.limit = std::numbers::pi / beta;
  r.maximizer = std::sqrt(beta / a);
  r.analytic_max_arg = std::atan(std::abs(b) / (2.0 * std::sqrt(a * beta)));
  for (double xi : grid) {
    const cplx w = 1.0 + (a * xi * xi - 1i * b * xi) / beta;
    r.grid_max_arg = std::max(r.grid_max_arg, std::abs(std::arg(w)));
    const cplx f = std::exp(-beta * std::log(w));
    const cplx back = std::exp(-std::log(f) / beta);
    r.roundtrip_error = std::max(r.roundtrip_error, std::abs(back - w) / std::abs(w));
  }
  r.branch_ok = r.grid_max_arg < r.limit && r.analytic_max_arg < r.limit;
  r.roundtrip_ok = r.roundtrip_error <= 1e-12;
  r.pass = r.branch_ok && r.roundtrip_ok;
  return r;
}

double shrinking_drift(double beta) {
  return std::min(1.0, std::sqrt(beta) * std::tan(std::numbers::pi / std::max(beta, 2.01)));
}

LimitReport gaussian_limit_scan(const LimitScanSpec& spec, std::span<const double> grid,
                                double threshold, std::size_t monotone_from) {
  LimitReport rep;
  rep.threshold = threshold;
  auto sup_gap = [&](const CharFn& f, const CharFn& g) {
    double m = 0.0;
    for (double xi : grid) m = std::max(m, std::abs(eval_cf(f, xi) - eval_cf(g, xi)));
    return m;
  };
  if (const auto* p = std::get_if<PowerFamilyScan>(&spec)) {
    const auto g1 = CharFn::gaussian(0.5 * p->theta * p->a);
    const auto g2 = CharFn::gaussian((1.0 - 0.5 * p->theta) * p->a);
    for (unsigned n : p->n_values) {
      const auto ce = make_counterexample(PowerFamily{p->a, n, p->theta});
      const double s1 = sup_gap(ce.f1, g1), s2 = sup_gap(ce.f2, g2);
      rep.entries.push_back({static_cast<double>(n), s1, s2, std::max(s1, s2)});
    }
  } else {
    const auto& g = std::get<GammaDriftScan>(spec);
    if (g.drifts.size() != g.betas.size())
      throw ParameterError("GammaDrift scan needs one drift per beta");
    const auto g1 = CharFn::gaussian(g.a1);
    const auto g2 = CharFn::gaussian(g.a2);
    for (std::size_t i = 0; i < g.betas.size(); ++i) {
      const auto ce = make_counterexample(GammaDrift{g.betas[i], g.a1, g.a2, g.drifts[i]});
      const double s1 = sup_gap(ce.f1, g1), s2 = sup_gap(ce.f2, g2);
      rep.entries.push_back({g.betas[i], s1, s2, std::max(s1, s2)});
    }
  }
  rep.non_increasing = true;
  for (std::size_t i = monotone_from + 1; i < rep.entries.size(); ++i)
    if (rep.entries[i].sup > rep.entries[i - 1].sup) rep.non_increasing = false;
  rep.final_sup = rep.entries.empty() ? 0.0 : rep.entries.back().sup;
  rep.pass = !rep.entries.empty() && rep.non_increasing && rep.final_sup < threshold;
  return rep;
}

}  // namespace chfn
