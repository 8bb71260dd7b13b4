#include "chfn/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <thread>

#include <gsl/gsl_sf_expint.h>

#include "chfn/error.hpp"
#include "detail/format.hpp"
#include "detail/hermitian.hpp"

namespace chfn {

using detail::fmt;

namespace {

constexpr double kImagRootTolerance = 1e-9;
constexpr double kRepeatedRootTolerance = 1e-8;
constexpr std::size_t kPositivityPoints = 2001;

constexpr double kCutoffStart = 1.0;
constexpr double kCutoffMax = 1e5;
constexpr double kCutoffLevel = 1e-8;
constexpr std::size_t kMinPanels = 4096;
// Aliased copies of the density sit at least this far from every x.
constexpr double kAliasMargin = 60.0;
constexpr std::size_t kAnchorStride = 64;

struct EvenParts {
  RPoly num;  // in u = ξ²
  RPoly den;
};

EvenParts even_parts(const ComplexRational& f) {
  if (!f.is_real_even())
    throw ParameterError("rational characteristic function is not real and even");
  auto halve = [](const CPoly& p) {
    std::vector<double> c;
    for (int k = 0; k <= p.degree(); k += 2) c.push_back(p.coeff(k).real());
    return RPoly(std::move(c));
  };
  return {halve(f.num()), halve(f.den())};
}

std::vector<PoleTerm> pole_terms(const RPoly& num, const RPoly& den) {
  if (num.is_zero()) return {};
  if (num.degree() >= den.degree())
    throw ParameterError("partial fractions need a strictly proper rational");
  const auto roots = real_poly_roots(den);
  const RPoly dden = den.derivative();
  std::vector<PoleTerm> out;
  for (const cplx& u : roots) {
    if (std::abs(u.imag()) > kImagRootTolerance * std::max(1.0, std::abs(u)))
      throw ConjugatePairError("denominator has a complex root u = " + fmt(u) +
                               " in xi^2; not a Laplace mixture");
    const double lambda = -u.real();
    if (!(lambda > 0.0)) throw ParameterError("pole on the real line at xi^2 = " + fmt(u.real()));
    out.push_back({num(-lambda) / dden(-lambda), lambda});
  }
  std::sort(out.begin(), out.end(),
            [](const PoleTerm& a, const PoleTerm& b) { return a.lambda < b.lambda; });
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].lambda - out[i - 1].lambda <= kRepeatedRootTolerance * out[i].lambda)
      throw MultiplicityError("repeated pole at xi^2 = " + fmt(-out[i].lambda));
  return out;
}

// Sum of v[0, n) by recursive halving.
double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

// ∫_1^∞ cos(ωs) s^{−k} ds and ∫_1^∞ sin(ωs) s^{−k} ds, k >= 1.
std::pair<double, double> tail_integrals(int k, double omega) {
  if (omega == 0.0) {
    if (k == 1) return {std::numeric_limits<double>::infinity(), 0.0};
    return {1.0 / (k - 1), 0.0};
  }
  const double w = std::abs(omega);
  double ic = -gsl_sf_Ci(w);
  double is = std::numbers::pi / 2.0 - gsl_sf_Si(w);
  const double c = std::cos(w), s = std::sin(w);
  for (int j = 2; j <= k; ++j) {
    const double m = 1.0 / (j - 1);
    const double next_c = m * (c - w * is);
    const double next_s = m * (s + w * ic);
    ic = next_c;
    is = next_s;
  }
  return {ic, omega < 0.0 ? -is : is};
}

struct Asymptote {
  cplx coeff;  // f(ξ) ~ coeff·ξ^{−order}, ξ → +∞
  int order;
};

}  // namespace

std::vector<PoleTerm> partial_fractions_even(const ComplexRational& f) {
  const auto [num, den] = even_parts(f);
  return pole_terms(num, den);
}

double DensityTerm::operator()(double x) const {
  return weight / (2.0 * rate) * std::exp(-rate * std::abs(x));
}

double DensityMixture::density(double x) const {
  double s = 0.0;
  for (const auto& t : terms) s += t(x);
  return s;
}

double DensityMixture::mass() const {
  double s = atom0;
  for (const auto& t : terms) s += t.mass();
  return s;
}

double DensityMixture::cdf(double x) const {
  double s = x >= 0.0 ? atom0 : 0.0;
  for (const auto& t : terms) {
    const double tail = 0.5 * t.mass() * std::exp(-t.rate * std::abs(x));
    s += x < 0.0 ? tail : t.mass() - tail;
  }
  return s;
}

double DensityMixture::min_rate() const {
  if (terms.empty()) throw ParameterError("mixture has no continuous terms");
  double r = terms.front().rate;
  for (const auto& t : terms) r = std::min(r, t.rate);
  return r;
}

DensityMixture density_from_even_rational(const CharFn& f) {
  const auto r = to_rational(f);
  if (!r)
    throw ParameterError("density_from_even_rational needs a rational characteristic function");
  auto [num, den] = even_parts(*r);
  if (num.degree() > den.degree())
    throw ParameterError("numerator degree exceeds denominator degree; not integrable");
  DensityMixture out;
  if (num.degree() == den.degree()) {
    out.atom0 = num.leading() / den.leading();
    std::vector<double> c = (num - den * out.atom0).coeffs();
    c.resize(static_cast<std::size_t>(den.degree()));
    num = RPoly(std::move(c));
  }
  for (const auto& t : pole_terms(num, den)) out.terms.push_back({t.weight, std::sqrt(t.lambda)});
  return out;
}

std::vector<double> positivity_grid(const DensityMixture& p) {
  const double hi = p.terms.empty() ? 1.0 : 10.0 / p.min_rate();
  return linspace(0.0, hi, kPositivityPoints);
}

PositivityReport positivity_report(const DensityMixture& p, std::span<const double> grid) {
  PositivityReport rep;
  rep.min_value = std::numeric_limits<double>::infinity();
  for (double x : grid) {
    const double v = p.density(x);
    if (v < rep.min_value) {
      rep.min_value = v;
      rep.argmin = x;
    }
  }
  if (p.terms.size() == 2) {
    // Terms are sorted by rate, slowest first.
    const auto& slow = p.terms[0];
    const auto& fast = p.terms[1];
    if (slow.weight > 0.0 && fast.weight < 0.0)
      rep.analytic_bound = slow.weight / (2.0 * slow.rate) + fast.weight / (2.0 * fast.rate);
  }
  rep.pass = rep.min_value >= rep.threshold && p.atom0 >= rep.threshold;
  return rep;
}

PositivityReport positivity_report(const DensityMixture& p) {
  const auto grid = positivity_grid(p);
  return positivity_report(p, grid);
}

TabulatedDensity numeric_inversion(const CharFn& f, std::span<const double> xs) {
  TabulatedDensity out;
  out.x.assign(xs.begin(), xs.end());
  out.p.assign(xs.size(), 0.0);

  std::function<cplx(double)> fx = [&f](double xi) { return eval_cf(f, xi); };
  std::optional<Asymptote> asym;
  if (auto r = to_rational(f)) {
    // Split off the constant at infinity, then integrate the strictly proper
    // remainder and add its tail beyond the cutoff in closed form.
    CPoly num = r->num();
    const CPoly& den = r->den();
    if (num.degree() > den.degree())
      throw ParameterError("numerator degree exceeds denominator degree; not integrable");
    if (num.degree() == den.degree()) {
      const cplx c = num.leading() / den.leading();
      out.atom0 = c.real();
      std::vector<cplx> co = (num - den * c).coeffs();
      co.resize(static_cast<std::size_t>(den.degree()));
      num = CPoly(std::move(co));
    }
    if (num.is_zero()) return out;
    asym = Asymptote{num.leading() / den.leading(), den.degree() - num.degree()};
    fx = [part = ComplexRational(std::move(num), den)](double xi) { return part(xi); };
    if (asym->order < 2)
      out.warning =
          "tail decays like |xi|^-" + std::to_string(asym->order) + "; not absolutely integrable";
  }

  auto magnitude = [&fx](double lo, double hi) {
    double m = 0.0;
    for (int i = 0; i <= 8; ++i) m = std::max(m, std::abs(fx(lo + (hi - lo) * i / 8.0)));
    return m;
  };
  double cutoff = kCutoffStart;
  while (cutoff < kCutoffMax && magnitude(cutoff, 2.0 * cutoff) >= kCutoffLevel) cutoff *= 2.0;
  cutoff = std::min(cutoff, kCutoffMax);
  if (!asym && std::abs(fx(cutoff)) >= kCutoffLevel)
    out.warning = "truncated at |xi| = " + fmt(cutoff) +
                  " with |f| = " + fmt(std::abs(fx(cutoff))) + "; result may be inaccurate";
  out.cutoff = cutoff;

  double max_x = 0.0;
  for (double x : xs) max_x = std::max(max_x, std::abs(x));
  const double h_max = 2.0 * std::numbers::pi / (max_x + kAliasMargin);
  auto panels = std::max(kMinPanels, static_cast<std::size_t>(std::ceil(cutoff / h_max)));
  panels += panels % 2;
  const double h = cutoff / static_cast<double>(panels);
  out.step = h;

  std::vector<cplx> samples(panels + 1);
  for (std::size_t j = 0; j <= panels; ++j) samples[j] = fx(h * static_cast<double>(j));

  std::vector<double> errors(xs.size(), 0.0);
  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<double> fine(panels + 1), coarse(panels / 2 + 1);
    for (std::size_t i = begin; i < end; ++i) {
      const double x = xs[i];
      // e^{iξ_j x} by rotation, re-anchored exactly every kAnchorStride steps.
      const cplx rot = std::polar(1.0, h * x);
      cplx ph;
      for (std::size_t j = 0; j <= panels; ++j) {
        if (j % kAnchorStride == 0)
          ph = std::polar(1.0, h * static_cast<double>(j) * x);
        else
          ph *= rot;
        fine[j] = ph.real() * samples[j].real() + ph.imag() * samples[j].imag();
      }
      fine.front() *= 0.5;
      fine.back() *= 0.5;
      for (std::size_t j = 0; j <= panels / 2; ++j) coarse[j] = fine[2 * j];
      const double t_h = h / std::numbers::pi * pairwise_sum(fine.data(), fine.size());
      const double t_2h = 2.0 * h / std::numbers::pi * pairwise_sum(coarse.data(), coarse.size());
      double tail = 0.0;
      if (asym && !(asym->order == 1 && x == 0.0)) {
        const auto [ic, is] = tail_integrals(asym->order, cutoff * x);
        tail = std::pow(cutoff, 1 - asym->order) / std::numbers::pi *
               (asym->coeff.real() * ic + asym->coeff.imag() * is);
      }
      out.p[i] = t_h + tail;
      errors[i] = std::abs(t_h - t_2h);
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1,
                                                        std::max<std::size_t>(xs.size(), 1));
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (xs.size() + n_threads - 1) / n_threads;
    for (std::size_t b = 0; b < xs.size(); b += chunk)
      pool.emplace_back(work, b, std::min(b + chunk, xs.size()));
  }
  for (double e : errors) out.error_estimate = std::max(out.error_estimate, e);
  return out;
}

PositivityReport positivity_report(const TabulatedDensity& p) {
  PositivityReport rep;
  rep.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.p.size(); ++i) {
    if (p.p[i] < rep.min_value) {
      rep.min_value = p.p[i];
      rep.argmin = p.x[i];
    }
  }
  rep.threshold = kPositivityThreshold - p.error_estimate;
  rep.pass = rep.min_value >= rep.threshold && p.atom0 >= kPositivityThreshold;
  return rep;
}

double bochner_min_eig(const CharFn& f, std::span<const double> points) {
  std::vector<double> distinct(points.begin(), points.end());
  std::sort(distinct.begin(), distinct.end());
  if (std::unique(distinct.begin(), distinct.end()) - distinct.begin() < 2)
    throw ParameterError("bochner_min_eig needs at least two distinct points");
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) m(i, j) = eval_cf(f, points[i] - points[j]);
  return detail::hermitian_min_eig(m);
}

}  // namespace chfn
