#include "chfn/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "chfn/error.hpp"
#include "chfn/rng.hpp"
#include "detail/format.hpp"

namespace chfn {

using detail::fmt;

namespace {

constexpr double kMinAcceptance = 0.01;
constexpr double kMassTolerance = 1e-9;
constexpr std::size_t kMaxGrid = 64;
constexpr std::size_t kMinSamples = 10000;

using Draw = std::function<double(Rng&)>;

struct Prepared {
  Draw draw;
  std::optional<double> acceptance;
};

void positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ParameterError(std::string(what) + " must be > 0, got " + fmt(v));
}

double laplace_draw(Rng& rng, double rate) {
  const double e = rng.exponential() / rate;
  return rng.coin() ? e : -e;
}

// Y(T) for one symmetric exponent: N(0, σ²T) plus ±t jumps at rate c per atom.
double levy_at(Rng& rng, const LKExponent& psi, double T) {
  double y = psi.sigma2() > 0.0 ? std::sqrt(psi.sigma2() * T) * rng.normal() : 0.0;
  for (const auto& a : psi.atoms()) {
    const std::uint64_t k = rng.poisson(a.weight * T);
    std::int64_t net = 0;
    for (std::uint64_t j = 0; j < k; ++j) net += rng.coin() ? 1 : -1;
    y += a.position * static_cast<double>(net);
  }
  return y;
}

Prepared prepare(const law::Exponential& l) {
  positive(l.rate, "exponential rate");
  return {[r = l.rate](Rng& rng) { return rng.exponential() / r; }, {}};
}

Prepared prepare(const law::Gamma& l) {
  positive(l.shape, "gamma shape");
  positive(l.scale, "gamma scale");
  return {[l](Rng& rng) { return l.scale * rng.gamma(l.shape); }, {}};
}

Prepared prepare(const law::Normal& l) {
  if (!std::isfinite(l.mean)) throw ParameterError("normal mean must be finite");
  positive(l.var, "normal variance");
  return {[m = l.mean, s = std::sqrt(l.var)](Rng& rng) { return m + s * rng.normal(); }, {}};
}

Prepared prepare(const law::Laplace& l) {
  positive(l.rate, "Laplace rate");
  return {[r = l.rate](Rng& rng) { return laplace_draw(rng, r); }, {}};
}

Prepared prepare(const law::AtomLaplaceMix& l) {
  if (!(l.w0 >= 0.0 && l.w0 <= 1.0))
    throw ParameterError("atom weight must lie in [0, 1], got " + fmt(l.w0));
  positive(l.rate, "Laplace rate");
  return {[l](Rng& rng) { return rng.uniform() < l.w0 ? 0.0 : laplace_draw(rng, l.rate); }, {}};
}

Prepared prepare(const law::TwoSidedGeometric& l) {
  if (!(l.r >= 0.0 && l.r < 1.0))
    throw ParameterError("geometric ratio must lie in [0, 1), got " + fmt(l.r));
  positive(l.t, "lattice step");
  return {[l](Rng& rng) {
            const auto a = static_cast<double>(rng.geometric(l.r));
            const auto b = static_cast<double>(rng.geometric(l.r));
            return l.t * (a - b);
          },
          {}};
}

Prepared prepare(const law::ExpDifference& l) {
  positive(l.rate1, "rate1");
  positive(l.rate2, "rate2");
  return {[l](Rng& rng) {
            const double x = rng.exponential() / l.rate1;
            return x - rng.exponential() / l.rate2;
          },
          {}};
}

Prepared prepare(const law::GammaNormalDrift& l) {
  positive(l.beta, "beta");
  positive(l.a, "a");
  if (!std::isfinite(l.b)) throw ParameterError("drift must be finite");
  return {[l](Rng& rng) {
            const double g = rng.gamma(l.beta) / l.beta;
            return l.b * g + std::sqrt(2.0 * l.a * g) * rng.normal();
          },
          {}};
}

Prepared prepare(const law::SignedMixture& l) {
  const DensityMixture& p = l.density;
  if (p.terms.empty()) throw ParameterError("mixture has no continuous part");
  if (std::abs(p.mass() - 1.0) > kMassTolerance)
    throw RefusalError("mixture mass is " + fmt(p.mass()) + ", not 1");
  const auto cert = positivity_report(p);
  if (!cert.pass)
    throw RefusalError("mixture density is not certified nonnegative (minimum " +
                       fmt(cert.min_value) + " at x = " + fmt(cert.argmin) + ")");
  const double r_min = p.min_rate();
  double k = 0.0;
  for (const auto& t : p.terms)
    if (t.weight > 0.0) k += t.weight / (2.0 * t.rate);
  const double acceptance = (1.0 - p.atom0) * r_min / (2.0 * k);
  if (acceptance < kMinAcceptance)
    throw EnvelopeError("rejection acceptance " + fmt(acceptance) + " is below 1%");
  return {[p, r_min, k](Rng& rng) {
            if (rng.uniform() < p.atom0) return 0.0;
            for (;;) {
              const double x = laplace_draw(rng, r_min);
              const double envelope = k * std::exp(-r_min * std::abs(x));
              if (rng.uniform() * envelope <= p.density(x)) return x;
            }
          },
          acceptance};
}

Prepared prepare(const law::SubordinatedSum& l) {
  const auto rho = l.kernel.mixing_law();
  if (!rho) throw ParameterError("kernel " + l.kernel.name() + " has no sampleable mixing law");
  return {[l, rho = *rho](Rng& rng) {
            double T = 1.0;
            if (rho.kind == MixingLaw::Kind::Exponential) T = rng.exponential();
            if (rho.kind == MixingLaw::Kind::Gamma) T = rho.scale * rng.gamma(rho.shape);
            const double y1 = levy_at(rng, l.psi1, T);
            return y1 + levy_at(rng, l.psi2, T);
          },
          {}};
}

double pairwise(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise(v.first(h)) + pairwise(v.subspan(h));
}

template <class Fn>
void parallel_blocks(std::size_t n_blocks, Fn&& fn) {
  const std::size_t n_threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1,
                                                        std::max<std::size_t>(n_blocks, 1));
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < n_threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t b = t; b < n_blocks; b += n_threads) fn(b);
    });
}

}  // namespace

SampleBatch sample(const LawSpec& law, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ParameterError("sample size must be >= 1");
  const Prepared prep = std::visit([](const auto& l) { return prepare(l); }, law);
  SampleBatch batch;
  batch.seed = seed;
  batch.acceptance = prep.acceptance;
  batch.values.resize(n);
  const std::size_t n_blocks = (n + kSampleBlock - 1) / kSampleBlock;
  parallel_blocks(n_blocks, [&](std::size_t b) {
    Rng rng(seed, b);
    const std::size_t end = std::min(n, (b + 1) * kSampleBlock);
    for (std::size_t i = b * kSampleBlock; i < end; ++i) batch.values[i] = prep.draw(rng);
  });
  return batch;
}

EmpiricalCF empirical_cf(const SampleBatch& batch, std::span<const double> grid) {
  if (batch.values.empty()) throw ParameterError("empirical_cf needs a nonempty batch");
  EmpiricalCF out;
  out.grid.assign(grid.begin(), grid.end());
  out.n = batch.values.size();
  out.estimates.resize(grid.size());
  const double n = static_cast<double>(out.n);
  parallel_blocks(grid.size(), [&](std::size_t g) {
    const double xi = grid[g];
    if (xi == 0.0) {
      out.estimates[g] = 1.0;
      return;
    }
    std::vector<double> re(batch.values.size()), im(batch.values.size());
    for (std::size_t i = 0; i < batch.values.size(); ++i) {
      re[i] = std::cos(xi * batch.values[i]);
      im[i] = std::sin(xi * batch.values[i]);
    }
    out.estimates[g] = cplx(pairwise(re), pairwise(im)) / n;
  });
  return out;
}

McReport mc_validate(const LawSpec& law, const CharFn& target, std::span<const double> grid,
                     std::size_t n, std::uint64_t seed, double c) {
  if (grid.empty() || grid.size() > kMaxGrid)
    throw ParameterError("mc_validate needs 1 to 64 grid points, got " +
                         std::to_string(grid.size()));
  if (n < kMinSamples)
    throw ParameterError("mc_validate needs n >= 10000, got " + std::to_string(n));
  if (!(c > 0.0)) throw ParameterError("tolerance constant must be > 0");
  const SampleBatch batch = sample(law, n, seed);
  const EmpiricalCF ecf = empirical_cf(batch, grid);
  McReport rep;
  rep.n = n;
  rep.seed = seed;
  rep.tolerance = c / std::sqrt(static_cast<double>(n));
  rep.acceptance = batch.acceptance;
  rep.pass = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    McPoint p{grid[i], ecf.estimates[i], eval_cf(target, grid[i]), 0.0, false};
    p.error = std::abs(p.empirical - p.target);
    p.pass = p.error <= rep.tolerance;
    rep.pass = rep.pass && p.pass;
    rep.max_error = std::max(rep.max_error, p.error);
    rep.points.push_back(p);
  }
  return rep;
}

namespace {

double ks(const SampleBatch& batch, const std::function<double(double)>& cdf,
          const std::function<double(double)>& cdf_left) {
  if (batch.values.empty()) throw ParameterError("kolmogorov_distance needs a nonempty batch");
  std::vector<double> x = batch.values;
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size();) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;
    d = std::max(d, std::abs(cdf(x[i]) - static_cast<double>(j) / n));
    d = std::max(d, std::abs(cdf_left(x[i]) - static_cast<double>(i) / n));
    i = j;
  }
  return d;
}

}  // namespace

double kolmogorov_distance(const SampleBatch& batch, const std::function<double(double)>& cdf) {
  return ks(batch, cdf, cdf);
}

double kolmogorov_distance(const SampleBatch& batch, const DensityMixture& p) {
  return ks(
      batch, [&p](double x) { return p.cdf(x); },
      [&p](double x) { return x == 0.0 ? p.cdf(x) - p.atom0 : p.cdf(x); });
}

}  // namespace chfn
