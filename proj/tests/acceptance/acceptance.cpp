// End-to-end acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chfn/charfn.hpp"
#include "chfn/error.hpp"
#include "chfn/gid.hpp"
#include "chfn/inversion.hpp"
#include "chfn/montecarlo.hpp"
#include "chfn/pgf.hpp"
#include "cli.hpp"
#include "support/brute_force.hpp"

using namespace chfn;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int failures = 0;

void report(int id, const std::string& title, double time_limit,
            const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.note(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0.0)
    o.require(secs < time_limit, "runtime " + sci(secs) + " s >= " + sci(time_limit) + " s");
  if (!o.pass) ++failures;
  std::printf("[%s] %d. %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
              o.detail.c_str());
  std::fflush(stdout);
}

Outcome kac_identity() {
  Outcome o;
  const auto grid = default_grid();
  std::vector<Counterexample> pairs{make_counterexample(ExpDifference{})};
  for (double a : {0.05, 0.25, 0.45}) pairs.push_back(make_counterexample(SignedMixture{a}));
  double worst = 0.0;
  for (const auto& ce : pairs) {
    for (double xi : grid) {
      const cplx r = 1.0 / eval_cf(ce.f1, xi) + 1.0 / eval_cf(ce.f2, xi) - (2.0 + xi * xi);
      worst = std::max(worst, std::abs(r));
    }
  }
  o.require(worst < 1e-10, "residual below 1e-10");
  o.note("max |1/f1 + 1/f2 - (2 + xi^2)| = " + sci(worst) + " over 4 pairs x 401 points");
  return o;
}

Outcome density_positivity() {
  Outcome o;
  for (double a : {0.05, 0.25, 0.45}) {
    const auto ce = make_counterexample(SignedMixture{a});
    const auto p2 = density_from_even_rational(ce.f2);
    const auto pos = positivity_report(p2);
    const double r = std::sqrt(1.0 - 2.0 * a);
    const double closed =
        (std::pow(1.0 + r, 1.5) - std::pow(1.0 - r, 1.5)) / (4.0 * std::sqrt(2.0) * r);
    const std::string tag = "a=" + sci(a);
    o.require(pos.min_value >= -1e-12, tag + " grid minimum >= -1e-12");
    o.require(std::abs(p2.mass() - 1.0) <= 1e-9, tag + " mass within 1e-9 of 1");
    o.require(pos.analytic_bound.has_value(), tag + " analytic constant reported");
    if (pos.analytic_bound) {
      o.require(*pos.analytic_bound >= 0.0, tag + " analytic constant >= 0");
      o.require(std::abs(*pos.analytic_bound - closed) < 1e-12,
                tag + " constant matches closed form");
    }
    o.note(tag + ": min " + sci(pos.min_value) + ", mass-1 " + sci(p2.mass() - 1.0) +
           ", constant " + sci(pos.analytic_bound.value_or(NAN)));
  }
  // Negative control: 1/(1 + xi^4) is not a characteristic function.
  const CharFn quartic(ComplexRational(CPoly{1.0}, CPoly{1.0, 0.0, 0.0, 0.0, 1.0}));
  const auto xs = linspace(0.0, 8.0, 801);
  const auto d = numeric_inversion(quartic, xs);
  const auto pos = positivity_report(d);
  double onset = NAN;
  for (std::size_t i = 0; i < d.x.size(); ++i)
    if (d.p[i] < 0.0) {
      onset = d.x[i];
      break;
    }
  o.require(!pos.pass && pos.min_value < -1e-3, "quartic rejected with minimum < -1e-3");
  o.require(onset > 3.2 && onset < 3.5, "quartic turns negative near |x| = 3.3");
  o.note("quartic: negative from |x| = " + sci(onset) + ", minimum " + sci(pos.min_value) +
         " at |x| = " + sci(pos.argmin));
  return o;
}

Outcome generalized_counterexamples() {
  Outcome o;
  const auto grid = default_grid();
  struct G {
    double beta, a1, a2, b;
  };
  for (const G& g : {G{1, 0.5, 0.5, 0.5}, G{3, 1, 2, 1}, G{4, 1, 1, 3.9}}) {
    const auto ce = make_counterexample(GammaDrift{g.beta, g.a1, g.a2, g.b});
    const auto v = verify_identity(ce.f1, ce.f2, ce.target, grid, ce.op);
    const auto b1 = principal_branch_check(g.beta, g.a1, g.b, grid);
    const auto b2 = principal_branch_check(g.beta, g.a2, -g.b, grid);
    const std::string tag = "beta=" + sci(g.beta) + " b=" + sci(g.b);
    o.require(v.pass && v.max_residual < 1e-10, tag + " residual < 1e-10");
    o.require(b1.grid_max_arg < b1.limit && b2.grid_max_arg < b2.limit, tag + " max arg < pi/beta");
    o.note(tag + ": residual " + sci(v.max_residual) + ", max arg " +
           sci(std::max(b1.grid_max_arg, b2.grid_max_arg)) + " < " + sci(b1.limit));
  }
  struct P {
    double a;
    unsigned n;
    double theta;
  };
  for (const P& p : {P{1, 5, 0.25}, P{2, 50, 0.1}}) {
    const auto ce = make_counterexample(PowerFamily{p.a, p.n, p.theta});
    const auto v = verify_identity(ce.f1, ce.f2, ce.target, grid, ce.op);
    const std::string tag = "n=" + std::to_string(p.n);
    o.require(v.pass && v.max_residual < 1e-10, tag + " residual < 1e-10");
    o.note(tag + ": residual " + sci(v.max_residual));
  }
  bool rejected = false;
  try {
    make_counterexample(GammaDrift{4, 1, 1, 4.1});
  } catch (const AdmissibilityError& e) {
    rejected = std::abs(e.bound() - 4.0) < 1e-12;
  }
  o.require(rejected, "b=4.1 at beta=4 rejected with bound 4");
  o.note(rejected ? "b=4.1 rejected (bound 4)" : "b=4.1 not rejected");
  return o;
}

Outcome monte_carlo() {
  Outcome o;
  const std::size_t n = 1000000;
  const std::uint64_t seed = 20240611;
  const auto grid = linspace(-5.0, 5.0, 21);
  const double tol = 5.0 / std::sqrt(static_cast<double>(n));

  const auto ed = make_counterexample(ExpDifference{});
  const LawSpec ed_law = law::ExpDifference{1.0, 2.0};
  const auto r1 = mc_validate(ed_law, ed.f1, grid, n, seed);
  o.require(r1.pass, "ExpDifference within 5/sqrt(n)");
  o.note("ExpDifference max err " + sci(r1.max_error) + " (tol " + sci(tol) + ")");

  const auto gd = make_counterexample(GammaDrift{3, 1, 2, 1});
  const LawSpec gd_law = law::GammaNormalDrift{3, 1, 1};
  const auto r2 = mc_validate(gd_law, gd.f1, grid, n, seed);
  o.require(r2.pass, "GammaNormalDrift within 5/sqrt(n)");
  o.note("GammaNormalDrift max err " + sci(r2.max_error));

  const auto mix = make_counterexample(SignedMixture{0.25});
  const auto p2 = density_from_even_rational(mix.f2);
  const LawSpec sm_law = law::SignedMixture{p2};
  const auto batch = sample(sm_law, n, seed);
  const double ks = kolmogorov_distance(batch, p2);
  const double ks_tol = 2.0 / std::sqrt(static_cast<double>(n));
  o.require(ks < ks_tol, "SignedMixture Kolmogorov distance < 2/sqrt(n)");
  o.note("SignedMixture KS " + sci(ks) + " (tol " + sci(ks_tol) + ")");

  // Bit-reproducibility: the same seed gives the same samples.
  const bool same = sample(sm_law, n, seed).values == batch.values &&
                    sample(ed_law, 200000, seed).values == sample(ed_law, 200000, seed).values &&
                    sample(gd_law, 200000, seed).values == sample(gd_law, 200000, seed).values;
  o.require(same, "bit-reproducible samples");
  return o;
}

Outcome classifier() {
  Outcome o;
  std::mt19937_64 gen(31337);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double a1 = u(gen), a2 = 1.0 - a1;
    const auto c = main_theorem_classify(CharFn::laplace(a1), CharFn::laplace(a2), Symmetry::Even);
    const auto* l = std::get_if<LaplaceFactors>(&c);
    if (!l) {
      o.require(false, "Laplace pair classified as Laplace");
      break;
    }
    worst = std::max({worst, std::abs(l->a1 - a1), std::abs(l->a2 - a2)});
  }
  o.require(worst < 1e-12, "Laplace scales recovered to 1e-12");
  o.note("100 Laplace pairs, max scale error " + sci(worst));

  const auto ed = make_counterexample(ExpDifference{});
  const auto c21 = main_theorem_classify(ed.f1, ed.f2, Symmetry::None);
  const auto* d = std::get_if<DriftedFactors>(&c21);
  o.require(d && d->drifts_cancel && d->scales_sum_to_one, "drifted form with cancelling drifts");
  if (d)
    o.note("exp-diff: gamma1+gamma2 = " + sci(d->gamma1 + d->gamma2) +
           ", a1+a2 = " + sci(d->a1 + d->a2));

  for (double a : {0.05, 0.25, 0.45}) {
    const auto mix = make_counterexample(SignedMixture{a});
    const auto c = main_theorem_classify(mix.f1, mix.f2, Symmetry::Even);
    o.require(std::holds_alternative<NotGidFactor>(c), "mixture a=" + sci(a) + " is NotGid");
  }
  o.note("mixture pairs NotGid");

  int lk_agree = 0, b_agree = 0;
  std::mt19937_64 g1(20240611), g2(7345);
  for (int i = 0; i < 1000; ++i) {
    const auto psi = testing::random_exponent(g1);
    const auto k = is_indecomposable(psi).kind;
    lk_agree +=
        psi.is_zero()
            ? (k == Decomposability::Zero)
            : ((k == Decomposability::Decomposable) == testing::brute_force_decomposable(psi));
    const auto eta = testing::random_bernstein(g2);
    const auto kb = bernstein_indecomposable(eta).kind;
    const bool zero = eta.b() == 0.0 && eta.atoms().empty();
    b_agree +=
        zero ? (kb == BernsteinKind::Zero)
             : ((kb == BernsteinKind::Decomposable) == testing::brute_force_decomposable(eta));
  }
  o.require(lk_agree == 1000 && b_agree == 1000, "indecomposability classifiers match brute force");
  o.note("brute force agreement " + std::to_string(lk_agree) + "/1000 and " +
         std::to_string(b_agree) + "/1000");
  return o;
}

Outcome discrete() {
  Outcome o;
  std::mt19937_64 gen(4242);
  std::uniform_real_distribution<double> lam(0.1, 5.0), th(0.01, 0.49);
  const auto zs = linspace(0.0, 1.0, 101);
  double min_coeff = 1.0, sup = 0.0;
  int affine = 0;
  for (int i = 0; i < 100; ++i) {
    const double lambda = lam(gen), theta = th(gen);
    const auto ce = discrete_counterexample(lambda, theta, 1);
    for (const PGF* g : {&ce.g1, &ce.g2}) {
      const auto c = coefficients(*g, 199);
      min_coeff = std::min(min_coeff, c.report.min_coeff);
      o.require(c.report.negative.empty() && c.report.bound_holds,
                "coefficients nonnegative for lambda=" + sci(lambda) + " theta=" + sci(theta));
      affine += affineness_test(*g).affine;
    }
    for (double z : zs)
      sup = std::max(sup, std::abs(pgf_phi(ce.op, ce.g1, ce.g2, z) - pgf_eval(ce.target, z)));
  }
  o.require(min_coeff >= -1e-14, "coefficients >= -1e-14");
  o.require(sup < 1e-12, "identity residual < 1e-12");
  o.require(affine == 0, "no factor passes the affineness test");
  o.note("100 pairs: min coefficient " + sci(min_coeff) + ", identity sup " + sci(sup) +
         ", affine factors " + std::to_string(affine));

  for (unsigned n : {2u, 10u}) {
    const auto ce = discrete_counterexample(1.0, 0.25, n);
    double s = 0.0;
    for (double z : zs) {
      const double target = std::pow(1.0 + (1.0 - z) / n, -static_cast<double>(n));
      s = std::max(s, std::abs(pgf_phi(ce.op, ce.g1, ce.g2, z) - target));
    }
    const bool excluded = !affineness_test(ce.g1, n).affine && !affineness_test(ce.g2, n).affine;
    o.require(s < 1e-12, "power identity n=" + std::to_string(n));
    o.require(excluded, "power factors excluded n=" + std::to_string(n));
    o.note("n=" + std::to_string(n) + " sup " + sci(s));
  }
  return o;
}

Outcome gaussian_limit() {
  Outcome o;
  const auto grid = linspace(-5.0, 5.0, 201);
  const auto p = gaussian_limit_scan(PowerFamilyScan{1.0, 0.25, {1, 10, 100, 1000}}, grid, 0.01);
  o.require(p.non_increasing, "power family non-increasing");
  o.require(p.final_sup < 0.01, "power family below 0.01 at n=1000");
  std::string sups;
  for (const auto& e : p.entries) sups += (sups.empty() ? "" : ", ") + sci(e.sup);
  o.note("power sups " + sups);

  const std::vector<double> betas{16, 64, 256, 1024, 4096};
  std::vector<double> drifts;
  for (double b : betas) drifts.push_back(shrinking_drift(b));
  const auto g = gaussian_limit_scan(GammaDriftScan{1.0, 2.0, betas, drifts}, grid, 0.03);
  bool strictly = true;
  for (std::size_t i = 1; i < g.entries.size(); ++i)
    strictly = strictly && g.entries[i].sup < g.entries[i - 1].sup;
  o.require(strictly, "gamma-drift strictly decreasing");
  o.require(g.final_sup < 0.03, "gamma-drift below 0.03 at beta=4096");
  sups.clear();
  for (const auto& e : g.entries) sups += (sups.empty() ? "" : ", ") + sci(e.sup);
  o.note("gamma-drift sups " + sups);
  return o;
}

Outcome golden() {
  Outcome o;
  const std::vector<std::vector<std::string>> commands{
      {"verify-kac", "--laplace", "0.3", "0.7"},
      {"counterexample", "--kind", "mixture", "--a", "0.25", "--mc", "20000", "--seed", "7"},
      {"counterexample", "--kind", "exp-diff", "--mc", "20000", "--seed", "7"},
      {"counterexample", "--kind", "gamma-drift", "--mc", "20000", "--seed", "7"},
      {"counterexample", "--kind", "power"},
      {"classify", "--pair", "exp-diff"},
      {"indecomposable", "--sigma2", "1", "--atom", "1:2"},
      {"indecomposable", "--bernstein", "--atom", "3:1"},
      {"invert", "--num", "1", "--den", "1,0,1"},
      {"montecarlo", "--law", "mixture", "--samples", "20000", "--seed", "7"},
      {"pgf", "--lambda", "1", "--theta", "0.25", "--n", "2"},
      {"limit-scan", "--family", "gamma-drift"},
      {"factor", "--discrete", "--from", "composed", "--kernel", "exp"},
  };
  int identical = 0, total = 0;
  for (const auto& cmd : commands) {
    for (const char* format : {"json", "csv"}) {
      auto args = cmd;
      args.insert(args.end(), {"--format", format});
      std::ostringstream a, b, ea, eb;
      const int ca = cli::run(args, a, ea);
      const int cb = cli::run(args, b, eb);
      ++total;
      const bool same = ca == cb && a.str() == b.str() && !a.str().empty();
      identical += same;
      o.require(same, cmd.front() + " " + format + " deterministic");
    }
  }
  o.note(std::to_string(identical) + "/" + std::to_string(total) + " runs byte-identical");
  return o;
}

}  // namespace

int main() {
  report(1, "Kac identity for the exponential-difference and mixture pairs", 1.0, kac_identity);
  report(2, "Mixture density positivity and the quartic negative control", 1.0, density_positivity);
  report(3, "Gamma-drift and power-family identities, branch condition", 0.0,
         generalized_counterexamples);
  report(4, "Monte Carlo agreement", 30.0, monte_carlo);
  report(5, "Classifier suite", 0.0, classifier);
  report(6, "Discrete suite", 0.0, discrete);
  report(7, "Gaussian limits", 0.0, gaussian_limit);
  report(8, "CLI determinism", 0.0, golden);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
