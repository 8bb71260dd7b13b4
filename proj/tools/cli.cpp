#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "chfn/charfn.hpp"
#include "chfn/error.hpp"
#include "chfn/factor.hpp"
#include "chfn/gid.hpp"
#include "chfn/inversion.hpp"
#include "chfn/lk.hpp"
#include "chfn/montecarlo.hpp"
#include "chfn/pgf.hpp"
#include "report.hpp"

namespace chfn::cli {

namespace {

using namespace std::complex_literals;

constexpr std::uint64_t kDefaultSeed = 20240611;
constexpr double kMassTolerance = 1e-9;
constexpr double kPgfIdentityTolerance = 1e-12;
constexpr std::size_t kPgfPoints = 101;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  double min;
  double max;
  std::size_t count;
};

// Every flag of every subcommand; each subcommand registers the ones it reads.
struct Options {
  std::string format = "json";
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> grid_min, grid_max;
  std::optional<std::size_t> grid_count;
  std::optional<double> x_max;
  std::optional<std::size_t> x_count;
  double tol = kIdentityTolerance;

  std::vector<double> laplace;
  std::string pair;
  std::string kind;
  std::optional<double> a, beta, alpha, a1, a2, b, theta, lambda, scale, threshold;
  std::optional<unsigned> n;
  std::size_t mc = 0;
  std::string symmetry;
  double sigma2 = 0.0;
  std::vector<std::string> atoms;
  bool bernstein = false;
  std::vector<double> num, den;
  std::string law, target;
  double rate = 1.0, rate1 = 1.0, rate2 = 2.0;
  std::size_t samples = 100000;
  double mc_c = kMcTolerance;
  std::size_t order = 200;
  std::string family;
  std::vector<unsigned> n_values{1, 10, 100, 1000};
  std::vector<double> betas{16, 64, 256, 1024, 4096};
  std::string kernel = "kac";
  std::string from = "composed";
  bool discrete = false;
};

// -- option plumbing --------------------------------------------------------------

void add_output(CLI::App* s, Options& o) {
  s->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  s->add_option("--out", o.out, "Write the report to this file instead of stdout");
}

void add_grid(CLI::App* s, Options& o, const GridSpec& d) {
  s->add_option("--grid-min", o.grid_min, "Grid start (default " + fmt17(d.min) + ")");
  s->add_option("--grid-max", o.grid_max, "Grid end (default " + fmt17(d.max) + ")");
  s->add_option("--grid-count", o.grid_count,
                "Grid points, at least 3 (default " + std::to_string(d.count) + ")");
}

void add_seed(CLI::App* s, Options& o) {
  s->add_option("--seed", o.seed, "Random seed (default: $CHFN_SEED, else 20240611)");
}

void add_tol(CLI::App* s, Options& o) {
  s->add_option("--tol", o.tol, "Identity tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

std::vector<double> resolve_grid(const Options& o, const GridSpec& d) {
  const double lo = o.grid_min.value_or(d.min), hi = o.grid_max.value_or(d.max);
  const std::size_t n = o.grid_count.value_or(d.count);
  if (n < 3) throw UsageError("--grid-count must be at least 3");
  if (!(lo < hi)) throw UsageError("--grid-min must be below --grid-max");
  return linspace(lo, hi, n);
}

Json grid_json(const std::vector<double>& g) {
  return {{"min", g.front()}, {"max", g.back()}, {"count", g.size()}};
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("CHFN_SEED")) {
    const std::string s(env);
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(s, &used, 0);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size()) throw UsageError("CHFN_SEED is not an integer: " + s);
    return v;
  }
  return kDefaultSeed;
}

std::vector<LevyAtom> parse_atoms(const std::vector<std::string>& specs) {
  std::vector<LevyAtom> out;
  for (const auto& s : specs) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw UsageError("--atom expects position:weight, got " + s);
    try {
      std::size_t u1 = 0, u2 = 0;
      const std::string p = s.substr(0, colon), w = s.substr(colon + 1);
      const double pos = std::stod(p, &u1), wt = std::stod(w, &u2);
      if (u1 != p.size() || u2 != w.size()) throw std::invalid_argument(s);
      out.push_back({pos, wt});
    } catch (const std::exception&) {
      throw UsageError("--atom expects position:weight, got " + s);
    }
  }
  return out;
}

CMKernel parse_kernel(const Options& o) {
  if (o.kernel == "exp") return CMKernel::exp();
  if (o.kernel == "kac") return CMKernel::kac();
  if (o.kernel == "gamma-beta") return CMKernel::gamma_beta(o.beta.value_or(2.0));
  if (o.kernel == "gen-linnik")
    return CMKernel::gen_linnik(o.alpha.value_or(1.0), o.beta.value_or(1.0));
  if (o.kernel == "stable-exp") return CMKernel::stable_exp(o.beta.value_or(1.0));
  throw UsageError("unknown kernel " + o.kernel);
}

// -- report fragments --------------------------------------------------------------

void add_identity(Report& r, const VerificationReport& v, const std::string& name = "identity") {
  Table t{
      name, {"xi", "re_f1", "im_f1", "re_f2", "im_f2", "re_target", "im_target", "residual"}, {}};
  for (const auto& p : v.points)
    t.rows.push_back({p.xi, p.f1.real(), p.f1.imag(), p.f2.real(), p.f2.imag(), p.target.real(),
                      p.target.imag(), p.residual});
  Json failures = Json::array();
  for (const auto& f : v.failures) failures.push_back({{"xi", f.xi}, {"message", f.message}});
  r.json[name] = {{"max_residual", v.max_residual},
                  {"tolerance", v.tolerance},
                  {"points", v.points.size()},
                  {"failures", failures},
                  {"pass", v.pass}};
  r.tables.push_back(std::move(t));
  r.pass = r.pass && v.pass;
}

Json positivity_json(const PositivityReport& p) {
  return {{"min_value", p.min_value},
          {"argmin", p.argmin},
          {"analytic_bound", p.analytic_bound ? Json(*p.analytic_bound) : Json(nullptr)},
          {"threshold", p.threshold},
          {"pass", p.pass}};
}

Json mixture_json(const DensityMixture& m) {
  Json terms = Json::array();
  for (const auto& t : m.terms)
    terms.push_back({{"weight", t.weight}, {"rate", t.rate}, {"mass", t.mass()}});
  return {{"atom0", m.atom0}, {"terms", terms}, {"mass", m.mass()}};
}

std::vector<double> density_grid(const Options& o) {
  const double hi = o.x_max.value_or(10.0);
  const std::size_t n = o.x_count.value_or(401);
  if (!(hi > 0.0) || n < 3) throw UsageError("--x-max must be > 0 and --x-count at least 3");
  return linspace(-hi, hi, n);
}

// Exact Laplace-mixture density: positivity, unit mass and, for two terms, the
// analytic lower-bound constant.
Json analytic_density(Report& r, const DensityMixture& m, const std::vector<double>& xs,
                      const std::string& table) {
  const auto pos = positivity_report(m);
  const bool mass_ok = std::abs(m.mass() - 1.0) <= kMassTolerance;
  const bool bound_ok = !pos.analytic_bound || *pos.analytic_bound >= 0.0;
  Table t{table, {"x", "p"}, {}};
  for (double x : xs) t.rows.push_back({x, m.density(x)});
  r.tables.push_back(std::move(t));
  const bool pass = pos.pass && mass_ok && bound_ok;
  r.pass = r.pass && pass;
  Json j = mixture_json(m);
  j["method"] = "partial-fractions";
  j["mass_ok"] = mass_ok;
  j["positivity"] = positivity_json(pos);
  j["pass"] = pass;
  return j;
}

Json numeric_density(Report& r, const CharFn& f, const std::vector<double>& xs,
                     const std::string& table) {
  const auto d = numeric_inversion(f, xs);
  const auto pos = positivity_report(d);
  Table t{table, {"x", "p"}, {}};
  for (std::size_t i = 0; i < d.x.size(); ++i) t.rows.push_back({d.x[i], d.p[i]});
  r.tables.push_back(std::move(t));
  r.pass = r.pass && pos.pass;
  return {{"method", "quadrature"},
          {"atom0", d.atom0},
          {"cutoff", d.cutoff},
          {"step", d.step},
          {"error_estimate", d.error_estimate},
          {"warning", d.warning ? Json(*d.warning) : Json(nullptr)},
          {"positivity", positivity_json(pos)},
          {"pass", pos.pass}};
}

Json monte_carlo(Report& r, const LawSpec& law, const std::string& law_name, const CharFn& target,
                 std::size_t n, std::uint64_t seed, double c, const std::vector<double>& grid) {
  const auto mc = mc_validate(law, target, grid, n, seed, c);
  Table t{
      "montecarlo", {"xi", "re_empirical", "im_empirical", "re_target", "im_target", "error"}, {}};
  for (const auto& p : mc.points)
    t.rows.push_back(
        {p.xi, p.empirical.real(), p.empirical.imag(), p.target.real(), p.target.imag(), p.error});
  r.tables.push_back(std::move(t));
  Json j = {{"law", law_name},
            {"n", mc.n},
            {"seed", mc.seed},
            {"tolerance", mc.tolerance},
            {"max_error", mc.max_error},
            {"acceptance", mc.acceptance ? Json(*mc.acceptance) : Json(nullptr)},
            {"pass", mc.pass}};
  bool pass = mc.pass;
  if (const auto* sm = std::get_if<law::SignedMixture>(&law)) {
    const double ks = kolmogorov_distance(sample(law, n, seed), sm->density);
    const double ks_tol = 2.0 / std::sqrt(static_cast<double>(n));
    j["kolmogorov"] = {{"distance", ks}, {"tolerance", ks_tol}, {"pass", ks < ks_tol}};
    pass = pass && ks < ks_tol;
    j["pass"] = pass;
  }
  r.pass = r.pass && pass;
  return j;
}

// -- subcommands -------------------------------------------------------------------

const GridSpec kCfGrid{-20.0, 20.0, 401};
const GridSpec kMcGrid{-5.0, 5.0, 21};
const GridSpec kLimitGrid{-5.0, 5.0, 201};

Report verify_kac(const Options& o) {
  Report r;
  r.json["subcommand"] = "verify-kac";
  std::optional<CharFn> f1, f2, target;
  if (!o.laplace.empty() || o.pair.empty() || o.pair == "laplace") {
    const double a1 = o.laplace.empty() ? o.a1.value_or(0.5) : o.laplace[0];
    const double a2 = o.laplace.empty() ? o.a2.value_or(0.5) : o.laplace[1];
    if (!(a1 > 0.0) || !(a2 > 0.0)) throw UsageError("--laplace needs positive scales");
    f1 = CharFn::laplace(a1);
    f2 = CharFn::laplace(a2);
    target = CharFn::laplace(a1 + a2);
    r.json["pair"] = {{"kind", "laplace"}, {"a1", a1}, {"a2", a2}};
  } else {
    Counterexample ce = o.pair == "exp-diff"
                            ? make_counterexample(ExpDifference{})
                            : make_counterexample(SignedMixture{o.a.value_or(0.25)});
    f1 = ce.f1;
    f2 = ce.f2;
    target = ce.target;
    r.json["pair"] = {{"kind", o.pair}};
    if (o.pair == "mixture") r.json["pair"]["a"] = o.a.value_or(0.25);
  }
  const auto grid = resolve_grid(o, kCfGrid);
  r.json["grid"] = grid_json(grid);
  add_identity(r, verify_identity(*f1, *f2, *target, grid, PhiOp::kac(), o.tol));
  return r;
}

Report counterexample(const Options& o) {
  Report r;
  r.json["subcommand"] = "counterexample";
  r.json["kind"] = o.kind;
  Json params = Json::object();
  CounterexampleKind kind;
  if (o.kind == "exp-diff") {
    kind = ExpDifference{};
  } else if (o.kind == "mixture") {
    kind = SignedMixture{o.a.value_or(0.25)};
    params["a"] = o.a.value_or(0.25);
  } else if (o.kind == "gamma-drift") {
    const GammaDrift g{o.beta.value_or(3.0), o.a1.value_or(1.0), o.a2.value_or(2.0),
                       o.b.value_or(1.0)};
    kind = g;
    params = {{"beta", g.beta}, {"a1", g.a1}, {"a2", g.a2}, {"b", g.b}};
  } else {
    const PowerFamily p{o.a.value_or(1.0), o.n.value_or(5), o.theta.value_or(0.25)};
    kind = p;
    params = {{"a", p.a}, {"n", p.n}, {"theta", p.theta}};
  }
  r.json["params"] = params;
  const Counterexample ce = make_counterexample(kind);
  r.json["operation"] = ce.op.name();

  const auto grid = resolve_grid(o, kCfGrid);
  r.json["grid"] = grid_json(grid);
  add_identity(r, verify_identity(ce.f1, ce.f2, ce.target, grid, ce.op, o.tol));

  if (const auto* g = std::get_if<GammaDrift>(&kind)) {
    Json branch = Json::array();
    const double as[2] = {g->a1, g->a2};
    for (int j = 0; j < 2; ++j) {
      const auto br = principal_branch_check(g->beta, as[j], j == 0 ? g->b : -g->b, grid);
      branch.push_back({{"factor", j + 1},
                        {"grid_max_arg", br.grid_max_arg},
                        {"analytic_max_arg", br.analytic_max_arg},
                        {"maximizer", br.maximizer},
                        {"limit", br.limit},
                        {"roundtrip_error", br.roundtrip_error},
                        {"pass", br.pass}});
      r.pass = r.pass && br.pass;
    }
    r.json["branch"] = branch;
  }

  const auto xs = density_grid(o);
  Json densities = Json::array();
  const CharFn* fs[2] = {&ce.f1, &ce.f2};
  for (int j = 0; j < 2; ++j) {
    const std::string table = "density_f" + std::to_string(j + 1);
    Json d = o.kind == "mixture"
                 ? analytic_density(r, density_from_even_rational(*fs[j]), xs, table)
                 : numeric_density(r, *fs[j], xs, table);
    d["factor"] = j + 1;
    densities.push_back(std::move(d));
  }
  r.json["densities"] = densities;

  if (o.mc > 0) {
    const auto mc_grid = linspace(kMcGrid.min, kMcGrid.max, kMcGrid.count);
    const std::uint64_t seed = resolve_seed(o);
    if (o.kind == "exp-diff") {
      r.json["montecarlo"] = monte_carlo(r, law::ExpDifference{1.0, 2.0}, "exp-diff", ce.f1, o.mc,
                                         seed, o.mc_c, mc_grid);
    } else if (o.kind == "mixture") {
      r.json["montecarlo"] = monte_carlo(r, law::SignedMixture{density_from_even_rational(ce.f2)},
                                         "signed-mixture", ce.f2, o.mc, seed, o.mc_c, mc_grid);
    } else if (const auto* g = std::get_if<GammaDrift>(&kind)) {
      r.json["montecarlo"] = monte_carlo(r, law::GammaNormalDrift{g->beta, g->a1, g->b},
                                         "gamma-normal-drift", ce.f1, o.mc, seed, o.mc_c, mc_grid);
    } else {
      r.json["montecarlo"] = {{"available", false},
                              {"reason", "no exact sampler for the power family"}};
    }
  }
  r.json["pass"] = r.pass;
  return r;
}

Json gid_json(const GidReport& g) {
  Json gram = Json::array();
  for (const auto& c : g.gram) gram.push_back({{"t", c.t}, {"min_eig", c.min_eig}});
  Json form = nullptr;
  if (g.form) form = {{"gamma", g.form->gamma}, {"a", g.form->a}};
  return {{"verdict", to_string(g.verdict)}, {"form", form}, {"reason", g.reason}, {"gram", gram}};
}

Report classify(const Options& o) {
  Report r;
  r.json["subcommand"] = "classify";
  const std::string pair = o.pair.empty() ? "laplace" : o.pair;
  std::optional<CharFn> f1, f2;
  Symmetry sym = Symmetry::Even;
  if (pair == "laplace") {
    const double a1 = o.a1.value_or(0.3), a2 = o.a2.value_or(0.7);
    f1 = CharFn::laplace(a1);
    f2 = CharFn::laplace(a2);
    r.json["pair"] = {{"kind", pair}, {"a1", a1}, {"a2", a2}};
  } else if (pair == "exp-diff") {
    const auto ce = make_counterexample(ExpDifference{});
    f1 = ce.f1;
    f2 = ce.f2;
    sym = Symmetry::None;
    r.json["pair"] = {{"kind", pair}};
  } else {
    const auto ce = make_counterexample(SignedMixture{o.a.value_or(0.25)});
    f1 = ce.f1;
    f2 = ce.f2;
    r.json["pair"] = {{"kind", pair}, {"a", o.a.value_or(0.25)}};
  }
  if (o.symmetry == "real")
    sym = Symmetry::RealValued;
  else if (o.symmetry == "even")
    sym = Symmetry::Even;
  else if (o.symmetry == "none")
    sym = Symmetry::None;
  r.json["symmetry"] = sym == Symmetry::RealValued ? "real"
                       : sym == Symmetry::Even     ? "even"
                                                   : "none";

  const auto grid = resolve_grid(o, kCfGrid);
  const Classification c = main_theorem_classify(*f1, *f2, sym, grid);
  Json cj;
  if (const auto* l = std::get_if<LaplaceFactors>(&c)) {
    cj = {{"kind", "laplace"}, {"a1", l->a1}, {"a2", l->a2}};
  } else if (const auto* d = std::get_if<DriftedFactors>(&c)) {
    cj = {{"kind", "drifted"},
          {"gamma1", d->gamma1},
          {"a1", d->a1},
          {"gamma2", d->gamma2},
          {"a2", d->a2},
          {"drifts_cancel", d->drifts_cancel},
          {"scales_sum_to_one", d->scales_sum_to_one}};
    r.pass = d->drifts_cancel && d->scales_sum_to_one;
  } else {
    const auto& n = std::get<NotGidFactor>(c);
    cj = {{"kind", "not-gid"}, {"factor", n.factor}, {"reason", n.reason}};
  }
  r.json["classification"] = cj;
  r.json["gid"] = {{"f1", gid_json(geometric_id_check(*f1))},
                   {"f2", gid_json(geometric_id_check(*f2))}};
  r.json["pass"] = r.pass;
  return r;
}

Report indecomposable(const Options& o) {
  Report r;
  r.json["subcommand"] = "indecomposable";
  const auto atoms = parse_atoms(o.atoms);
  Json aj = Json::array();
  for (const auto& a : atoms) aj.push_back({a.position, a.weight});
  if (o.bernstein) {
    std::vector<BernsteinAtom> ba;
    for (const auto& a : atoms) ba.push_back({a.position, a.weight});
    const auto cls = bernstein_indecomposable(BernsteinFn(o.b.value_or(0.0), ba));
    r.json["exponent"] = {{"type", "bernstein"}, {"b", o.b.value_or(0.0)}, {"atoms", aj}};
    r.json["kind"] = to_string(cls.kind);
    r.json["position"] = cls.position;
  } else {
    const auto res = is_indecomposable(LKExponent(o.sigma2, atoms));
    r.json["exponent"] = {{"type", "levy-khintchine"}, {"sigma2", o.sigma2}, {"atoms", aj}};
    r.json["kind"] = to_string(res.kind);
    r.json["position"] = res.position;
  }
  r.json["pass"] = true;
  return r;
}

Report invert(const Options& o) {
  if (o.num.empty() || o.den.empty()) throw UsageError("invert needs --num and --den");
  Report r;
  r.json["subcommand"] = "invert";
  r.json["num"] = o.num;
  r.json["den"] = o.den;
  const CPoly num = to_complex(RPoly(o.num)).in_square();
  const CPoly den = to_complex(RPoly(o.den)).in_square();
  const CharFn f{ComplexRational(num, den)};
  const auto xs = density_grid(o);
  try {
    const DensityMixture m = density_from_even_rational(f);
    r.json["density"] = analytic_density(r, m, xs, "density");
  } catch (const ConjugatePairError& e) {
    r.json["partial_fractions"] = e.what();
    r.json["density"] = numeric_density(r, f, xs, "density");
  } catch (const MultiplicityError& e) {
    r.json["partial_fractions"] = e.what();
    r.json["density"] = numeric_density(r, f, xs, "density");
  }
  r.json["pass"] = r.pass;
  return r;
}

std::pair<LawSpec, CharFn> law_and_cf(const std::string& name, const Options& o) {
  if (name == "exp-diff") {
    const CharFn cf(ComplexRational(CPoly{1.0}, CPoly{1.0, -1i / o.rate1}) *
                    ComplexRational(CPoly{1.0}, CPoly{1.0, 1i / o.rate2}));
    return {law::ExpDifference{o.rate1, o.rate2}, cf};
  }
  if (name == "gamma-drift") {
    const double beta = o.beta.value_or(3.0), a = o.a.value_or(1.0), b = o.b.value_or(1.0);
    const CharFn cf(Composed{CMKernel::gamma_beta(beta), 1.0, DriftedLKExponent(b, 2.0 * a, {})});
    return {law::GammaNormalDrift{beta, a, b}, cf};
  }
  if (name == "mixture") {
    const auto ce = make_counterexample(SignedMixture{o.a.value_or(0.25)});
    return {law::SignedMixture{density_from_even_rational(ce.f2)}, ce.f2};
  }
  if (name == "laplace") return {law::Laplace{o.rate}, CharFn::laplace(1.0 / (o.rate * o.rate))};
  throw UsageError("unknown law " + name);
}

Report montecarlo(const Options& o) {
  Report r;
  r.json["subcommand"] = "montecarlo";
  const std::string target = o.target.empty() ? o.law : o.target;
  auto [law, unused] = law_and_cf(o.law, o);
  (void)unused;
  const CharFn cf = law_and_cf(target, o).second;
  r.json["target"] = target;
  const auto grid = resolve_grid(o, kMcGrid);
  r.json["grid"] = grid_json(grid);
  r.json["montecarlo"] = monte_carlo(r, law, o.law, cf, o.samples, resolve_seed(o), o.mc_c, grid);
  r.json["pass"] = r.pass;
  return r;
}

Json coefficient_json(const CoefficientSeries& c) {
  const auto& rep = c.report;
  Json bound = nullptr;
  if (rep.bound)
    bound = {{"A", rep.bound->A},
             {"p", rep.bound->p},
             {"B", rep.bound->B},
             {"q", rep.bound->q},
             {"lower_0", rep.bound->lower(0)}};
  return {{"order", c.coeffs.size() - 1},
          {"min_coeff", rep.min_coeff},
          {"argmin", rep.argmin},
          {"floor", rep.floor},
          {"negative", rep.negative.size()},
          {"partial_sum", rep.partial_sum},
          {"mass_ok", rep.mass_ok},
          {"bound", bound},
          {"bound_holds", rep.bound_holds},
          {"pass", rep.pass}};
}

Report pgf(const Options& o) {
  Report r;
  r.json["subcommand"] = "pgf";
  const double lambda = o.lambda.value_or(1.0), theta = o.theta.value_or(0.25);
  const unsigned n = o.n.value_or(1);
  if (o.order < 1) throw UsageError("--order must be at least 1");
  r.json["params"] = {{"lambda", lambda}, {"theta", theta}, {"n", n}, {"order", o.order}};
  const auto ce = discrete_counterexample(lambda, theta, n);
  r.json["operation"] = ce.op.name();

  Table id{"identity", {"z", "g1", "g2", "phi", "target", "residual"}, {}};
  double sup = 0.0;
  for (double z : linspace(0.0, 1.0, kPgfPoints)) {
    const double g1 = pgf_eval(ce.g1, z), g2 = pgf_eval(ce.g2, z);
    const double phi = phi_real(ce.op, g1, g2), t = pgf_eval(ce.target, z);
    sup = std::max(sup, std::abs(phi - t));
    id.rows.push_back({z, g1, g2, phi, t, std::abs(phi - t)});
  }
  const bool id_ok = sup < kPgfIdentityTolerance;
  r.json["identity"] = {
      {"sup", sup}, {"tolerance", kPgfIdentityTolerance}, {"points", kPgfPoints}, {"pass", id_ok}};
  r.tables.push_back(std::move(id));
  r.pass = id_ok;

  const PGF* gs[2] = {&ce.g1, &ce.g2};
  const CMKernel L = n == 1 ? CMKernel::kac() : CMKernel::gamma_beta(n);
  Json factors = Json::array();
  for (int j = 0; j < 2; ++j) {
    const auto c = coefficients(*gs[j], o.order);
    const auto aff = affineness_test(*gs[j], n);
    Json recover;
    try {
      const auto fit = discrete_factor_recover(L, BernsteinFn::linear(1.0), *gs[j]);
      recover = {{"excluded", false}, {"a", fit.a}, {"residual", fit.residual}};
    } catch (const StructureError& e) {
      recover = {{"excluded", true}, {"residual", e.residual()}};
    }
    const bool ok = c.report.pass && !aff.affine && recover["excluded"].get<bool>();
    factors.push_back({{"factor", j + 1},
                       {"value_at_0", pgf_eval(*gs[j], 0.0)},
                       {"coefficients", coefficient_json(c)},
                       {"affineness", {{"residual", aff.residual}, {"affine", aff.affine}}},
                       {"family_fit", recover},
                       {"pass", ok}});
    r.pass = r.pass && ok;
    Table t{"coefficients_g" + std::to_string(j + 1), {"k", "coeff"}, {}};
    for (std::size_t k = 0; k < c.coeffs.size(); ++k)
      t.rows.push_back({static_cast<double>(k), c.coeffs[k]});
    r.tables.push_back(std::move(t));
  }
  r.json["factors"] = factors;
  r.json["pass"] = r.pass;
  return r;
}

Report limit_scan(const Options& o) {
  Report r;
  r.json["subcommand"] = "limit-scan";
  const std::string family = o.family.empty() ? "power" : o.family;
  r.json["family"] = family;
  const auto grid = resolve_grid(o, kLimitGrid);
  r.json["grid"] = grid_json(grid);
  LimitReport rep;
  if (family == "power") {
    const double a = o.a.value_or(1.0), theta = o.theta.value_or(0.25);
    r.json["params"] = {{"a", a}, {"theta", theta}, {"n_values", o.n_values}};
    rep = gaussian_limit_scan(PowerFamilyScan{a, theta, o.n_values}, grid,
                              o.threshold.value_or(0.01));
  } else {
    const double a1 = o.a1.value_or(1.0), a2 = o.a2.value_or(2.0);
    std::vector<double> drifts;
    for (double beta : o.betas) drifts.push_back(shrinking_drift(beta));
    r.json["params"] = {{"a1", a1}, {"a2", a2}, {"betas", o.betas}, {"drifts", drifts}};
    rep = gaussian_limit_scan(GammaDriftScan{a1, a2, o.betas, drifts}, grid,
                              o.threshold.value_or(0.03));
  }
  Table t{"limit", {"index", "sup_f1", "sup_f2", "sup"}, {}};
  for (const auto& e : rep.entries) t.rows.push_back({e.index, e.sup_f1, e.sup_f2, e.sup});
  r.tables.push_back(std::move(t));
  r.json["non_increasing"] = rep.non_increasing;
  r.json["final_sup"] = rep.final_sup;
  r.json["threshold"] = rep.threshold;
  r.pass = rep.pass;
  r.json["pass"] = r.pass;
  return r;
}

Report factor(const Options& o) {
  Report r;
  r.json["subcommand"] = "factor";
  const CMKernel L = parse_kernel(o);
  r.json["kernel"] = L.name();
  r.json["from"] = o.from;
  const auto atoms = parse_atoms(o.atoms);
  const double scale = o.scale.value_or(0.5);
  FactorFit fit{};
  try {
    if (o.discrete) {
      std::vector<BernsteinAtom> ba;
      for (const auto& a : atoms) ba.push_back({a.position, a.weight});
      const BernsteinFn eta(o.b.value_or(atoms.empty() ? 1.0 : 0.0), ba);
      std::optional<PGF> G;
      if (o.from == "composed") {
        G = PGF(ComposedZ{L, scale, eta});
      } else if (o.from == "pgf-g1" || o.from == "pgf-g2") {
        const auto ce = discrete_counterexample(o.lambda.value_or(1.0), o.theta.value_or(0.25), 1);
        G = o.from == "pgf-g1" ? ce.g1 : ce.g2;
      } else {
        throw UsageError("unknown --from for --discrete: " + o.from);
      }
      fit = discrete_factor_recover(L, eta, *G);
    } else {
      const LKExponent psi(atoms.empty() && o.sigma2 == 0.0 ? 2.0 : o.sigma2, atoms);
      std::optional<CharFn> f;
      if (o.from == "composed") {
        f = compose(L, scale, psi);
      } else if (o.from == "mixture-f1" || o.from == "mixture-f2") {
        const auto ce = make_counterexample(SignedMixture{o.a.value_or(0.25)});
        f = o.from == "mixture-f1" ? ce.f1 : ce.f2;
      } else if (o.from == "laplace") {
        f = CharFn::laplace(o.a.value_or(0.5));
      } else {
        throw UsageError("unknown --from: " + o.from);
      }
      fit = factor_recover(L, psi, *f, resolve_grid(o, kCfGrid));
    }
    r.json["recovered"] = true;
    r.json["a"] = fit.a;
    r.json["residual"] = fit.residual;
  } catch (const StructureError& e) {
    r.json["recovered"] = false;
    r.json["residual"] = e.residual();
    r.json["reason"] = e.what();
    r.pass = false;
  }
  r.json["pass"] = r.pass;
  return r;
}

void emit(const Report& r, const Options& o, std::ostream& out) {
  std::ostringstream os;
  Json fields = r.json;
  if (!fields.contains("pass")) fields["pass"] = r.pass;
  if (o.format == "csv") {
    if (r.tables.empty())
      write_csv_fields(os, fields);
    else
      write_csv(os, r.tables);
  } else {
    Json j = fields;
    if (!r.tables.empty()) j["tables"] = tables_json(r.tables);
    write_json(os, j);
  }
  if (o.out.empty()) {
    out << os.str();
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw UsageError("cannot open " + o.out + " for writing");
  f << os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Kac's operation on characteristic functions: constructions, checks and sampling",
               "chfn"};
  app.require_subcommand(1);

  auto* vk = app.add_subcommand("verify-kac", "Check Kac's identity on a pair");
  vk->add_option("--laplace", o.laplace, "Laplace scales a1 a2")->expected(2);
  vk->add_option("--pair", o.pair, "Pair instead of --laplace")
      ->check(CLI::IsMember({"laplace", "exp-diff", "mixture"}));
  vk->add_option("--a", o.a, "Mixture parameter");
  add_grid(vk, o, kCfGrid);
  add_tol(vk, o);
  add_output(vk, o);

  auto* ce = app.add_subcommand(
      "counterexample", "Construct a counterexample, verify it, invert it, optionally sample it");
  ce->add_option("--kind", o.kind)
      ->required()
      ->check(CLI::IsMember({"exp-diff", "mixture", "gamma-drift", "power"}));
  ce->add_option("--a", o.a, "mixture: a (0.25); power: a (1)");
  ce->add_option("--beta", o.beta, "gamma-drift beta (3)");
  ce->add_option("--a1", o.a1, "gamma-drift a1 (1)");
  ce->add_option("--a2", o.a2, "gamma-drift a2 (2)");
  ce->add_option("--b", o.b, "gamma-drift drift b (1)");
  ce->add_option("--n", o.n, "power exponent n (5)")->check(CLI::PositiveNumber);
  ce->add_option("--theta", o.theta, "power theta (0.25)");
  ce->add_option("--mc", o.mc, "Monte Carlo sample size, 0 to skip")->capture_default_str();
  ce->add_option("--mc-c", o.mc_c, "Monte Carlo tolerance constant c in c/sqrt(n)")
      ->capture_default_str();
  ce->add_option("--x-max", o.x_max, "Density grid half-width (10)");
  ce->add_option("--x-count", o.x_count, "Density grid points (401)");
  add_seed(ce, o);
  add_grid(ce, o, kCfGrid);
  add_tol(ce, o);
  add_output(ce, o);

  auto* cl = app.add_subcommand("classify", "Classify a rational pair with Kac's identity");
  cl->add_option("--pair", o.pair)->check(CLI::IsMember({"laplace", "exp-diff", "mixture"}));
  cl->add_option("--a1", o.a1, "laplace a1 (0.3)");
  cl->add_option("--a2", o.a2, "laplace a2 (0.7)");
  cl->add_option("--a", o.a, "mixture a (0.25)");
  cl->add_option("--symmetry", o.symmetry, "Claimed symmetry of f1")
      ->check(CLI::IsMember({"real", "even", "none"}));
  add_grid(cl, o, kCfGrid);
  add_output(cl, o);

  auto* ind = app.add_subcommand("indecomposable", "Classify an atomic exponent");
  ind->add_option("--sigma2", o.sigma2, "Gaussian coefficient")->capture_default_str();
  ind->add_option("--atom", o.atoms, "position:weight, repeatable");
  ind->add_flag("--bernstein", o.bernstein, "Bernstein function b u + sum c (1 - e^{-s u})");
  ind->add_option("--b", o.b, "Bernstein linear coefficient (0)");
  add_output(ind, o);

  auto* inv =
      app.add_subcommand("invert", "Density of a real even rational characteristic function");
  inv->add_option("--num", o.num, "Numerator coefficients in xi^2, ascending")->delimiter(',');
  inv->add_option("--den", o.den, "Denominator coefficients in xi^2, ascending")->delimiter(',');
  inv->add_option("--x-max", o.x_max, "Density grid half-width (10)");
  inv->add_option("--x-count", o.x_count, "Density grid points (401)");
  add_output(inv, o);

  auto* mc = app.add_subcommand("montecarlo",
                                "Compare an empirical characteristic function with a target");
  const std::vector<std::string> laws{"exp-diff", "gamma-drift", "mixture", "laplace"};
  mc->add_option("--law", o.law)->required()->check(CLI::IsMember(laws));
  mc->add_option("--target", o.target, "Target characteristic function (default: the law's own)")
      ->check(CLI::IsMember(laws));
  mc->add_option("--samples", o.samples)->capture_default_str();
  mc->add_option("--rate", o.rate, "laplace rate")->capture_default_str();
  mc->add_option("--rate1", o.rate1, "exp-diff rate of X")->capture_default_str();
  mc->add_option("--rate2", o.rate2, "exp-diff rate of Y")->capture_default_str();
  mc->add_option("--beta", o.beta, "gamma-drift beta (3)");
  mc->add_option("--a", o.a, "gamma-drift a (1); mixture a (0.25)");
  mc->add_option("--b", o.b, "gamma-drift b (1)");
  mc->add_option("--mc-c", o.mc_c, "Tolerance constant c in c/sqrt(n)")->capture_default_str();
  add_seed(mc, o);
  add_grid(mc, o, kMcGrid);
  add_output(mc, o);

  auto* pg = app.add_subcommand("pgf", "Discrete counterexample on generating functions");
  pg->add_option("--lambda", o.lambda, "lambda (1)");
  pg->add_option("--theta", o.theta, "theta in (0, 1/2) (0.25)");
  pg->add_option("--n", o.n, "power n, 1 for Kac's operation (1)")->check(CLI::PositiveNumber);
  pg->add_option("--order", o.order, "Highest coefficient index")->capture_default_str();
  add_output(pg, o);

  auto* ls =
      app.add_subcommand("limit-scan", "Distance of counterexample families to Gaussian limits");
  ls->add_option("--family", o.family)->check(CLI::IsMember({"power", "gamma-drift"}));
  ls->add_option("--a", o.a, "power a (1)");
  ls->add_option("--theta", o.theta, "power theta (0.25)");
  ls->add_option("--n-values", o.n_values)->delimiter(',')->capture_default_str();
  ls->add_option("--a1", o.a1, "gamma-drift a1 (1)");
  ls->add_option("--a2", o.a2, "gamma-drift a2 (2)");
  ls->add_option("--betas", o.betas)->delimiter(',')->capture_default_str();
  ls->add_option("--threshold", o.threshold, "Final sup bound (power 0.01, gamma-drift 0.03)");
  add_grid(ls, o, kLimitGrid);
  add_output(ls, o);

  auto* fa =
      app.add_subcommand("factor", "Recover a in f = L(a psi) for an indecomposable exponent");
  fa->add_option("--kernel", o.kernel)
      ->check(CLI::IsMember({"exp", "kac", "gamma-beta", "gen-linnik", "stable-exp"}))
      ->capture_default_str();
  fa->add_option("--beta", o.beta, "Kernel beta");
  fa->add_option("--alpha", o.alpha, "gen-linnik alpha");
  fa->add_option("--sigma2", o.sigma2, "Gaussian coefficient of psi");
  fa->add_option("--atom", o.atoms, "position:weight, repeatable");
  fa->add_option("--b", o.b, "Bernstein linear coefficient (--discrete)");
  fa->add_flag("--discrete", o.discrete, "Work with generating functions and Bernstein exponents");
  fa->add_option("--from", o.from, "composed | laplace | mixture-f1 | mixture-f2 | pgf-g1 | pgf-g2")
      ->capture_default_str();
  fa->add_option("--scale", o.scale, "a for --from composed (0.5)");
  fa->add_option("--a", o.a, "laplace or mixture parameter");
  fa->add_option("--lambda", o.lambda, "pgf lambda (1)");
  fa->add_option("--theta", o.theta, "pgf theta (0.25)");
  add_grid(fa, o, kCfGrid);
  add_output(fa, o);

  std::vector<std::string> argv_store{"chfn"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "chfn: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  try {
    Report r;
    if (*vk)
      r = verify_kac(o);
    else if (*ce)
      r = counterexample(o);
    else if (*cl)
      r = classify(o);
    else if (*ind)
      r = indecomposable(o);
    else if (*inv)
      r = invert(o);
    else if (*mc)
      r = montecarlo(o);
    else if (*pg)
      r = pgf(o);
    else if (*ls)
      r = limit_scan(o);
    else
      r = factor(o);
    emit(r, o, out);
    return r.pass ? 0 : 1;
  } catch (const UsageError& e) {
    err << "chfn: " << e.what() << "\n";
    return 2;
  } catch (const AdmissibilityError& e) {
    err << "chfn: " << e.what() << " (bound " << std::setprecision(6) << e.bound() << ")\n";
    return 2;
  } catch (const ParameterError& e) {
    err << "chfn: invalid parameters: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "chfn: check failed: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace chfn::cli
