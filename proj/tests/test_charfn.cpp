#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chfn/charfn.hpp"
#include "chfn/error.hpp"

using namespace chfn;
using namespace std::complex_literals;

namespace {

cplx gamma_drift_oracle(double beta, double a, double b, double xi) {
  return std::pow(1.0 + (a * xi * xi - 1i * b * xi) / beta, -beta);
}

double power_family_f1(double a, double n, double theta, double xi) {
  return std::pow(0.5 + 0.5 / (1.0 + theta * a / n * xi * xi), n);
}

std::vector<CounterexampleKind> shipped_kinds() {
  return {ExpDifference{},          SignedMixture{0.05},          SignedMixture{0.25},
          SignedMixture{0.45},      GammaDrift{1, 0.5, 0.5, 0.5}, GammaDrift{3, 1, 2, 1},
          GammaDrift{4, 1, 1, 3.9}, GammaDrift{0.6, 2, 0.3, -2},  PowerFamily{1, 5, 0.25},
          PowerFamily{2, 50, 0.1}};
}

}  // namespace

TEST_CASE("polynomial arithmetic") {
  const RPoly p{1.0, -3.0, 2.0};  // (1 − x)(1 − 2x)
  CHECK(p.degree() == 2);
  CHECK(p(0.5) == 0.0);
  CHECK(p.derivative() == RPoly{-3.0, 4.0});
  const auto [q, r] = divmod(p, RPoly{1.0, -1.0});
  CHECK(q == RPoly{1.0, -2.0});
  CHECK(r.is_zero());
  CHECK(RPoly{1.0, 1.0}.pow(3) == RPoly{1.0, 3.0, 3.0, 1.0});
  CHECK(RPoly{1.0, 2.0}.in_square() == RPoly{1.0, 0.0, 2.0});
  const auto g = poly_gcd(p, RPoly{-1.0, 0.0, 1.0}, 1e-12);  // common factor x − 1
  CHECK(g.degree() == 1);
  CHECK(std::abs(g(1.0)) < 1e-14);
  CHECK(RPoly{}.degree() == -1);
}

TEST_CASE("complex rational normalization and reduction") {
  // (2 + 2ξ)/(4 + 4ξ + ...) with a shared factor (1 + ξ).
  const ComplexRational r(CPoly{2.0, 2.0}, CPoly{4.0, 6.0, 2.0});
  CHECK(r.den().degree() == 1);
  CHECK(std::abs(r.den().coeff(0) - 1.0) < 1e-15);
  for (double x : {0.3, 1.7}) CHECK(std::abs(r(x) - 1.0 / (2.0 + x)) < 1e-15);
  CHECK_THROWS_AS(ComplexRational(CPoly{1.0}, CPoly{}), ParameterError);
  CHECK_THROWS_AS(ComplexRational(CPoly{1.0}, CPoly{0.0, 1.0}), ParameterError);
  CHECK_THROWS_AS(ComplexRational(CPoly{1.0}, CPoly{1.0, 0.0, -1.0})(1.0), EvaluationError);
  const auto inv = r.reciprocal();
  CHECK(std::abs(inv(0.4) - 2.4) < 1e-14);
  const auto s = r + ComplexRational::constant(1.0);
  CHECK(std::abs(s(1.0) - (1.0 + 1.0 / 3.0)) < 1e-15);
  CHECK(ComplexRational(CPoly{1.0}, CPoly{1.0, 0.0, 3.0}).is_real_even());
  CHECK_FALSE(ComplexRational(CPoly{1.0}, CPoly{1.0, 0.5i, 3.0}).is_real_even());
}

TEST_CASE("real polynomial roots") {
  auto has_root = [](const std::vector<cplx>& rs, cplx z) {
    for (auto r : rs)
      if (std::abs(r - z) < 1e-10) return true;
    return false;
  };
  const auto r2 = real_poly_roots(RPoly{2.0, -3.0, 1.0});
  CHECK(has_root(r2, 1.0));
  CHECK(has_root(r2, 2.0));
  const auto rc = real_poly_roots(RPoly{1.0, 0.0, 1.0});
  CHECK(has_root(rc, 1i));
  CHECK(has_root(rc, -1i));
  // (u + 1)(u + 2)(u + 3)(u + 5)
  const auto r4 = real_poly_roots(RPoly{30.0, 61.0, 41.0, 11.0, 1.0});
  REQUIRE(r4.size() == 4);
  for (double z : {-1.0, -2.0, -3.0, -5.0}) CHECK(has_root(r4, z));
  CHECK_THROWS_AS(real_poly_roots(RPoly{1.0}), ParameterError);
}

TEST_CASE("eval_cf") {
  const auto ce = make_counterexample(ExpDifference{});
  CHECK(std::abs(eval_cf(ce.f1, 1.0) - (0.6 + 0.2i)) < 1e-15);
  CHECK(std::abs(eval_cf(CharFn::laplace(1.0), 2.0) - 0.2) < 1e-15);
  for (const auto& k : shipped_kinds()) {
    const auto c = make_counterexample(k);
    CHECK(std::abs(eval_cf(c.f1, 0.0) - 1.0) < 1e-15);
    CHECK(std::abs(eval_cf(c.f2, 0.0) - 1.0) < 1e-15);
    CHECK(std::abs(eval_cf(c.target, 0.0) - 1.0) < 1e-15);
  }
  CHECK_THROWS_AS(CharFn(ComplexRational(CPoly{2.0}, CPoly{1.0, 0.0, 1.0})), ParameterError);
}

TEST_CASE("tabulated") {
  const Tabulated t({-1.0, 0.0, 2.0}, {cplx(0.5), cplx(1.0), cplx(0.0, 1.0)});
  CHECK(t(1.0) == cplx(0.5, 0.5));
  CHECK(t(-0.5) == cplx(0.75));
  CHECK_THROWS_AS(t(2.5), RangeError);
  CHECK(eval_cf(CharFn(t), 0.0) == cplx(1.0));
  CHECK_THROWS_AS(Tabulated({0.0, -1.0}, {cplx(1.0), cplx(1.0)}), ParameterError);
  CHECK_THROWS_AS(Tabulated({-1.0, 1.0}, {cplx(0.5), cplx(0.5)}), ParameterError);
  CHECK_THROWS_AS(Tabulated({0.0, 1.0}, {cplx(1.0)}), ParameterError);
}

TEST_CASE("verify_identity") {
  const auto ce = make_counterexample(ExpDifference{});
  const auto grid = linspace(-10.0, 10.0, 101);
  const auto rep = verify_identity(ce.f1, ce.f2, CharFn::laplace(1.0), grid, PhiOp::kac());
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-12);
  CHECK(rep.points.size() == 101);

  CHECK(verify_identity(CharFn::laplace(0.5), CharFn::laplace(0.5), CharFn::laplace(1.0), grid,
                        PhiOp::kac())
            .pass);
  CHECK_FALSE(verify_identity(CharFn::laplace(0.5), CharFn::laplace(0.6), CharFn::laplace(1.0),
                              grid, PhiOp::kac())
                  .pass);

  const auto mix = make_counterexample(SignedMixture{0.25});
  CHECK(std::abs(eval_cf(mix.f1, 1.0) - 0.9) < 1e-15);
  CHECK(std::abs(eval_cf(mix.f2, 1.0) - 2.25 / 4.25) < 1e-15);
  const std::vector<double> one{1.0};
  const auto r1 = verify_identity(mix.f1, mix.f2, mix.target, one, mix.op);
  CHECK(r1.pass);
  CHECK(std::abs(1.0 / r1.points[0].f1 + 1.0 / r1.points[0].f2 - 3.0) < 1e-14);

  // A pole on the grid is recorded, not thrown.
  const CharFn bad(ComplexRational(CPoly{1.0}, CPoly{1.0, 0.0, -1.0}));
  const auto r2 = verify_identity(bad, CharFn::one(), bad, grid, PhiOp::kac());
  CHECK_FALSE(r2.pass);
  CHECK(r2.failures.size() == 2);
}

TEST_CASE("counterexample identities hold on [-50, 50]") {
  const auto grid = linspace(-50.0, 50.0, 1001);
  for (const auto& k : shipped_kinds()) {
    const auto c = make_counterexample(k);
    const auto rep = verify_identity(c.f1, c.f2, c.target, grid, c.op);
    INFO(c.op.name());
    CHECK(rep.failures.empty());
    CHECK(rep.max_residual < 1e-10);
  }
}

TEST_CASE("Hermitian symmetry and realness") {
  for (const auto& k : shipped_kinds()) {
    const auto c = make_counterexample(k);
    for (double xi : {0.3, 1.0, 2.7, 8.0, 19.0}) {
      for (const auto* f : {&c.f1, &c.f2, &c.target})
        CHECK(std::abs(eval_cf(*f, -xi) - std::conj(eval_cf(*f, xi))) < 1e-15);
      if (std::holds_alternative<SignedMixture>(k) || std::holds_alternative<PowerFamily>(k)) {
        CHECK(eval_cf(c.f1, xi).imag() == 0.0);
        CHECK(eval_cf(c.f2, xi).imag() == 0.0);
        CHECK(eval_cf(c.f1, xi) == eval_cf(c.f1, -xi));
      }
    }
  }
  const auto e = make_counterexample(ExpDifference{});
  for (double xi : {-2.0, 0.5, 6.0})
    CHECK(std::abs(eval_cf(e.f2, xi) - std::conj(eval_cf(e.f1, xi))) < 1e-16);
}

TEST_CASE("closed forms of the families") {
  const auto g = make_counterexample(GammaDrift{3, 1, 2, 1});
  for (double xi : {-4.0, -0.5, 1.2, 7.5}) {
    CHECK(std::abs(eval_cf(g.f1, xi) - gamma_drift_oracle(3, 1, 1, xi)) < 1e-14);
    CHECK(std::abs(eval_cf(g.f2, xi) - gamma_drift_oracle(3, 2, -1, xi)) < 1e-14);
    CHECK(std::abs(eval_cf(g.target, xi) - std::pow(1.0 + 3.0 * xi * xi / 3.0, -3.0)) < 1e-14);
  }
  const auto p = make_counterexample(PowerFamily{2, 50, 0.1});
  for (double xi : {0.0, 0.4, 3.0, 10.0}) {
    CHECK(std::abs(eval_cf(p.f1, xi) - power_family_f1(2, 50, 0.1, xi)) < 1e-14);
    CHECK(std::abs(eval_cf(p.target, xi) - std::pow(1.0 + 2.0 * xi * xi / 50.0, -50.0)) < 1e-14);
  }
  const auto e = make_counterexample(ExpDifference{});
  const auto same = make_counterexample(GammaDrift{1, 0.5, 0.5, 0.5});
  for (double xi : linspace(-20.0, 20.0, 81)) {
    CHECK(std::abs(eval_cf(same.f1, xi) - eval_cf(e.f1, xi)) < 1e-14);
    CHECK(std::abs(eval_cf(same.f2, xi) - eval_cf(e.f2, xi)) < 1e-14);
  }
}

TEST_CASE("counterexample parameter errors") {
  CHECK_THROWS_AS(make_counterexample(SignedMixture{0.5}), ParameterError);
  CHECK_THROWS_AS(make_counterexample(SignedMixture{0.0}), ParameterError);
  CHECK_THROWS_AS(make_counterexample(PowerFamily{1, 0, 0.25}), ParameterError);
  CHECK_THROWS_AS(make_counterexample(PowerFamily{1, 3, 0.5}), ParameterError);
  CHECK_THROWS_AS(make_counterexample(GammaDrift{0, 1, 1, 1}), ParameterError);
  CHECK_THROWS_AS(make_counterexample(GammaDrift{3, 0, 1, 1}), ParameterError);
  CHECK_NOTHROW(make_counterexample(GammaDrift{4, 1, 1, 3.9}));
  try {
    make_counterexample(GammaDrift{4, 1, 1, 4.1});
    FAIL("expected AdmissibilityError");
  } catch (const AdmissibilityError& e) {
    CHECK(e.bound() == doctest::Approx(4.0).epsilon(1e-14));
  }
  CHECK(gamma_drift_bound(4, 1, 1) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(std::isinf(gamma_drift_bound(2, 1, 1)));
}

TEST_CASE("principal_branch_check") {
  const auto grid = default_grid();
  const auto r1 = principal_branch_check(1, 0.5, 0.5, grid);
  CHECK(r1.pass);
  const auto r2 = principal_branch_check(4, 1, 2, grid);
  CHECK(r2.analytic_max_arg == doctest::Approx(std::atan(0.5)).epsilon(1e-15));
  CHECK(r2.maximizer == doctest::Approx(2.0));
  CHECK(r2.grid_max_arg <= r2.analytic_max_arg + 1e-15);
  CHECK(r2.grid_max_arg == doctest::Approx(std::atan(0.5)).epsilon(1e-12));  // ξ = 2 is on the grid
  CHECK(r2.limit == doctest::Approx(std::numbers::pi / 4));
  CHECK(r2.pass);
  // At the bound b = 4 the maximum equals π/4, which is not strictly below it.
  const auto edge = principal_branch_check(4, 1, 4, grid);
  CHECK(edge.analytic_max_arg == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
  CHECK_FALSE(edge.branch_ok);
  const auto r3 = principal_branch_check(4, 1, 8, grid);
  CHECK(r3.analytic_max_arg == doctest::Approx(std::atan(2.0)).epsilon(1e-15));
  CHECK_FALSE(r3.branch_ok);
  CHECK_FALSE(r3.pass);
}

TEST_CASE("gaussian limit scan") {
  const auto g = CharFn::gaussian(0.125);
  CHECK(eval_cf(g, 1.0).real() == doctest::Approx(std::exp(-0.125)).epsilon(1e-15));
  CHECK(eval_cf(g, 1.0).real() == doctest::Approx(0.8825).epsilon(1e-4));

  const auto grid = linspace(-5.0, 5.0, 201);
  const auto rep = gaussian_limit_scan(PowerFamilyScan{1.0, 0.25, {1, 10, 100, 1000}}, grid, 0.01);
  REQUIRE(rep.entries.size() == 4);
  CHECK(rep.entries[0].sup > 0.0);
  CHECK(std::isfinite(rep.entries[0].sup));
  CHECK(rep.non_increasing);
  CHECK(rep.final_sup < 0.01);
  CHECK(rep.pass);

  // The n = 1 gap is the signed-mixture pair against its Gaussian limits.
  double gap = 0.0;
  for (double xi : grid)
    gap = std::max(gap, std::abs(power_family_f1(1, 1, 0.25, xi) - std::exp(-0.125 * xi * xi)));
  CHECK(rep.entries[0].sup_f1 == doctest::Approx(gap).epsilon(1e-12));

  std::vector<double> betas{16, 64, 256, 1024, 4096}, drifts;
  for (double b : betas) drifts.push_back(shrinking_drift(b));
  const auto gd = gaussian_limit_scan(GammaDriftScan{1.0, 2.0, betas, drifts}, grid, 0.05);
  CHECK(gd.non_increasing);
  CHECK(gd.pass);
  CHECK(shrinking_drift(1.0) == doctest::Approx(std::min(1.0, std::tan(std::numbers::pi / 2.01))));
  CHECK_THROWS_AS(gaussian_limit_scan(GammaDriftScan{1, 1, {4}, {4.1}}, grid, 1.0),
                  AdmissibilityError);
}
