#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chfn/error.hpp"
#include "chfn/factor.hpp"
#include "chfn/gid.hpp"
#include "chfn/inversion.hpp"
#include "chfn/lk.hpp"
#include "support/brute_force.hpp"

using namespace chfn;
using chfn::testing::brute_force_decomposable;
using chfn::testing::random_exponent;
using namespace std::complex_literals;

TEST_CASE("lk_eval") {
  const double xi = 1.7;
  CHECK(lk_eval(LKExponent(2.0, {}), xi) == doctest::Approx(xi * xi).epsilon(1e-15));
  CHECK(lk_eval(LKExponent(0.0, {{1.0, 1.0}}), std::numbers::pi) ==
        doctest::Approx(2.0).epsilon(1e-15));
  // −ψ(1) = iγ − σ²/2 for γ = 1, σ² = 1.
  const auto v = lk_eval(DriftedLKExponent(1.0, 1.0, {}), 1.0);
  CHECK(std::abs(v - (0.5 - 1i)) < 1e-15);
  // Compensated atom inside the unit interval and a plain atom outside.
  const DriftedLKExponent d(0.0, 0.0, {{0.5, 2.0}, {-3.0, 1.0}});
  const double x = 0.8;
  const cplx expected = -(2.0 * (std::exp(1i * x * 0.5) - 1.0 - 1i * x * 0.5) +
                          1.0 * (std::exp(1i * x * -3.0) - 1.0));
  CHECK(std::abs(lk_eval(d, x) - expected) < 1e-15);
}

TEST_CASE("exponent validation and canonical form") {
  CHECK_THROWS_AS(LKExponent(-1.0, {}), ParameterError);
  CHECK_THROWS_AS(LKExponent(0.0, {{-1.0, 1.0}}), ParameterError);
  CHECK_THROWS_AS(LKExponent(0.0, {{1.0, 0.0}}), ParameterError);
  CHECK_THROWS_AS(DriftedLKExponent(0.0, 0.0, {{0.0, 1.0}}), ParameterError);
  const LKExponent e(0.0, {{2.0, 1.0}, {1.0, 1.0}, {2.0 + 1e-13, 0.5}});
  REQUIRE(e.atoms().size() == 2);
  CHECK(e.atoms()[0].position == 1.0);
  CHECK(e.atoms()[1].weight == doctest::Approx(1.5));
}

TEST_CASE("lk_combine") {
  const LKExponent psi(0.7, {{1.0, 2.0}, {3.0, 0.5}});
  CHECK(lk_combine(psi, LKExponent{}, 1.0, 1.0) == psi);
  CHECK(lk_combine(LKExponent(1.0, {}), LKExponent(1.0, {}), 1.0, 1.0).sigma2() == 2.0);
  const auto m = lk_combine(LKExponent(0.0, {{1.0, 1.0}}), LKExponent(0.0, {{1.0, 2.0}}), 1.0, 1.0);
  REQUIRE(m.atoms().size() == 1);
  CHECK(m.atoms()[0].weight == 3.0);
  const auto s = lk_combine(psi, psi, 0.25, 2.0);
  for (double xi : {0.3, 1.9, 4.4})
    CHECK(lk_eval(s, xi) == doctest::Approx(2.25 * lk_eval(psi, xi)).epsilon(1e-14));
}

TEST_CASE("is_indecomposable examples") {
  CHECK(is_indecomposable(LKExponent(3.0, {})).kind == Decomposability::IndecomposableGaussian);
  const auto c = is_indecomposable(LKExponent(0.0, {{2.0, 5.0}}));
  CHECK(c.kind == Decomposability::IndecomposableCosine);
  CHECK(c.position == 2.0);
  CHECK(is_indecomposable(LKExponent(1.0, {{1.0, 1.0}})).kind == Decomposability::Decomposable);
  CHECK(is_indecomposable(LKExponent{}).kind == Decomposability::Zero);
}

TEST_CASE("random exponents: positivity, classifier, recombination, Bochner") {
  std::mt19937_64 gen(20240611);
  for (int trial = 0; trial < 1000; ++trial) {
    const LKExponent psi = random_exponent(gen);
    CHECK(lk_eval(psi, 0.0) == 0.0);
    for (double xi : {-7.3, -0.2, 0.9, 3.3, 11.0}) CHECK(lk_eval(psi, xi) >= 0.0);

    const auto kind = is_indecomposable(psi).kind;
    if (psi.sigma2() == 0.0 && psi.atoms().empty()) {
      CHECK(kind == Decomposability::Zero);
      continue;
    }
    INFO("trial " << trial);
    CHECK((kind == Decomposability::Decomposable) == brute_force_decomposable(psi));

    // Gaussian and atomic parts recombine to the whole.
    const LKExponent gauss(psi.sigma2(), {});
    const LKExponent jumps(0.0, psi.atoms());
    const auto back = lk_combine(gauss, jumps, 1.0, 1.0);
    for (double xi : {0.4, 2.5, 9.1})
      CHECK(std::abs(lk_eval(back, xi) - lk_eval(psi, xi)) <=
            1e-12 * std::max(1.0, lk_eval(psi, xi)));

    if (trial % 20 == 0) {
      std::uniform_real_distribution<double> u(-5.0, 5.0);
      std::vector<double> pts(16);
      for (auto& p : pts) p = u(gen);
      CHECK(bochner_min_eig(compose(CMKernel::exp(), 1.0, psi), pts) >= -1e-10);
    }
  }
}

TEST_CASE("geometric_id_check") {
  const auto lap = geometric_id_check(CharFn(ComplexRational(CPoly{1.0}, CPoly{1.0, 0.0, 0.8})));
  CHECK(lap.verdict == GidVerdict::Gid);
  REQUIRE(lap.form);
  CHECK(lap.form->gamma == 0.0);
  CHECK(lap.form->a == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(lap.gram.size() == 4);
  for (const auto& g : lap.gram) CHECK(g.min_eig >= -1e-10);

  // Composed Kac forms are accepted through their rational expansion.
  CHECK(geometric_id_check(CharFn::laplace(0.4)).verdict == GidVerdict::Gid);

  const auto ce = make_counterexample(ExpDifference{});
  const auto r1 = geometric_id_check(ce.f1);
  CHECK(r1.verdict == GidVerdict::Gid);
  REQUIRE(r1.form);
  CHECK(r1.form->gamma == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r1.form->a == doctest::Approx(0.5).epsilon(1e-14));

  for (double a : {0.05, 0.25, 0.45}) {
    const auto mix = make_counterexample(SignedMixture{a});
    const auto r2 = geometric_id_check(mix.f2);
    CHECK(r2.verdict != GidVerdict::Gid);
    CHECK_FALSE(r2.form);
  }

  // A rational that is not a characteristic function at all: 1/(1 + ξ⁴) has
  // exp(−tψ) failing positive definiteness.
  const auto quartic =
      geometric_id_check(CharFn(ComplexRational(CPoly{1.0}, CPoly{1.0, 0, 0, 0, 1.0})));
  CHECK(quartic.verdict == GidVerdict::NotGid);

  CHECK_THROWS_AS(geometric_id_check(CharFn::gaussian(1.0)), ParameterError);
}

TEST_CASE("main_theorem_classify") {
  const auto l1 = CharFn::laplace(0.3), l2 = CharFn::laplace(0.7);
  const auto c = main_theorem_classify(l1, l2, Symmetry::Even);
  REQUIRE(std::holds_alternative<LaplaceFactors>(c));
  CHECK(std::get<LaplaceFactors>(c).a1 == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(std::get<LaplaceFactors>(c).a2 == doctest::Approx(0.7).epsilon(1e-14));

  const auto ce = make_counterexample(ExpDifference{});
  const auto d = main_theorem_classify(ce.f1, ce.f2, Symmetry::None);
  REQUIRE(std::holds_alternative<DriftedFactors>(d));
  const auto& df = std::get<DriftedFactors>(d);
  CHECK(df.gamma1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(df.gamma2 == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(df.a1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(df.a2 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(df.drifts_cancel);
  CHECK(df.scales_sum_to_one);

  const auto mix = make_counterexample(SignedMixture{0.25});
  const auto n = main_theorem_classify(mix.f1, mix.f2, Symmetry::Even);
  REQUIRE(std::holds_alternative<NotGidFactor>(n));
  CHECK(std::get<NotGidFactor>(n).factor == 1);

  CHECK_THROWS_AS(main_theorem_classify(ce.f1, ce.f2, Symmetry::Even), PreconditionError);
  CHECK_THROWS_AS(main_theorem_classify(ce.f1, ce.f2, Symmetry::RealValued), PreconditionError);
  CHECK_THROWS_AS(main_theorem_classify(l1, l1, Symmetry::Even), PreconditionError);

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    double a = u(gen);
    if (a == 0.0) a = 0.5;
    const auto k = main_theorem_classify(
        compose(CMKernel::kac(), a, LKExponent::quadratic(1.0)),
        compose(CMKernel::kac(), 1.0 - a, LKExponent::quadratic(1.0)), Symmetry::RealValued);
    REQUIRE(std::holds_alternative<LaplaceFactors>(k));
    CHECK(std::abs(std::get<LaplaceFactors>(k).a1 - a) <= 1e-12);
    CHECK(std::abs(std::get<LaplaceFactors>(k).a2 - (1.0 - a)) <= 1e-12);
  }
}
