#include "chfn/lk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chfn/error.hpp"

namespace chfn {

namespace {

std::vector<LevyAtom> canonical_atoms(std::vector<LevyAtom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const LevyAtom& a, const LevyAtom& b) { return a.position < b.position; });
  std::vector<LevyAtom> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && std::abs(a.position - merged.back().position) <= kAtomMergeTolerance)
      merged.back().weight += a.weight;
    else
      merged.push_back(a);
  }
  return merged;
}

void check_sigma2(double sigma2) {
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    std::ostringstream os;
    os << "Gaussian coefficient must be >= 0, got " << sigma2;
    throw ParameterError(os.str());
  }
}

void check_weight(const LevyAtom& a) {
  if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
    std::ostringstream os;
    os << "Levy atom weight must be > 0, got " << a.weight;
    throw ParameterError(os.str());
  }
}

}  // namespace

LKExponent::LKExponent(double sigma2, std::vector<LevyAtom> atoms) : sigma2_(sigma2) {
  check_sigma2(sigma2);
  for (const auto& a : atoms) {
    check_weight(a);
    if (!(a.position > 0.0) || !std::isfinite(a.position)) {
      std::ostringstream os;
      os << "symmetric Levy atom position must be > 0, got " << a.position;
      throw ParameterError(os.str());
    }
  }
  atoms_ = canonical_atoms(std::move(atoms));
}

DriftedLKExponent::DriftedLKExponent(double gamma, double sigma2, std::vector<LevyAtom> atoms)
    : gamma_(gamma), sigma2_(sigma2) {
  check_sigma2(sigma2);
  if (!std::isfinite(gamma)) throw ParameterError("drift must be finite");
  for (const auto& a : atoms) {
    check_weight(a);
    if (a.position == 0.0 || !std::isfinite(a.position)) throw ParameterError("Levy atom at 0");
  }
  atoms_ = canonical_atoms(std::move(atoms));
}

double lk_eval(const LKExponent& psi, double xi) {
  double v = 0.5 * psi.sigma2() * xi * xi;
  // 1 − cos(x) = 2 sin²(x/2), accurate near x = 0.
  for (const auto& a : psi.atoms())
    v += 2.0 * a.weight * std::pow(std::sin(0.5 * a.position * xi), 2);
  return v;
}

std::complex<double> lk_eval(const DriftedLKExponent& psi, double xi) {
  using namespace std::complex_literals;
  // Accumulate −ψ, then negate.
  std::complex<double> minus_psi = 1i * psi.gamma() * xi - 0.5 * psi.sigma2() * xi * xi;
  for (const auto& a : psi.atoms()) {
    const double x = a.position;
    // e^{iξx} − 1 written as (cos − 1) + i sin to keep the small-argument accuracy.
    const double c = -2.0 * std::pow(std::sin(0.5 * xi * x), 2);
    std::complex<double> term(c, std::sin(xi * x));
    if (std::abs(x) <= 1.0) term -= 1i * xi * x;
    minus_psi += a.weight * term;
  }
  return -minus_psi;
}

std::complex<double> lk_eval(const Exponent& psi, double xi) {
  return std::visit([xi](const auto& p) { return std::complex<double>(lk_eval(p, xi)); }, psi);
}

LKExponent lk_combine(const LKExponent& psi1, const LKExponent& psi2, double scale1,
                      double scale2) {
  if (!(scale1 >= 0.0) || !(scale2 >= 0.0)) throw ParameterError("scales must be >= 0");
  std::vector<LevyAtom> atoms;
  if (scale1 > 0.0)
    for (const auto& a : psi1.atoms()) atoms.push_back({a.position, scale1 * a.weight});
  if (scale2 > 0.0)
    for (const auto& a : psi2.atoms()) atoms.push_back({a.position, scale2 * a.weight});
  return {scale1 * psi1.sigma2() + scale2 * psi2.sigma2(), std::move(atoms)};
}

IndecomposabilityResult is_indecomposable(const LKExponent& psi) {
  const bool gauss = psi.sigma2() > 0.0;
  const auto n = psi.atoms().size();
  if (!gauss && n == 0) return {Decomposability::Zero};
  if (gauss && n == 0) return {Decomposability::IndecomposableGaussian};
  if (!gauss && n == 1)
    return {Decomposability::IndecomposableCosine, psi.atoms().front().position};
  return {Decomposability::Decomposable};
}

const char* to_string(Decomposability d) {
  switch (d) {
    case Decomposability::IndecomposableGaussian: return "indecomposable-gaussian";
    case Decomposability::IndecomposableCosine: return "indecomposable-cosine";
    case Decomposability::Decomposable: return "decomposable";
    case Decomposability::Zero: return "zero";
  }
  return "?";
}

}  // namespace chfn
