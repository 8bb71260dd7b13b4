#include "chfn/kernel.hpp"

#include <cmath>
#include <sstream>

#include "chfn/error.hpp"

namespace chfn {

using cplx = std::complex<double>;

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt(cplx v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// s^β for complex s in the closed right half plane, principal branch, 0^β = 0.
cplx principal_pow(cplx s, double beta) {
  if (s == cplx{}) return {};
  return std::exp(beta * std::log(s));
}

bool on_cut(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0;
}

}  // namespace

CMKernel CMKernel::gamma_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw ParameterError("GammaBeta kernel needs beta > 0, got " + fmt(beta));
  return CMKernel(Family::GammaBeta, 1.0, beta);
}

CMKernel CMKernel::gen_linnik(double alpha, double beta) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ParameterError("GenLinnik kernel needs alpha > 0, got " + fmt(alpha));
  if (!(beta > 0.0 && beta <= 1.0))
    throw ParameterError("GenLinnik kernel needs 0 < beta <= 1, got " + fmt(beta));
  return CMKernel(Family::GenLinnik, alpha, beta);
}

CMKernel CMKernel::stable_exp(double beta) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw ParameterError("StableExp kernel needs 0 < beta <= 1, got " + fmt(beta));
  return CMKernel(Family::StableExp, 1.0, beta);
}

std::optional<MixingLaw> CMKernel::mixing_law() const {
  switch (family_) {
    case Family::Exp: return MixingLaw{MixingLaw::Kind::PointMass, 1.0, 1.0};
    case Family::Kac: return MixingLaw{MixingLaw::Kind::Exponential, 1.0, 1.0};
    case Family::GammaBeta: return MixingLaw{MixingLaw::Kind::Gamma, beta_, 1.0 / beta_};
    case Family::GenLinnik:
    case Family::StableExp: return std::nullopt;
  }
  return std::nullopt;
}

std::string CMKernel::name() const {
  switch (family_) {
    case Family::Exp: return "exp";
    case Family::Kac: return "kac";
    case Family::GammaBeta: return "gamma-beta(" + fmt(beta_) + ")";
    case Family::GenLinnik: return "gen-linnik(" + fmt(alpha_) + "," + fmt(beta_) + ")";
    case Family::StableExp: return "stable-exp(" + fmt(beta_) + ")";
  }
  return "?";
}

double kernel_eval(const CMKernel& L, double s) {
  if (!(s >= 0.0)) throw DomainError("kernel argument must be >= 0, got " + fmt(s));
  switch (L.family()) {
    case CMKernel::Family::Exp: return std::exp(-s);
    case CMKernel::Family::Kac: return 1.0 / (1.0 + s);
    case CMKernel::Family::GammaBeta: return std::exp(-L.beta() * std::log1p(s / L.beta()));
    case CMKernel::Family::GenLinnik:
      return std::exp(-L.alpha() * std::log1p(std::pow(s, L.beta())));
    case CMKernel::Family::StableExp: return std::exp(-std::pow(s, L.beta()));
  }
  return 0.0;
}

cplx kernel_eval(const CMKernel& L, cplx s) {
  if (s.real() < 0.0) throw DomainError("kernel argument must have Re s >= 0, got " + fmt(s));
  switch (L.family()) {
    case CMKernel::Family::Exp: return std::exp(-s);
    case CMKernel::Family::Kac: return 1.0 / (1.0 + s);
    case CMKernel::Family::GammaBeta: return std::exp(-L.beta() * std::log(1.0 + s / L.beta()));
    case CMKernel::Family::GenLinnik:
      return std::exp(-L.alpha() * std::log(1.0 + principal_pow(s, L.beta())));
    case CMKernel::Family::StableExp: return std::exp(-principal_pow(s, L.beta()));
  }
  return {};
}

double kernel_inverse(const CMKernel& L, double v) {
  if (!(v > 0.0 && v <= 1.0)) throw DomainError("kernel inverse needs v in (0, 1], got " + fmt(v));
  switch (L.family()) {
    case CMKernel::Family::Exp: return -std::log(v);
    case CMKernel::Family::Kac: return 1.0 / v - 1.0;
    case CMKernel::Family::GammaBeta: return L.beta() * std::expm1(-std::log(v) / L.beta());
    case CMKernel::Family::GenLinnik:
      return std::pow(std::expm1(-std::log(v) / L.alpha()), 1.0 / L.beta());
    case CMKernel::Family::StableExp: return std::pow(-std::log(v), 1.0 / L.beta());
  }
  return 0.0;
}

double phi_L(const CMKernel& L, double x, double y) {
  return kernel_eval(L, kernel_inverse(L, x) + kernel_inverse(L, y));
}

cplx phi_L(const CMKernel& L, cplx x, cplx y) {
  switch (L.family()) {
    case CMKernel::Family::Kac: return kac_phi(x, y);
    case CMKernel::Family::GammaBeta: {
      if (on_cut(x) || on_cut(y))
        throw DomainError("Phi_beta argument on the branch cut: " + fmt(on_cut(x) ? x : y));
      const double b = L.beta();
      const cplx base = std::exp(-std::log(x) / b) + std::exp(-std::log(y) / b) - 1.0;
      if (on_cut(base)) throw DomainError("Phi_beta base on the branch cut: " + fmt(base));
      return std::exp(-b * std::log(base));
    }
    default:
      throw DomainError("complex Phi_L is only defined for the kac and gamma-beta kernels, not " +
                        L.name());
  }
}

cplx kac_phi(cplx x, cplx y) {
  if (x == cplx{}) throw DomainError("kac_phi: x = 0");
  if (y == cplx{}) throw DomainError("kac_phi: y = 0");
  const cplx d = 1.0 / x + 1.0 / y - 1.0;
  if (d == cplx{}) throw DomainError("kac_phi: 1/x + 1/y = 1 at x = " + fmt(x) + ", y = " + fmt(y));
  return 1.0 / d;
}

}  // namespace chfn
