#include "chfn/rational.hpp"

#include <Eigen/Dense>
#include <sstream>

#include "chfn/error.hpp"

namespace chfn {

namespace {

bool real_and_even(const CPoly& p, double rel_tol) {
  const double cut = rel_tol * std::max(p.max_abs_coeff(), 1e-300);
  for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
    const cplx c = p.coeffs()[k];
    if (std::abs(c.imag()) > cut) return false;
    if (k % 2 == 1 && std::abs(c) > cut) return false;
  }
  return true;
}

}  // namespace

ComplexRational::ComplexRational(CPoly num, CPoly den) {
  if (den.is_zero()) throw ParameterError("rational function with zero denominator");
  auto g = poly_gcd(num, den, kGcdTolerance);
  if (g.degree() >= 1) {
    num = divmod(num, g).first;
    den = divmod(den, g).first;
  }
  const cplx d0 = den.coeff(0);
  if (d0 == cplx{}) throw ParameterError("rational function with den(0) = 0");
  num_ = num * (1.0 / d0);
  den_ = den * (1.0 / d0);
}

cplx ComplexRational::operator()(double x) const {
  return at(cplx(x, 0.0));
}

cplx ComplexRational::at(cplx x) const {
  const cplx d = den_(x);
  if (d == cplx{}) {
    std::ostringstream os;
    os << "pole at x = " << x;
    throw EvaluationError(os.str());
  }
  return num_(x) / d;
}

ComplexRational ComplexRational::reciprocal() const {
  if (num_.coeff(0) == cplx{}) throw ParameterError("reciprocal of a rational vanishing at 0");
  return {den_, num_};
}

bool ComplexRational::is_real_even(double rel_tol) const {
  return real_and_even(num_, rel_tol) && real_and_even(den_, rel_tol);
}

ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
  return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}

ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
  return {a.num_ * b.num_, a.den_ * b.den_};
}

std::vector<cplx> real_poly_roots(const RPoly& p) {
  const int n = p.degree();
  if (n < 1 || n > 8) {
    std::ostringstream os;
    os << "root finding supports degree 1..8, got " << n;
    throw ParameterError(os.str());
  }
  if (n == 1) return {cplx(-p.coeff(0) / p.coeff(1), 0.0)};
  if (n == 2) {
    const double a = p.coeff(2), b = p.coeff(1), c = p.coeff(0);
    const cplx disc = std::sqrt(cplx(b * b - 4.0 * a * c, 0.0));
    // Avoid cancellation: q = -(b + sign(b) sqrt(disc)) / 2.
    const cplx q = -0.5 * (b >= 0.0 ? cplx(b) + disc : cplx(b) - disc);
    if (q == cplx{}) return {cplx{}, cplx{}};
    return {q / a, c / q};
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  const double lead = p.leading();
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -p.coeff(static_cast<std::size_t>(i)) / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<cplx> roots;
  roots.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) roots.push_back(solver.eigenvalues()(i));
  return roots;
}

}  // namespace chfn
