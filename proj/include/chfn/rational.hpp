#pragma once

#include <vector>

#include "chfn/polynomial.hpp"

namespace chfn {

/// Relative coefficient tolerance used by gcd reduction.
inline constexpr double kGcdTolerance = 1e-12;

/// Ratio of complex-coefficient polynomials in one real variable, stored
/// reduced and normalized so that den(0) = 1.
class ComplexRational {
public:
  /// Throws ParameterError if den is zero or den(0) == 0.
  ComplexRational(CPoly num, CPoly den);

  static ComplexRational constant(cplx v) { return {CPoly::constant(v), CPoly::constant(1.0)}; }
  static ComplexRational polynomial(CPoly p) { return {std::move(p), CPoly::constant(1.0)}; }

  const CPoly& num() const noexcept { return num_; }
  const CPoly& den() const noexcept { return den_; }

  /// Throws EvaluationError when den(x) = 0.
  cplx operator()(double x) const;
  cplx at(cplx x) const;

  /// 1/r; throws ParameterError when num(0) = 0.
  ComplexRational reciprocal() const;
  ComplexRational pow(unsigned n) const { return {num_.pow(n), den_.pow(n)}; }

  /// True when every coefficient is real and every odd coefficient vanishes,
  /// both to rel_tol.
  bool is_real_even(double rel_tol = 1e-12) const;

  friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b);
  friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b);
  friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b);

private:
  CPoly num_;
  CPoly den_;
};

/// Roots of a real polynomial of degree 1..8 (closed form up to degree 2,
/// companion-matrix eigenvalues above). Throws ParameterError otherwise.
std::vector<cplx> real_poly_roots(const RPoly& p);

}  // namespace chfn
