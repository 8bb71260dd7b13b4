#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

namespace chfn {

using cplx = std::complex<double>;

/// Dense univariate polynomial, coefficients in ascending order of degree.
/// The zero polynomial has no coefficients and degree -1.
template <class T>
class Polynomial {
public:
  Polynomial() = default;
  Polynomial(std::initializer_list<T> c) : c_(c) { trim_exact(); }
  explicit Polynomial(std::vector<T> c) : c_(std::move(c)) { trim_exact(); }

  static Polynomial constant(T v) { return Polynomial({v}); }
  static Polynomial monomial(T v, std::size_t degree) {
    std::vector<T> c(degree + 1, T{});
    c[degree] = v;
    return Polynomial(std::move(c));
  }

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<T>& coeffs() const noexcept { return c_; }
  T coeff(std::size_t k) const { return k < c_.size() ? c_[k] : T{}; }
  T leading() const { return c_.empty() ? T{} : c_.back(); }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  template <class U>
  auto operator()(const U& x) const {
    using R = decltype(T{} * x);
    R acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + R(*it);
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<T> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
  }

  /// Drops trailing coefficients whose magnitude is at most rel_tol times
  /// the largest coefficient.
  Polynomial trimmed(double rel_tol) const {
    Polynomial p = *this;
    const double cut = rel_tol * max_abs_coeff();
    while (!p.c_.empty() && std::abs(p.c_.back()) <= cut) p.c_.pop_back();
    return p;
  }

  /// Zeroes coefficients below rel_tol times the largest one (all positions).
  Polynomial cleaned(double rel_tol) const {
    std::vector<T> c = c_;
    const double cut = rel_tol * max_abs_coeff();
    for (auto& v : c)
      if (std::abs(v) <= cut) v = T{};
    return Polynomial(std::move(c));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T{});
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim_exact();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T{});
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim_exact();
    return *this;
  }
  Polynomial& operator*=(T s) {
    for (auto& v : c_) v *= s;
    trim_exact();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, T s) { return a *= s; }
  friend Polynomial operator*(T s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> c(a.c_.size() + b.c_.size() - 1, T{});
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }

  Polynomial pow(unsigned n) const {
    Polynomial result = constant(T{1});
    Polynomial base = *this;
    while (n > 0) {
      if (n & 1u) result = result * base;
      n >>= 1u;
      if (n > 0) base = base * base;
    }
    return result;
  }

  /// Polynomial in x^2: p(x^2).
  Polynomial in_square() const {
    if (c_.empty()) return {};
    std::vector<T> c(2 * c_.size() - 1, T{});
    for (std::size_t k = 0; k < c_.size(); ++k) c[2 * k] = c_[k];
    return Polynomial(std::move(c));
  }

  /// Long division; remainder coefficients at or below rel_tol (relative to
  /// the dividend) are dropped. Divisor must be nonzero.
  friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b,
                                                  double rel_tol = 0.0) {
    if (a.degree() < b.degree()) return {Polynomial{}, a};
    std::vector<T> rem = a.c_;
    std::vector<T> quo(a.c_.size() - b.c_.size() + 1, T{});
    const T lead = b.c_.back();
    for (std::size_t i = quo.size(); i-- > 0;) {
      const T q = rem[i + b.c_.size() - 1] / lead;
      quo[i] = q;
      for (std::size_t j = 0; j < b.c_.size(); ++j) rem[i + j] -= q * b.c_[j];
      rem[i + b.c_.size() - 1] = T{};
    }
    rem.resize(b.c_.size() - 1);
    Polynomial r(std::move(rem));
    if (rel_tol > 0.0) {
      const double scale = std::max(a.max_abs_coeff(), b.max_abs_coeff());
      std::vector<T> c = r.c_;
      for (auto& v : c)
        if (std::abs(v) <= rel_tol * scale) v = T{};
      r = Polynomial(std::move(c));
    }
    return {Polynomial(std::move(quo)), r};
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
  void trim_exact() {
    while (!c_.empty() && c_.back() == T{}) c_.pop_back();
  }

  std::vector<T> c_;
};

using CPoly = Polynomial<cplx>;
using RPoly = Polynomial<double>;

/// Monic greatest common divisor via the Euclidean algorithm, treating
/// remainder coefficients below rel_tol (relative to the operands) as zero.
template <class T>
Polynomial<T> poly_gcd(Polynomial<T> a, Polynomial<T> b, double rel_tol) {
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    auto [q, r] = divmod(a, b, rel_tol);
    (void)q;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a * (T{1} / a.leading());
}

inline CPoly to_complex(const RPoly& p) {
  std::vector<cplx> c(p.coeffs().begin(), p.coeffs().end());
  return CPoly(std::move(c));
}

}  // namespace chfn
