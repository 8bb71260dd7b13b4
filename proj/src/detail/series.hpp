#pragma once

#include <cstddef>
#include <vector>

namespace chfn::detail {

// Truncated power-series arithmetic; every series carries N + 1 coefficients.
using Series = std::vector<double>;

// (a·b) mod z^{N+1}.
inline Series series_mul(const Series& a, const Series& b) {
  const std::size_t n = a.size();
  Series c(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

// a^p for a[0] > 0 and real p, by the recurrence
// b_n = (1/(n a_0)) Σ_{k=1}^{n} ((p + 1)k − n) a_k b_{n−k}.
Series series_pow(const Series& a, double p);

// e^{a}, from n b_n = Σ_{k=1}^{n} k a_k b_{n−k}.
Series series_exp(const Series& a);

// n / d for d[0] != 0.
Series series_div(const Series& n, const Series& d);

}  // namespace chfn::detail
