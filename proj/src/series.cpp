#include <cmath>

#include "detail/series.hpp"

namespace chfn::detail {

Series series_pow(const Series& a, double p) {
  const std::size_t n = a.size();
  Series b(n, 0.0);
  if (n == 0) return b;
  b[0] = std::pow(a[0], p);
  for (std::size_t m = 1; m < n; ++m) {
    double s = 0.0;
    for (std::size_t k = 1; k <= m; ++k)
      s += ((p + 1.0) * static_cast<double>(k) - static_cast<double>(m)) * a[k] * b[m - k];
    b[m] = s / (static_cast<double>(m) * a[0]);
  }
  return b;
}

Series series_exp(const Series& a) {
  const std::size_t n = a.size();
  Series b(n, 0.0);
  if (n == 0) return b;
  b[0] = std::exp(a[0]);
  for (std::size_t m = 1; m < n; ++m) {
    double s = 0.0;
    for (std::size_t k = 1; k <= m; ++k) s += static_cast<double>(k) * a[k] * b[m - k];
    b[m] = s / static_cast<double>(m);
  }
  return b;
}

Series series_div(const Series& num, const Series& den) {
  const std::size_t n = num.size();
  Series q(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    double s = num[m];
    for (std::size_t k = 1; k <= m && k < den.size(); ++k) s -= den[k] * q[m - k];
    q[m] = s / den[0];
  }
  return q;
}

}  // namespace chfn::detail
