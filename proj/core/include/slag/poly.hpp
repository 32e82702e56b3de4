#pragma once

// Dense univariate polynomial helpers. Coefficients are stored lowest degree
// first: p(t) = c[0] + c[1] t + ... + c[d] t^d.

#include <cstddef>
#include <span>
#include <vector>

namespace slag::poly {

template <class T>
T horner(std::span<const T> c, const T& t) {
  T acc = T(0);
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
  return acc;
}

// Value of the `order`-th derivative at t.
inline double derivative_at(std::span<const double> c, double t, int order) {
  if (order < 0) return 0.0;
  const auto ord = static_cast<std::size_t>(order);
  if (ord >= c.size()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > ord;) {
    double falling = 1.0;
    for (std::size_t j = 0; j < ord; ++j) falling *= static_cast<double>(i - j);
    acc = acc * t + falling * c[i];
  }
  return acc;
}

inline std::vector<double> derivative(std::span<const double> c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
  return d;
}

// Coefficients of q(u) = p(shift + u).
inline std::vector<double> taylor_shift(std::span<const double> c, double shift) {
  std::vector<double> q(c.begin(), c.end());
  const std::size_t d = q.size();
  for (std::size_t i = 0; i + 1 < d; ++i)
    for (std::size_t j = d - 1; j > i; --j) q[j - 1] += shift * q[j];
  return q;
}

// Drops trailing (highest-degree) coefficients that are exactly zero.
inline void trim(std::vector<double>& c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
}

}  // namespace slag::poly
