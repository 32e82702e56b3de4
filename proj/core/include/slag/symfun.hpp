#pragma once

// Elementary and generalized symmetric polynomials.
//
// Every kernel is templated on the scalar type so the same code path serves
// the floating-point pipelines (T = double) and the exact identity suites
// (T = Rational). Indices are 0-based in this API; `k` is the polynomial
// degree and follows the usual conventions sigma_{-1} = 0, sigma_0 = 1 and
// sigma_k = 0 for k > n.

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "slag/error.hpp"

namespace slag {

using Rational = mpq_class;
using Integer = mpz_class;

/// Up to two distinct entries removed before evaluating a symmetric function.
class ExclusionSet {
 public:
  ExclusionSet() = default;
  ExclusionSet(std::initializer_list<std::size_t> indices);

  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool contains(std::size_t i) const;
  std::span<const std::size_t> indices() const { return {idx_.data(), count_}; }

  /// Throws DomainError when an index is >= n.
  void validate(std::size_t n) const;

 private:
  std::array<std::size_t, 2> idx_{};
  std::size_t count_ = 0;
};

/// sigma_0(a), ..., sigma_n(a) from the coefficients of prod_i (1 + t a_i).
template <class T>
std::vector<T> elem_sym_all(std::span<const T> a) {
  std::vector<T> c(a.size() + 1, T(0));
  c[0] = T(1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = i + 1; k > 0; --k) c[k] += a[i] * c[k - 1];
  }
  return c;
}

template <class T>
T elem_sym(std::span<const T> a, int k) {
  if (k < 0 || static_cast<std::size_t>(k) > a.size()) return T(0);
  if (k == 0) return T(1);
  return elem_sym_all(a)[static_cast<std::size_t>(k)];
}

template <class T>
std::vector<T> without(std::span<const T> a, const ExclusionSet& excl) {
  excl.validate(a.size());
  std::vector<T> kept;
  kept.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!excl.contains(i)) kept.push_back(a[i]);
  return kept;
}

/// sigma_{k;excl}(a): sigma_k of `a` with the excluded entries removed.
template <class T>
T elem_sym_excl(std::span<const T> a, int k, const ExclusionSet& excl) {
  const std::vector<T> kept = without(a, excl);
  return elem_sym(std::span<const T>(kept), k);
}

/// Table s[i][k] = sigma_{k;i}(a) for k = 0..n (row i excludes entry i).
template <class T>
std::vector<std::vector<T>> elem_sym_excl_table(std::span<const T> a) {
  std::vector<std::vector<T>> table;
  table.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<T> row = elem_sym_all(std::span<const T>(without(a, ExclusionSet{i})));
    row.resize(a.size() + 1, T(0));
    table.push_back(std::move(row));
  }
  return table;
}

/// S_k^j(a): sum over k distinct indices of which an unordered j-subset enters
/// squared. Term count is C(n,k) C(k,j); S_k^0 = sigma_k.
///
/// Evaluated as the coefficient of t^{k-j} s^j in prod_i (1 + t a_i + s a_i^2).
template <class T>
T gen_sym(std::span<const T> a, int k, int j) {
  if (j < 0 || j > k || k < 0 || static_cast<std::size_t>(k) > a.size())
    throw DomainError("gen_sym: require 0 <= j <= k <= n");
  const auto lin = static_cast<std::size_t>(k - j);
  const auto sq = static_cast<std::size_t>(j);
  // dp[l][s]: l linear picks and s squared picks so far.
  std::vector<std::vector<T>> dp(lin + 1, std::vector<T>(sq + 1, T(0)));
  dp[0][0] = T(1);
  for (const T& x : a) {
    const T x2 = x * x;
    for (std::size_t l = lin + 1; l-- > 0;) {
      for (std::size_t s = sq + 1; s-- > 0;) {
        if (l > 0) dp[l][s] += x * dp[l - 1][s];
        if (s > 0) dp[l][s] += x2 * dp[l][s - 1];
      }
    }
  }
  return dp[lin][sq];
}

/// sigma_k of the eigenvalues of diag(p) + s q q^T via
/// sigma_k(p) + s * sum_i sigma_{k-1;i}(p) q_i^2.
template <class T>
T sigma_rank_one(std::span<const T> p, std::span<const T> q, const T& s, int k) {
  if (p.size() != q.size()) throw DomainError("sigma_rank_one: p and q differ in length");
  T acc = elem_sym(p, k);
  if (k < 1) return acc;
  T update = T(0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const T excl = elem_sym_excl(p, k - 1, ExclusionSet{i});
    update += excl * q[i] * q[i];
  }
  acc += s * update;
  return acc;
}

Integer binomial(int n, int k);

/// sum_{q=0}^{Q} (-1)^q (2q+1) C(2Q+1, Q-q); equals 1 for Q = 0 and 0 otherwise.
Integer qio_sum(int Q);

/// One term `coefficient * S_k^j` of a product decomposition.
struct ProductTerm {
  Integer coefficient;
  int k = 0;
  int j = 0;

  friend bool operator==(const ProductTerm&, const ProductTerm&) = default;
};

/// sigma_j sigma_k written as a nonnegative integer combination of S terms.
/// Uses the j + k <= n expansion when it applies, the j + k >= n one otherwise.
std::vector<ProductTerm> sigma_product_decompose(int j, int k, int n);

/// Same, but forces a regime; `high` selects the j + k >= n formula.
std::vector<ProductTerm> sigma_product_decompose(int j, int k, int n, bool high);

template <class T>
T evaluate_decomposition(std::span<const ProductTerm> terms, std::span<const T> a) {
  T acc = T(0);
  for (const ProductTerm& t : terms) {
    if constexpr (std::is_same_v<T, Rational>) {
      acc += Rational(t.coefficient) * gen_sym(a, t.k, t.j);
    } else {
      acc += t.coefficient.get_d() * gen_sym(a, t.k, t.j);
    }
  }
  return acc;
}

template <class T>
struct NewtonReport {
  // margins[k-1] = sigma_k^2 - sigma_{k-1} sigma_{k+1}, for k = 1..n-1.
  std::vector<T> margins;
  bool pass = true;
};

template <class T>
NewtonReport<T> newton_check(std::span<const T> a) {
  const std::vector<T> s = elem_sym_all(a);
  NewtonReport<T> report;
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    T margin = s[k] * s[k] - s[k - 1] * s[k + 1];
    if (margin < T(0)) report.pass = false;
    report.margins.push_back(std::move(margin));
  }
  return report;
}

std::string to_string(const Rational& q);

}  // namespace slag
