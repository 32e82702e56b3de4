#include "slag/symfun.hpp"

#include <algorithm>

namespace slag {

ExclusionSet::ExclusionSet(std::initializer_list<std::size_t> indices) {
  if (indices.size() > 2) throw DomainError("exclusion set holds at most two indices");
  for (std::size_t i : indices) {
    if (contains(i)) throw DomainError("exclusion indices must be distinct");
    idx_[count_++] = i;
  }
}

bool ExclusionSet::contains(std::size_t i) const {
  return std::find(idx_.begin(), idx_.begin() + static_cast<std::ptrdiff_t>(count_), i) !=
         idx_.begin() + static_cast<std::ptrdiff_t>(count_);
}

void ExclusionSet::validate(std::size_t n) const {
  for (std::size_t i : indices())
    if (i >= n) throw DomainError("exclusion index " + std::to_string(i) + " out of range");
}

Integer binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return Integer(0);
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

Integer qio_sum(int Q) {
  if (Q < 0) throw DomainError("qio_sum: Q must be nonnegative");
  Integer acc = 0;
  for (int q = 0; q <= Q; ++q) {
    Integer term = Integer(2 * q + 1) * binomial(2 * Q + 1, Q - q);
    if (q % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

namespace {

void check_indices(int j, int k, int n) {
  if (n < 1 || j < 0 || j > k || k > n)
    throw DomainError("sigma_product_decompose: require 0 <= j <= k <= n");
}

}  // namespace

std::vector<ProductTerm> sigma_product_decompose(int j, int k, int n, bool high) {
  check_indices(j, k, n);
  std::vector<ProductTerm> terms;
  if (!high) {
    if (j + k > n) throw DomainError("low-degree expansion needs j + k <= n");
    for (int h = 0; h <= j; ++h) {
      Integer coeff = binomial(j + k - 2 * h, j - h);
      if (coeff != 0) terms.push_back({coeff, j + k - h, h});
    }
  } else {
    if (j + k < n) throw DomainError("high-degree expansion needs j + k >= n");
    for (int h = 0; h <= n - k; ++h) {
      Integer coeff = binomial(2 * n - j - k - 2 * h, n - j - h);
      if (coeff != 0) terms.push_back({coeff, n - h, j + k - n + h});
    }
  }
  return terms;
}

std::vector<ProductTerm> sigma_product_decompose(int j, int k, int n) {
  check_indices(j, k, n);
  return sigma_product_decompose(j, k, n, j + k > n);
}

std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  return c.get_str();
}

}  // namespace slag
