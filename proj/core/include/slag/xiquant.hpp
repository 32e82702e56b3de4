#pragma once

// Extremal weights xi_k, the decay exponent m(theta, a), admissibility
// classification, and generators for points on the phase level set.

#include <optional>
#include <random>
#include <span>
#include <vector>

#include "slag/phasepoly.hpp"

namespace slag {

/// Positive spectral data sorted ascending, n >= 3.
class EigenVector {
 public:
  /// Sorts a copy of `entries`; throws DomainError unless every entry is
  /// positive and finite and n >= 3.
  explicit EigenVector(std::span<const double> entries);
  EigenVector(std::initializer_list<double> entries);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// Xi_k(a, x) = sum_i sigma_{k-1;i}(a) a_i^2 x_i^2 / (sigma_k(a) sum_i a_i x_i^2).
/// `a` and `x` are paired entrywise; no ordering is assumed.
double Xi_eval(std::span<const double> a, std::span<const double> x, int k);

struct XiBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Infimum and supremum of Xi_k(a, .) over x != 0:
/// a_1 sigma_{k-1;1}(a) / sigma_k(a) and a_n sigma_{k-1;n}(a) / sigma_k(a).
XiBounds xi_bounds(const EigenVector& a, int k);

struct XiProfile {
  std::vector<double> lower;     // k = 0..n
  std::vector<double> upper;     // k = 0..n
  std::vector<double> selected;  // upper where c_k > 0, lower where c_k <= 0
  double m = 0.0;                // sum k c_k sigma_k / sum xi_k c_k sigma_k
};

XiProfile xi_select(const PhaseSpec& spec, const EigenVector& a);

/// m(theta, a). Requires 0 < theta < n pi/2 and |H(a) - theta| <= 1e-10;
/// throws DomainError("a not on the phase level set") otherwise.
double m_value(const PhaseSpec& spec, const EigenVector& a);

enum class AdmissibilityClass { not_in_A0, in_A0_only, in_A };

struct Admissibility {
  AdmissibilityClass klass = AdmissibilityClass::not_in_A0;
  std::optional<double> m;
  bool reflected = false;       // evaluated as m(-theta, -lambda)
  bool near_threshold = false;  // |m - 2| <= 1e-12
};

/// Classifies an eigenvalue vector (any signs) against A^0_theta and A_theta.
Admissibility admissibility(std::span<const double> lambda, const PhaseSpec& spec);

const char* to_string(AdmissibilityClass klass);

/// Appends tan(theta - sum arctan(prefix)) and sorts. Throws DomainError("no
/// positive completion") unless that angle lies in (0, pi/2).
EigenVector complete_to_phase(std::span<const double> prefix, const PhaseSpec& spec);

/// a_eps = (tan(pi/3 - 2 eps), tan(pi/3 - eps), tan(pi/3), tan(pi/3 + eps),
/// tan(pi/3 + 2 eps)), 0 <= eps <= pi/12, on the level set 5 pi/3.
EigenVector epsilon_family(double eps);

/// tan(theta/n) * (1, ..., 1).
EigenVector isotropic_point(const PhaseSpec& spec);

/// Random point of L_theta in the positive cone whose entries stay in
/// [tan(min_angle), tan(pi/2 - min_angle)]. Requires a supported phase.
EigenVector random_level_set_point(const PhaseSpec& spec, std::mt19937_64& rng,
                                   double min_angle = 0.02);

}  // namespace slag
