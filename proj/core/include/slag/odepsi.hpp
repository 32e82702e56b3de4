#pragma once

// The subsolution-generating ODE
//
//   r psi'(r) sum_k xi_k c_k sigma_k psi^{k-1} + sum_k c_k sigma_k psi^k = 0,  psi(1) = beta,
//
// i.e. psi' = g(psi) / r, solved by adaptive integration and through the
// closed implicit relation obtained from partial fractions.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slag/xiquant.hpp"

namespace slag {

inline constexpr double kBetaMax = 1e6;
inline constexpr double kBetaWarn = 1e3;

/// Polynomial data of g(nu) = -P(nu) / D(nu) for a point a of L_theta.
///
/// P(nu) = sum_k c_k sigma_k(a) nu^k and D(nu) = sum_k xi_k c_k sigma_k(a) nu^{k-1}.
/// Both are stored re-expanded around nu = 1 with P(1) set to exactly zero, so
/// nu = 1 is an exact equilibrium and excesses nu - 1 far below machine
/// epsilon keep full relative precision.
class PsiField {
 public:
  /// Requires a supported phase and a on L_theta (|H(a) - theta| <= 1e-10).
  PsiField(const PhaseSpec& spec, const EigenVector& a);

  const PhaseSpec& spec() const { return spec_; }
  const EigenVector& a() const { return a_; }
  const XiProfile& xi() const { return xi_; }
  double m() const { return xi_.m; }
  int order() const { return order_; }

  double numerator(double nu) const;
  double denominator(double nu) const;

  /// g(nu); throws DomainError when D(nu) <= 0.
  double g(double nu) const;
  double g_prime(double nu) const;

  /// g(1 + u) / u for u > 0; tends to -m as u -> 0.
  double excess_rate(double u) const;

  /// Ray coefficients c_k sigma_k(a), k = 0..N, in powers of nu.
  std::span<const double> ray_coeffs() const { return ray_; }

 private:
  PhaseSpec spec_;
  EigenVector a_;
  XiProfile xi_;
  int order_ = 0;
  std::vector<double> ray_;
  std::vector<double> num_shift_;  // P(1 + u), num_shift_[0] == 0
  std::vector<double> den_shift_;  // D(1 + u)
};

double g_eval(const PhaseSpec& spec, const EigenVector& a, double nu);

enum class PsiRoute { numeric, implicit };

const char* to_string(PsiRoute route);

struct PartialFractionData {
  std::vector<double> psi_roots;  // psi_N < ... < psi_2 < 1; last entry is the root 1
  std::vector<double> K;          // K[0] = K_1 (root 1), K[j-1] = K_j pairs with psi_j
  double m = 0.0;

  /// psi_j paired with K[j-1]; j = 1 is the root 1.
  double root(std::size_t j) const { return psi_roots[psi_roots.size() - j]; }

  /// sum_j K_j / (nu - psi_j).
  double recombine(double nu) const;
};

PartialFractionData partial_fraction_K(const PsiField& field);
PartialFractionData partial_fraction_K(const PhaseSpec& spec, const EigenVector& a);

struct PsiSample {
  double r = 1.0;
  double psi = 1.0;
  double excess = 0.0;  // psi - 1 carried separately to keep tail precision
};

struct PsiSolution {
  double beta = 1.0;
  PsiRoute route = PsiRoute::numeric;
  double m = 0.0;
  std::vector<PsiSample> samples;
  std::optional<PartialFractionData> pf;
  std::vector<std::string> warnings;
};

/// Radii 1 = r_0 < ... < r_max, log-spaced with `per_decade` points per decade.
std::vector<double> log_spaced_radii(double r_max, int per_decade = 64);

/// Adaptive embedded 5(4) Runge-Kutta integration of psi' = g(psi) / r,
/// reported at `radii` (ascending, starting at 1). `tol` is the relative
/// tolerance; the absolute tolerance is 1e-12.
PsiSolution solve_psi_numeric(const PsiField& field, double beta, std::span<const double> radii,
                              double tol = 1e-10);
PsiSolution solve_psi_numeric(const PhaseSpec& spec, const EigenVector& a, double beta, double r_max,
                              double tol = 1e-10);

/// Pointwise solution of (psi - 1) B(psi) = (beta - 1) B(beta) r^{-m} with
/// B(nu) = prod_{j >= 2} (nu - psi_j)^{m K_j}.
class ImplicitPsi {
 public:
  explicit ImplicitPsi(const PsiField& field);
  ImplicitPsi(const PsiField& field, PartialFractionData pf);

  const PartialFractionData& partial_fractions() const { return pf_; }
  double m() const { return pf_.m; }

  /// log B(nu), nu > psi_2.
  double log_B(double nu) const;

  /// psi(r, beta) - 1.
  double excess(double beta, double r) const;
  double psi(double beta, double r) const { return 1.0 + excess(beta, r); }

  /// (beta - 1) B(beta) / B(1), the limit of (psi - 1) r^m.
  double asymptotic_constant(double beta) const;

  /// int_{r0}^{r1} tau (psi(tau, beta) - 1) d tau by adaptive Gauss-Kronrod.
  double excess_moment(double beta, double r0, double r1) const;

  PsiSolution sample(double beta, std::span<const double> radii) const;

 private:
  PartialFractionData pf_;
};

double solve_psi_implicit(const PhaseSpec& spec, const EigenVector& a, double beta, double r);

/// mu_R(beta) = int_R^inf tau (psi(tau, beta) - 1) d tau: quadrature on
/// [R, R_cut] with R_cut = max(1e3, 1e2 R) plus the tail C R_cut^{2-m} / (m - 2).
/// Throws DomainError("integral may diverge") when m <= 2.
double mu_integral(const ImplicitPsi& implicit, double beta, double R);
double mu_integral(const PhaseSpec& spec, const EigenVector& a, double beta, double R);

struct DecayFit {
  double m_est = 0.0;
  double C_est = 0.0;
  std::size_t points = 0;
};

/// Least-squares fit of log(psi - 1) = log C - m log r over the last decade
/// of the trajectory. Needs r_max >= 1e3 and beta > 1.
DecayFit decay_fit(const PsiSolution& sol);

void validate_beta(double beta);

}  // namespace slag
