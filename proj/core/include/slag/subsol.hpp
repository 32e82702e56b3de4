#pragma once

// Generalized radially symmetric functions
//
//   Phi(x) = phi(r_A(x)),  r_A(x) = sqrt(x^T A x),  phi(r) = alpha + int_gamma^r tau psi(tau, beta) d tau,
//
// their Hessians, and a sampled check of the subsolution inequalities.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "slag/odepsi.hpp"

namespace slag {

struct SubsolutionSpec {
  double alpha = 0.0;
  double beta = 1.0;
  double gamma = 1.0;
  Eigen::MatrixXd A;  // diagonal for everything except normalize_problem
  double theta = 0.0;
};

/// sqrt(x^T A x); throws DomainError unless A is symmetric positive definite.
double r_ellipse(const Eigen::MatrixXd& A, const Eigen::VectorXd& x);

/// Phi for a diagonal A whose spectrum lies on the phase level set with m > 2.
/// Holds the psi field and its implicit solver; every evaluation is pointwise.
class Subsolution {
 public:
  explicit Subsolution(const SubsolutionSpec& spec);

  const SubsolutionSpec& spec() const { return spec_; }
  const PhaseSpec& phase() const { return phase_; }
  const PsiField& field() const { return field_; }
  const ImplicitPsi& implicit() const { return implicit_; }
  int n() const { return static_cast<int>(diag_.size()); }
  double m() const { return field_.m(); }

  /// Diagonal of A in coordinate order.
  std::span<const double> diag() const { return diag_; }

  double r_of(const Eigen::VectorXd& x) const;

  double excess(double r) const;  // psi(r) - 1
  double psi(double r) const { return 1.0 + excess(r); }
  double psi_prime(double r) const;  // g(psi) / r

  /// phi(r) for r >= gamma.
  double phi(double r) const;
  /// phi(r) - r^2 / 2, evaluated without cancellation.
  double phi_offset(double r) const;
  /// mu_gamma(beta) + alpha - gamma^2 / 2, the limit of phi(r) - r^2 / 2.
  double asymptotic_offset() const;

  double Phi(const Eigen::VectorXd& x) const;

  /// psi a_i delta_ij + (psi' / r) (a_i x_i)(a_j x_j); requires r_A(x) > gamma.
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

  /// sigma_k of the Hessian spectrum through the rank-one update formula.
  double sigma_hessian(const Eigen::VectorXd& x, int k) const;
  /// Same quantity as sigma_k(a) psi^k + Xi_k(a, x) sigma_k(a) r psi^{k-1} psi'.
  double sigma_hessian_xi_form(const Eigen::VectorXd& x, int k) const;

 private:
  void require_outside(double r) const;

  SubsolutionSpec spec_;
  std::vector<double> diag_;
  PhaseSpec phase_;
  PsiField field_;
  ImplicitPsi implicit_;
};

double phi_eval(const SubsolutionSpec& spec, double r);
Eigen::MatrixXd hessian_Phi(const SubsolutionSpec& spec, const Eigen::VectorXd& x);
double sigma_hessian(const SubsolutionSpec& spec, const Eigen::VectorXd& x, int k);

struct VerificationGrid {
  int shells = 100;         // log-spaced values of r_A in (gamma, r_max]
  double r_max = 50.0;
  int directions = 100;     // quasi-random directions per shell, on top of the 2n axis points
  double tolerance = 1e-9;
  unsigned threads = 0;     // 0: hardware concurrency
};

struct VerificationReport {
  std::size_t points = 0;
  double min_H_minus_theta = 0.0;
  double min_Z = 0.0;
  Eigen::VectorXd worst_H_point;
  Eigen::VectorXd worst_Z_point;
  double tolerance = 1e-9;
  bool success = false;
};

/// Unit directions: the 2n signed axes followed by `count` Halton points pushed
/// through the inverse normal CDF and normalized.
std::vector<Eigen::VectorXd> direction_set(int n, int count);

VerificationReport verify_subsolution(const Subsolution& sub, const VerificationGrid& grid);
VerificationReport verify_subsolution(const SubsolutionSpec& spec, const VerificationGrid& grid);

/// A = Q^T diag(lambda) Q with lambda ascending and Q orthogonal. Under
/// x~ = Q x the problem with boundary data phi becomes the diagonal one with
/// data phi(x) - b^T x, the linear part being carried by `b`.
struct NormalizedProblem {
  Eigen::VectorXd lambda;
  Eigen::MatrixXd Q;
  Eigen::VectorXd b;

  Eigen::MatrixXd Lambda() const { return lambda.asDiagonal(); }
  Eigen::VectorXd to_normalized(const Eigen::VectorXd& x) const { return Q * x; }
  Eigen::VectorXd from_normalized(const Eigen::VectorXd& xt) const { return Q.transpose() * xt; }
  double boundary_shift(const Eigen::VectorXd& x) const { return b.dot(x); }
};

/// Diagonal input is only permuted (stably), so diagonal ascending A gives
/// Q = I. Throws DomainError for non-symmetric A.
NormalizedProblem normalize_problem(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

}  // namespace slag
