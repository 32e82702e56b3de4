#pragma once

// Phase function H, the phase polynomials X, Y, X^, Y^, Z, Z^, Z*, the phase
// coefficients c_k and analysis of the ray polynomial t -> Z(t a).

#include <span>
#include <utility>
#include <vector>

#include "slag/symfun.hpp"

namespace slag {

inline constexpr double kPi = 3.14159265358979323846;

/// |H(a) - theta| tolerance for membership in the level set L_theta.
inline constexpr double kLevelSetTol = 1e-10;

enum class Criticality { subcritical, critical, supercritical };

/// Dimension n >= 3 and phase angle theta in (-n pi/2, n pi/2).
///
/// A phase is critical when |theta| = (n-2) pi/2. Since that value is not
/// representable, the flag is set exactly by `PhaseSpec::critical(n)` and, for
/// a numeric angle, when |theta| lies within 1e-12 of (n-2) pi/2.
class PhaseSpec {
 public:
  PhaseSpec(int n, double theta);
  static PhaseSpec critical(int n);

  int n() const { return n_; }
  double theta() const { return theta_; }
  Criticality criticality() const { return criticality_; }
  bool is_critical() const { return criticality_ == Criticality::critical; }

  /// (n-2) pi/2 <= theta < n pi/2, the range the ray analysis and the ODE need.
  bool in_supported_range() const;

  /// sin and cos of theta, exact when theta is a multiple of pi/2 (to 1e-12).
  double sin_theta() const { return sin_; }
  double cos_theta() const { return cos_; }

 private:
  PhaseSpec(int n, double theta, bool force_critical);

  int n_;
  double theta_;
  Criticality criticality_;
  double sin_;
  double cos_;
};

/// H(lam) = sum_i arctan(lam_i), accumulated with compensated summation.
double phase_H(std::span<const double> lam);

bool on_level_set(const PhaseSpec& spec, std::span<const double> lam, double tol = kLevelSetTol);

template <class T>
struct PhasePair {
  T x;
  T y;
};

/// X = 1 - sigma_2 + sigma_4 - ..., Y = sigma_1 - sigma_3 + sigma_5 - ...
template <class T>
PhasePair<T> poly_XY(std::span<const T> lam) {
  const std::vector<T> s = elem_sym_all(lam);
  PhasePair<T> out{T(0), T(0)};
  for (std::size_t k = 0; k < s.size(); ++k) {
    const bool negative = (k / 2) % 2 == 1;
    T& slot = (k % 2 == 0) ? out.x : out.y;
    if (negative)
      slot -= s[k];
    else
      slot += s[k];
  }
  return out;
}

/// X^ = -2 sigma_2 + 4 sigma_4 - ..., Y^ = sigma_1 - 3 sigma_3 + 5 sigma_5 - ...
template <class T>
PhasePair<T> poly_XYhat(std::span<const T> lam) {
  const std::vector<T> s = elem_sym_all(lam);
  PhasePair<T> out{T(0), T(0)};
  for (std::size_t k = 1; k < s.size(); ++k) {
    const bool negative = (k / 2) % 2 == 1;
    T term = T(static_cast<long>(k)) * s[k];
    T& slot = (k % 2 == 0) ? out.x : out.y;
    if (negative)
      slot -= term;
    else
      slot += term;
  }
  return out;
}

enum class ZstarMode { product, closed_form };

/// Z*(lam) = X Y^ - Y X^. The closed form is sum_{p=0}^{n-1} S_{p+1}^p(lam).
template <class T>
T Zstar(std::span<const T> lam, ZstarMode mode) {
  if (mode == ZstarMode::product) {
    const PhasePair<T> xy = poly_XY(lam);
    const PhasePair<T> hat = poly_XYhat(lam);
    return T(xy.x * hat.y - xy.y * hat.x);
  }
  T acc = T(0);
  const int n = static_cast<int>(lam.size());
  for (int p = 0; p < n; ++p) acc += gen_sym(lam, p + 1, p);
  return acc;
}

/// c_0(theta), ..., c_n(theta) with sum_k c_k sigma_k = cos(theta) Y - sin(theta) X.
std::vector<double> coeffs_c(const PhaseSpec& spec);

/// Z(theta, lam) = sum_k c_k sigma_k(lam).
double Z_eval(const PhaseSpec& spec, std::span<const double> lam);

/// Z^(theta, lam) = sum_k k c_k sigma_k(lam).
double Zhat_eval(const PhaseSpec& spec, std::span<const double> lam);

/// N(n, theta): n - 1 at the critical phase, n for supercritical phases.
/// Throws DomainError outside [(n-2) pi/2, n pi/2).
int order_N(const PhaseSpec& spec);

/// Coefficients c_k sigma_k(a), k = 0..N, of the ray polynomial t -> Z(t a).
std::vector<double> ray_coefficients(const PhaseSpec& spec, std::span<const double> a);

struct RayRootCertificate {
  std::vector<double> roots;            // ascending, Newton-polished
  std::vector<double> companion_roots;  // real parts of the companion eigenvalues, ascending
  int degree = 0;
  double leading_coeff = 0.0;
  int sign_changes = 0;  // counted on the separator grid
  bool max_root_is_one = false;
  double simplicity_margin = 0.0;  // minimum gap between consecutive roots
};

/// All N real roots of t -> Z(t a), found from the companion matrix, polished
/// with Newton steps and certified by N sign changes on a separator grid.
/// Throws NumericalError("root certification failed") if fewer are certified.
RayRootCertificate Z_ray_roots(const PhaseSpec& spec, std::span<const double> a);

/// d^order/dt^order Z(t a) at t. Requires a on L_theta in the positive cone,
/// t >= 1 and 0 <= order <= N.
double Z_ray_positivity(const PhaseSpec& spec, std::span<const double> a, double t,
                        int derivative_order);

}  // namespace slag
