#include "slag/phasepoly.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

#include "slag/poly.hpp"

namespace slag {

namespace {

constexpr double kCriticalTol = 1e-12;
constexpr double kRootOneTol = 1e-9;

// sin and cos, snapped to exact values at multiples of pi/2.
std::pair<double, double> snapped_sincos(double theta) {
  const double quarter = theta / (kPi / 2);
  const double q = std::round(quarter);
  if (std::abs(theta - q * (kPi / 2)) <= kCriticalTol) {
    const long turn = ((static_cast<long>(q) % 4) + 4) % 4;
    constexpr double s[4] = {0.0, 1.0, 0.0, -1.0};
    constexpr double c[4] = {1.0, 0.0, -1.0, 0.0};
    return {s[turn], c[turn]};
  }
  return {std::sin(theta), std::cos(theta)};
}

void require_positive(std::span<const double> a, const char* what) {
  for (double x : a)
    if (!(x > 0.0) || !std::isfinite(x))
      throw DomainError(std::string(what) + ": vector must lie in the positive cone");
}

}  // namespace

PhaseSpec::PhaseSpec(int n, double theta) : PhaseSpec(n, theta, false) {}

PhaseSpec PhaseSpec::critical(int n) { return PhaseSpec(n, (n - 2) * kPi / 2, true); }

PhaseSpec::PhaseSpec(int n, double theta, bool force_critical) : n_(n), theta_(theta) {
  if (n < 3) throw DomainError("phase spec: dimension must be at least 3");
  if (!std::isfinite(theta) || std::abs(theta) >= n * kPi / 2)
    throw DomainError("phase spec: theta must lie in (-n pi/2, n pi/2)");
  const double crit = (n - 2) * kPi / 2;
  if (force_critical || std::abs(std::abs(theta) - crit) <= kCriticalTol)
    criticality_ = Criticality::critical;
  else if (std::abs(theta) > crit)
    criticality_ = Criticality::supercritical;
  else
    criticality_ = Criticality::subcritical;
  std::tie(sin_, cos_) = snapped_sincos(theta);
}

bool PhaseSpec::in_supported_range() const {
  if (theta_ <= 0.0) return false;
  return criticality_ != Criticality::subcritical;
}

double phase_H(std::span<const double> lam) {
  // Neumaier summation.
  double sum = 0.0;
  double comp = 0.0;
  for (double x : lam) {
    const double v = std::atan(x);
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

bool on_level_set(const PhaseSpec& spec, std::span<const double> lam, double tol) {
  return static_cast<int>(lam.size()) == spec.n() && std::abs(phase_H(lam) - spec.theta()) <= tol;
}

std::vector<double> coeffs_c(const PhaseSpec& spec) {
  std::vector<double> c(static_cast<std::size_t>(spec.n()) + 1);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    // c_{2j} = (-1)^{j+1} sin, c_{2j+1} = (-1)^j cos
    c[k] = (k % 2 == 0) ? -sign * spec.sin_theta() : sign * spec.cos_theta();
  }
  return c;
}

double Z_eval(const PhaseSpec& spec, std::span<const double> lam) {
  const std::vector<double> s = elem_sym_all(lam);
  const std::vector<double> c = coeffs_c(spec);
  double acc = 0.0;
  for (std::size_t k = 0; k < std::min(s.size(), c.size()); ++k) acc += c[k] * s[k];
  return acc;
}

double Zhat_eval(const PhaseSpec& spec, std::span<const double> lam) {
  const std::vector<double> s = elem_sym_all(lam);
  const std::vector<double> c = coeffs_c(spec);
  double acc = 0.0;
  for (std::size_t k = 0; k < std::min(s.size(), c.size()); ++k)
    acc += static_cast<double>(k) * c[k] * s[k];
  return acc;
}

int order_N(const PhaseSpec& spec) {
  if (!spec.in_supported_range()) throw DomainError("phase out of supported range");
  return spec.is_critical() ? spec.n() - 1 : spec.n();
}

std::vector<double> ray_coefficients(const PhaseSpec& spec, std::span<const double> a) {
  if (static_cast<int>(a.size()) != spec.n()) throw DomainError("ray polynomial: dimension mismatch");
  const int N = order_N(spec);
  const std::vector<double> s = elem_sym_all(a);
  const std::vector<double> c = coeffs_c(spec);
  std::vector<double> p(static_cast<std::size_t>(N) + 1);
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = c[k] * s[k];
  return p;
}

namespace {

double polish(std::span<const double> p, double t) {
  const std::vector<double> dp = poly::derivative(p);
  for (int it = 0; it < 60; ++it) {
    const double f = poly::horner(p, t);
    const double df = poly::horner(std::span<const double>(dp), t);
    if (df == 0.0 || !std::isfinite(df)) break;
    const double step = f / df;
    t -= step;
    if (std::abs(step) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      break;
  }
  return t;
}

int sign_of(double v) { return (v > 0) - (v < 0); }

}  // namespace

RayRootCertificate Z_ray_roots(const PhaseSpec& spec, std::span<const double> a) {
  require_positive(a, "Z_ray_roots");
  const std::vector<double> p = ray_coefficients(spec, a);
  const int N = static_cast<int>(p.size()) - 1;
  RayRootCertificate cert;
  cert.degree = N;
  cert.leading_coeff = p.back();
  if (!(cert.leading_coeff > 0.0)) throw NumericalError("root certification failed: leading coefficient not positive");

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(N, N);
  for (int i = 1; i < N; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < N; ++i) companion(i, N - 1) = -p[static_cast<std::size_t>(i)] / cert.leading_coeff;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NumericalError("root certification failed: companion eigenvalues");

  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    cert.companion_roots.push_back(solver.eigenvalues()[i].real());
  std::sort(cert.companion_roots.begin(), cert.companion_roots.end());

  cert.roots.reserve(cert.companion_roots.size());
  for (double r : cert.companion_roots) cert.roots.push_back(polish(p, r));
  std::sort(cert.roots.begin(), cert.roots.end());

  double scale = 0.0;
  for (double r : cert.roots) scale = std::max(scale, std::abs(r));
  cert.simplicity_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < cert.roots.size(); ++i)
    cert.simplicity_margin = std::min(cert.simplicity_margin, cert.roots[i] - cert.roots[i - 1]);
  if (N == 1) cert.simplicity_margin = 1.0;
  if (!(cert.simplicity_margin > 1e-7 * (1.0 + scale)))
    throw NumericalError("root certification failed: roots not separated");

  // Separator grid: one point below the smallest root, midpoints, one point above.
  std::vector<double> grid;
  const double outer = cert.simplicity_margin / 2;
  grid.push_back(cert.roots.front() - outer);
  for (std::size_t i = 1; i < cert.roots.size(); ++i)
    grid.push_back(0.5 * (cert.roots[i - 1] + cert.roots[i]));
  grid.push_back(cert.roots.back() + outer);
  int prev = sign_of(poly::horner(std::span<const double>(p), grid.front()));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const int cur = sign_of(poly::horner(std::span<const double>(p), grid[i]));
    if (prev != 0 && cur != 0 && cur != prev) ++cert.sign_changes;
    prev = cur;
  }
  if (cert.sign_changes != N) throw NumericalError("root certification failed");

  cert.max_root_is_one = on_level_set(spec, a) && std::abs(cert.roots.back() - 1.0) <= kRootOneTol;
  return cert;
}

double Z_ray_positivity(const PhaseSpec& spec, std::span<const double> a, double t, int derivative_order) {
  require_positive(a, "Z_ray_positivity");
  if (!on_level_set(spec, a)) throw DomainError("Z_ray_positivity: a not on the phase level set");
  const int N = order_N(spec);
  if (!(t >= 1.0)) throw DomainError("Z_ray_positivity: t must be at least 1");
  if (derivative_order < 0 || derivative_order > N)
    throw DomainError("Z_ray_positivity: derivative order outside [0, N]");
  const std::vector<double> p = ray_coefficients(spec, a);
  return poly::derivative_at(p, t, derivative_order);
}

}  // namespace slag
