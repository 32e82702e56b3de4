#include "slag/odepsi.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <array>
#include <cassert>
#include <cmath>
#include <limits>

#include "slag/poly.hpp"

namespace slag {

namespace {

std::span<const double> view(const std::vector<double>& v) { return {v.data(), v.size()}; }

}  // namespace

void validate_beta(double beta) {
  if (!(beta >= 1.0) || !std::isfinite(beta)) throw DomainError("beta must be at least 1");
  if (beta > kBetaMax) throw DomainError("beta exceeds the supported cap of 1e6");
}

PsiField::PsiField(const PhaseSpec& spec, const EigenVector& a) : spec_(spec), a_(a) {
  if (static_cast<int>(a.size()) != spec.n()) throw DomainError("psi field: dimension mismatch");
  if (!spec.in_supported_range()) throw DomainError("phase out of supported range");
  if (!on_level_set(spec, a.values())) throw DomainError("a not on the phase level set");
  xi_ = xi_select(spec, a);
  order_ = order_N(spec);
  ray_ = ray_coefficients(spec, a.values());

  num_shift_ = poly::taylor_shift(view(ray_), 1.0);
  num_shift_[0] = 0.0;

  const std::vector<double> c = coeffs_c(spec);
  const std::vector<double> s = elem_sym_all(a.values());
  std::vector<double> den(static_cast<std::size_t>(spec.n()));
  for (std::size_t k = 1; k < s.size(); ++k) den[k - 1] = xi_.selected[k] * c[k] * s[k];
  poly::trim(den);
  den_shift_ = poly::taylor_shift(view(den), 1.0);
}

double PsiField::numerator(double nu) const { return poly::horner(view(num_shift_), nu - 1.0); }

double PsiField::denominator(double nu) const { return poly::horner(view(den_shift_), nu - 1.0); }

double PsiField::g(double nu) const {
  const double d = denominator(nu);
  if (!(d > 0.0)) throw DomainError("g: denominator is not positive");
  return -numerator(nu) / d;
}

double PsiField::g_prime(double nu) const {
  const double u = nu - 1.0;
  const double d = poly::horner(view(den_shift_), u);
  if (!(d > 0.0)) throw DomainError("g': denominator is not positive");
  const double p = poly::horner(view(num_shift_), u);
  const double dp = poly::derivative_at(num_shift_, u, 1);
  const double dd = poly::derivative_at(den_shift_, u, 1);
  return -(dp * d - p * dd) / (d * d);
}

double PsiField::excess_rate(double u) const {
  // sum_{j >= 1} P_j u^{j-1}, i.e. P(1 + u) / u without the division.
  double q = 0.0;
  for (std::size_t j = num_shift_.size(); j-- > 1;) q = q * u + num_shift_[j];
  const double d = poly::horner(view(den_shift_), u);
  if (!(d > 0.0)) throw DomainError("g: denominator is not positive");
  return -q / d;
}

double g_eval(const PhaseSpec& spec, const EigenVector& a, double nu) { return PsiField(spec, a).g(nu); }

const char* to_string(PsiRoute route) { return route == PsiRoute::numeric ? "numeric" : "implicit"; }

double PartialFractionData::recombine(double nu) const {
  double acc = 0.0;
  for (std::size_t j = 1; j <= K.size(); ++j) acc += K[j - 1] / (nu - root(j));
  return acc;
}

PartialFractionData partial_fraction_K(const PsiField& field) {
  const RayRootCertificate cert = Z_ray_roots(field.spec(), field.a().values());
  if (!cert.max_root_is_one) throw NumericalError("partial fractions: largest ray root is not 1");
  PartialFractionData pf;
  pf.m = field.m();
  pf.psi_roots = cert.roots;
  pf.psi_roots.back() = 1.0;
  for (std::size_t i = 1; i < pf.psi_roots.size(); ++i)
    if (!(pf.psi_roots[i] - pf.psi_roots[i - 1] > 0.0)) throw NumericalError("partial fractions: repeated root");

  const std::vector<double> dray = poly::derivative(field.ray_coeffs());
  pf.K.resize(pf.psi_roots.size());
  for (std::size_t j = 1; j <= pf.K.size(); ++j) {
    const double root = pf.root(j);
    // Residue of D/P at a simple root: D(root) / P'(root).
    const double dP = j == 1 ? poly::derivative_at(poly::taylor_shift(field.ray_coeffs(), 1.0), 0.0, 1)
                             : poly::horner(view(dray), root);
    pf.K[j - 1] = field.denominator(root) / dP;
  }
  return pf;
}

PartialFractionData partial_fraction_K(const PhaseSpec& spec, const EigenVector& a) {
  return partial_fraction_K(PsiField(spec, a));
}

std::vector<double> log_spaced_radii(double r_max, int per_decade) {
  if (!(r_max > 1.0)) throw DomainError("r_max must exceed 1");
  if (per_decade < 1) throw DomainError("need at least one sample per decade");
  const double decades = std::log10(r_max);
  const auto count = static_cast<std::size_t>(std::ceil(decades * per_decade));
  std::vector<double> radii(count + 1);
  for (std::size_t i = 0; i <= count; ++i)
    radii[i] = std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(count));
  radii.front() = 1.0;
  radii.back() = r_max;
  return radii;
}

namespace {

void validate_radii(std::span<const double> radii) {
  if (radii.empty()) throw DomainError("no sample radii");
  if (!(radii.front() >= 1.0)) throw DomainError("sample radii must be >= 1");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw DomainError("sample radii must be strictly increasing");
}

void add_beta_warning(PsiSolution& sol) {
  if (sol.beta > kBetaWarn) sol.warnings.emplace_back("beta above 1e3: partial-fraction conditioning degrades");
}

}  // namespace

PsiSolution solve_psi_numeric(const PsiField& field, double beta, std::span<const double> radii, double tol) {
  validate_beta(beta);
  validate_radii(radii);
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");

  PsiSolution sol;
  sol.beta = beta;
  sol.route = PsiRoute::numeric;
  sol.m = field.m();
  add_beta_warning(sol);
  sol.samples.reserve(radii.size());

  if (beta == 1.0) {
    for (double r : radii) sol.samples.push_back({r, 1.0, 0.0});
    return sol;
  }

  // State w = log(psi - 1) against s = log r: dw/ds = g(1 + e^w) / e^w. The
  // equilibrium psi = 1 sits at w = -inf, so trajectories cannot cross it.
  using State = std::array<double, 1>;
  namespace odeint = boost::numeric::odeint;
  auto rhs = [&field](const State& w, State& dwds, double /*s*/) { dwds[0] = field.excess_rate(std::exp(w[0])); };

  std::vector<double> times;
  times.reserve(radii.size() + 1);
  times.push_back(0.0);
  for (double r : radii)
    if (r > 1.0) times.push_back(std::log(r));

  State w{std::log(beta - 1.0)};
  auto observe = [&](const State& x, double s) {
    if (!std::isfinite(x[0])) throw NumericalError("integration failed");
    const double u = std::exp(x[0]);
    sol.samples.push_back({std::exp(s), 1.0 + u, u});
  };
  try {
    auto stepper = odeint::make_controlled(1e-12, tol, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, rhs, w, times.begin(), times.end(), 1e-3, observe);
  } catch (const NumericalError&) {
    throw;
  } catch (const std::exception& e) {
    throw NumericalError(std::string("integration failed: ") + e.what());
  }
  // integrate_times reports the start point even when radii[0] > 1.
  if (radii.front() > 1.0) sol.samples.erase(sol.samples.begin());
  else sol.samples.front() = {1.0, beta, beta - 1.0};
  for (std::size_t i = 0; i < sol.samples.size(); ++i) sol.samples[i].r = radii[i];
  return sol;
}

PsiSolution solve_psi_numeric(const PhaseSpec& spec, const EigenVector& a, double beta, double r_max, double tol) {
  const PsiField field(spec, a);
  const std::vector<double> radii = log_spaced_radii(r_max);
  return solve_psi_numeric(field, beta, radii, tol);
}

ImplicitPsi::ImplicitPsi(const PsiField& field) : pf_(partial_fraction_K(field)) {}

ImplicitPsi::ImplicitPsi(const PsiField& /*field*/, PartialFractionData pf) : pf_(std::move(pf)) {}

double ImplicitPsi::log_B(double nu) const {
  double acc = 0.0;
  for (std::size_t j = 2; j <= pf_.K.size(); ++j) {
    const double gap = nu - pf_.root(j);
    assert(gap > 0.0);
    acc += pf_.m * pf_.K[j - 1] * std::log(gap);
  }
  return acc;
}

double ImplicitPsi::excess(double beta, double r) const {
  validate_beta(beta);
  if (!(r >= 1.0)) throw DomainError("implicit psi: r must be at least 1");
  if (beta == 1.0) return 0.0;
  if (r == 1.0) return beta - 1.0;

  const double target = std::log(beta - 1.0) + log_B(beta) - pf_.m * std::log(r);
  // L(w) = w + log B(1 + e^w) - target, increasing in w.
  auto L = [&](double w) { return w + log_B(1.0 + std::exp(w)) - target; };

  double hi = std::log(beta - 1.0);
  double lo = target - log_B(1.0) - 1.0;
  if (lo > hi) lo = hi - 1.0;
  for (double step = 1.0; L(lo) > 0.0; step *= 2.0) {
    lo -= step;
    if (!std::isfinite(lo) || lo < -745.0) throw NumericalError("implicit psi: bracket failure");
  }
  if (L(hi) < 0.0) throw NumericalError("implicit psi: bracket failure");

  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (L(mid) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  double w = 0.5 * (lo + hi);
  // One Newton step: L'(w) = 1 + e^w sum_{j>=2} m K_j / (1 + e^w - psi_j).
  const double u = std::exp(w);
  double slope = 1.0;
  for (std::size_t j = 2; j <= pf_.K.size(); ++j) slope += u * pf_.m * pf_.K[j - 1] / (1.0 + u - pf_.root(j));
  if (slope > 0.0) {
    const double next = w - L(w) / slope;
    if (next >= lo && next <= hi) w = next;
  }
  return std::exp(w);
}

double ImplicitPsi::asymptotic_constant(double beta) const {
  validate_beta(beta);
  return (beta - 1.0) * std::exp(log_B(beta) - log_B(1.0));
}

double ImplicitPsi::excess_moment(double beta, double r0, double r1) const {
  if (!(r0 >= 1.0) || !(r1 >= r0)) throw DomainError("excess moment: need 1 <= r0 <= r1");
  if (beta == 1.0 || r1 == r0) return 0.0;
  // tau (psi - 1) d tau = e^{2s} u(e^s) ds with s = log tau.
  auto f = [&](double s) { return std::exp(2.0 * s) * excess(beta, std::exp(s)); };
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, std::log(r0), std::log(r1), 15, 1e-13,
                                                                       &error);
}

PsiSolution ImplicitPsi::sample(double beta, std::span<const double> radii) const {
  validate_beta(beta);
  validate_radii(radii);
  PsiSolution sol;
  sol.beta = beta;
  sol.route = PsiRoute::implicit;
  sol.m = pf_.m;
  sol.pf = pf_;
  add_beta_warning(sol);
  for (double r : radii) {
    const double u = excess(beta, r);
    sol.samples.push_back({r, 1.0 + u, u});
  }
  return sol;
}

double solve_psi_implicit(const PhaseSpec& spec, const EigenVector& a, double beta, double r) {
  const PsiField field(spec, a);
  return ImplicitPsi(field).psi(beta, r);
}

double mu_integral(const ImplicitPsi& implicit, double beta, double R) {
  validate_beta(beta);
  if (!(R >= 1.0)) throw DomainError("mu: R must be at least 1");
  const double m = implicit.m();
  if (!(m > 2.0)) throw DomainError("integral may diverge");
  if (beta == 1.0) return 0.0;
  const double cut = std::max(1e3, 1e2 * R);
  const double body = implicit.excess_moment(beta, R, cut);
  const double tail = implicit.asymptotic_constant(beta) * std::pow(cut, 2.0 - m) / (m - 2.0);
  return body + tail;
}

double mu_integral(const PhaseSpec& spec, const EigenVector& a, double beta, double R) {
  const PsiField field(spec, a);
  return mu_integral(ImplicitPsi(field), beta, R);
}

DecayFit decay_fit(const PsiSolution& sol) {
  if (sol.beta == 1.0) throw DomainError("decay fit: beta = 1 has no decay to fit");
  if (sol.samples.empty() || sol.samples.back().r < 1e3)
    throw DomainError("decay fit: trajectory must reach r >= 1e3");
  const double start = sol.samples.back().r / 10.0 * (1.0 - 1e-12);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  for (const PsiSample& p : sol.samples) {
    if (p.r < start || !(p.excess > 0.0)) continue;
    const double x = std::log(p.r);
    const double y = std::log(p.excess);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 3) throw DomainError("decay fit: fewer than three tail samples");
  const double nn = static_cast<double>(count);
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / nn;
  return {-slope, std::exp(intercept), count};
}

}  // namespace slag
