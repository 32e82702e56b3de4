#include "slag/xiquant.hpp"

#include <algorithm>
#include <cmath>

namespace slag {

EigenVector::EigenVector(std::span<const double> entries) : values_(entries.begin(), entries.end()) {
  if (values_.size() < 3) throw DomainError("eigenvalue vector needs n >= 3");
  for (double v : values_)
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("eigenvalue vector must lie in the positive cone");
  std::sort(values_.begin(), values_.end());
}

EigenVector::EigenVector(std::initializer_list<double> entries)
    : EigenVector(std::span<const double>(entries.begin(), entries.size())) {}

double Xi_eval(std::span<const double> a, std::span<const double> x, int k) {
  if (a.size() != x.size()) throw DomainError("Xi_eval: a and x differ in length");
  if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; }))
    throw DomainError("Xi_eval: x must be nonzero");
  if (k < 0 || static_cast<std::size_t>(k) > a.size()) throw DomainError("Xi_eval: k outside [0, n]");
  if (k == 0) return 0.0;
  const double sk = elem_sym(a, k);
  if (sk == 0.0) throw DomainError("Xi_eval: sigma_k(a) vanishes");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ax2 = a[i] * x[i] * x[i];
    num += elem_sym_excl(a, k - 1, ExclusionSet{i}) * a[i] * ax2;
    den += ax2;
  }
  return num / (sk * den);
}

XiBounds xi_bounds(const EigenVector& a, int k) {
  const std::span<const double> v = a.values();
  const std::size_t n = v.size();
  if (k < 0 || static_cast<std::size_t>(k) > n) throw DomainError("xi_bounds: k outside [0, n]");
  if (k == 0) return {0.0, 0.0};
  if (static_cast<std::size_t>(k) == n) return {1.0, 1.0};
  const double sk = elem_sym(v, k);
  return {v.front() * elem_sym_excl(v, k - 1, ExclusionSet{0}) / sk,
          v.back() * elem_sym_excl(v, k - 1, ExclusionSet{n - 1}) / sk};
}

XiProfile xi_select(const PhaseSpec& spec, const EigenVector& a) {
  if (static_cast<int>(a.size()) != spec.n()) throw DomainError("xi_select: dimension mismatch");
  const std::vector<double> c = coeffs_c(spec);
  const std::vector<double> s = elem_sym_all(a.values());
  XiProfile prof;
  double num = 0.0;
  double den = 0.0;
  for (int k = 0; k <= spec.n(); ++k) {
    const XiBounds b = xi_bounds(a, k);
    const auto i = static_cast<std::size_t>(k);
    prof.lower.push_back(b.lower);
    prof.upper.push_back(b.upper);
    prof.selected.push_back(c[i] > 0.0 ? b.upper : b.lower);
    num += k * c[i] * s[i];
    den += prof.selected.back() * c[i] * s[i];
  }
  prof.m = num / den;
  return prof;
}

double m_value(const PhaseSpec& spec, const EigenVector& a) {
  if (!(spec.theta() > 0.0)) throw DomainError("m_value: theta must lie in (0, n pi/2)");
  if (!on_level_set(spec, a.values())) throw DomainError("a not on the phase level set");
  return xi_select(spec, a).m;
}

Admissibility admissibility(std::span<const double> lambda, const PhaseSpec& spec) {
  if (static_cast<int>(lambda.size()) != spec.n()) throw DomainError("admissibility: dimension mismatch");
  Admissibility out;
  const bool positive = std::all_of(lambda.begin(), lambda.end(), [](double v) { return v > 0.0 && std::isfinite(v); });
  const bool negative = std::all_of(lambda.begin(), lambda.end(), [](double v) { return v < 0.0 && std::isfinite(v); });
  if (!positive && !negative) return out;

  std::vector<double> reduced(lambda.begin(), lambda.end());
  double theta = spec.theta();
  if (negative) {
    // u -> -u maps the phase-theta problem to phase -theta on -lambda.
    for (double& v : reduced) v = -v;
    theta = -theta;
    out.reflected = true;
  }
  if (!(theta > 0.0)) return out;
  const PhaseSpec reduced_spec(spec.n(), theta);
  const EigenVector a(reduced);
  if (!on_level_set(reduced_spec, a.values())) return out;

  const double m = xi_select(reduced_spec, a).m;
  out.m = m;
  out.klass = m > 2.0 ? AdmissibilityClass::in_A : AdmissibilityClass::in_A0_only;
  out.near_threshold = std::abs(m - 2.0) <= 1e-12;
  return out;
}

const char* to_string(AdmissibilityClass klass) {
  switch (klass) {
    case AdmissibilityClass::not_in_A0:
      return "not_in_A0";
    case AdmissibilityClass::in_A0_only:
      return "in_A0_only";
    case AdmissibilityClass::in_A:
      return "in_A";
  }
  return "unknown";
}

EigenVector complete_to_phase(std::span<const double> prefix, const PhaseSpec& spec) {
  if (static_cast<int>(prefix.size()) + 1 != spec.n())
    throw DomainError("complete_to_phase: prefix must have n - 1 entries");
  for (double v : prefix)
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("complete_to_phase: prefix must be positive");
  const double rest = spec.theta() - phase_H(prefix);
  if (!(rest > 0.0 && rest < kPi / 2)) throw DomainError("no positive completion");
  const double last = std::tan(rest);
  if (!(last > 0.0) || !std::isfinite(last)) throw DomainError("no positive completion");
  std::vector<double> full(prefix.begin(), prefix.end());
  full.push_back(last);
  return EigenVector(full);
}

EigenVector epsilon_family(double eps) {
  if (!(eps >= 0.0 && eps <= kPi / 12)) throw DomainError("epsilon_family: eps outside [0, pi/12]");
  const double c = kPi / 3;
  // At eps = pi/12 the last angle is pi/2; clamping keeps its tangent finite and positive.
  auto t = [](double angle) { return std::tan(std::min(angle, kPi / 2)); };
  return EigenVector({t(c - 2 * eps), t(c - eps), t(c), t(c + eps), t(c + 2 * eps)});
}

EigenVector isotropic_point(const PhaseSpec& spec) {
  if (!(spec.theta() > 0.0)) throw DomainError("isotropic_point: theta must be positive");
  return EigenVector(std::vector<double>(static_cast<std::size_t>(spec.n()), std::tan(spec.theta() / spec.n())));
}

EigenVector random_level_set_point(const PhaseSpec& spec, std::mt19937_64& rng, double min_angle) {
  if (!spec.in_supported_range()) throw DomainError("random_level_set_point: phase out of supported range");
  const int n = spec.n();
  // Angles pi/2 - d_i with sum d_i = n pi/2 - theta, each d_i in (lo, pi/2 - lo).
  const double deficit = n * kPi / 2 - spec.theta();
  const double lo = std::min(min_angle, deficit / (2.0 * n));
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> d(static_cast<std::size_t>(n));
  for (int attempt = 0; attempt < 10000; ++attempt) {
    double total = 0.0;
    for (double& v : d) total += (v = expo(rng));
    bool ok = true;
    for (double& v : d) {
      v = lo + (deficit - n * lo) * v / total;
      if (!(v < kPi / 2 - lo)) ok = false;
    }
    if (!ok) continue;
    std::vector<double> prefix;
    for (int i = 0; i + 1 < n; ++i) prefix.push_back(1.0 / std::tan(d[static_cast<std::size_t>(i)]));
    try {
      return complete_to_phase(prefix, spec);
    } catch (const DomainError&) {
      continue;
    }
  }
  throw NumericalError("random_level_set_point: sampling failed");
}

}  // namespace slag
