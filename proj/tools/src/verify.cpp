#include <cmath>
#include <random>
#include <sstream>

#include "internal.hpp"

namespace slag::cli {

namespace {

using detail::Json;

constexpr int kDefaultVectors = 200;
constexpr double kDoubleRelTol = 1e-10;

// Arithmetic policy for the identity suites.
template <class T>
struct Arith;

template <>
struct Arith<Rational> {
  static constexpr const char* name = "rational";
  static Rational from_ratio(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  static bool is_zero(const Rational& r, double /*scale*/) { return sgn(r) == 0; }
  static double magnitude(const Rational& r) { return std::abs(r.get_d()); }
  static std::string text(const Rational& r) { return to_string(r); }
  static Json value(const Rational& r) { return to_string(r); }
};

template <>
struct Arith<double> {
  static constexpr const char* name = "double";
  static double from_ratio(long p, long q) { return static_cast<double>(p) / static_cast<double>(q); }
  static bool is_zero(double r, double scale) { return std::abs(r) <= kDoubleRelTol * std::max(1.0, scale); }
  static double magnitude(double r) { return std::abs(r); }
  static std::string text(double r) { return format_double(r); }
  static Json value(double r) { return r; }
};

struct Tally {
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;  // largest residual, or smallest margin for inequality suites
  bool worst_set = false;
  Json counterexample;

  void residual(double r) {
    worst = worst_set ? std::max(worst, r) : r;
    worst_set = true;
  }
  void margin(double m) {
    worst = worst_set ? std::min(worst, m) : m;
    worst_set = true;
  }
  void fail(Json example) {
    ++failures;
    if (counterexample.is_null()) counterexample = std::move(example);
  }
  void merge(const Tally& other) {
    cases += other.cases;
    failures += other.failures;
    if (other.worst_set) {
      if (!worst_set)
        worst = other.worst;
      else
        worst = residual_kind ? std::max(worst, other.worst) : std::min(worst, other.worst);
      worst_set = true;
    }
    if (counterexample.is_null() && !other.counterexample.is_null()) counterexample = other.counterexample;
  }
  bool residual_kind = true;
};

enum Suite {
  kZstarModes,
  kProduct,
  kSplit,
  kWeighted,
  kNewton,
  kEnumeration,
  kRationalSuites,
};

constexpr const char* kSuiteNames[kRationalSuites] = {
    "zstar_modes", "product_decomposition", "sigma_split", "weighted_sum", "newton_inequalities",
    "recurrence_vs_enumeration",
};

template <class T>
Json vector_json(const std::vector<T>& a) {
  Json arr = Json::array();
  for (const T& v : a) arr.push_back(Arith<T>::value(v));
  return arr;
}

template <class T>
std::vector<T> random_vector(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{seed, static_cast<std::uint64_t>(index), std::uint64_t{1}};
  std::mt19937_64 rng(seq);
  const std::size_t n = 3 + index % 6;
  std::uniform_int_distribution<long> num(1, 30);
  std::uniform_int_distribution<long> den(1, 16);
  std::vector<T> a;
  for (std::size_t i = 0; i < n; ++i) a.push_back(Arith<T>::from_ratio(num(rng), den(rng)));
  return a;
}

template <class T>
T subset_sum(const std::vector<T>& a, int k) {
  T acc = T(0);
  const std::size_t n = a.size();
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    if (__builtin_popcountl(mask) != k) continue;
    T prod = T(1);
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1ul << i)) prod *= a[i];
    acc += prod;
  }
  return acc;
}

template <class T>
std::array<Tally, kRationalSuites> check_vector(const std::vector<T>& a, bool inject_fault) {
  using A = Arith<T>;
  std::array<Tally, kRationalSuites> t;
  t[kNewton].residual_kind = false;
  const std::span<const T> view(a);
  const int n = static_cast<int>(a.size());
  const std::vector<T> s = elem_sym_all(view);
  auto example = [&](const char* what) {
    Json j;
    j["check"] = what;
    j["vector"] = vector_json(a);
    return j;
  };
  auto record = [&](Tally& tally, const T& lhs, const T& rhs, const char* what) {
    ++tally.cases;
    const T diff = T(lhs - rhs);
    const double scale = std::max(A::magnitude(lhs), A::magnitude(rhs));
    tally.residual(A::magnitude(diff));
    if (!A::is_zero(diff, scale)) tally.fail(example(what));
  };

  {
    const T product = Zstar(view, ZstarMode::product);
    T closed = Zstar(view, ZstarMode::closed_form);
    if (inject_fault) closed += A::from_ratio(1, 1000);
    record(t[kZstarModes], product, closed, "Zstar product vs closed form");
  }
  for (int j = 0; j <= n; ++j)
    for (int k = j; k <= n; ++k) {
      const T expected = T(s[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(k)]);
      const std::vector<ProductTerm> terms = sigma_product_decompose(j, k, n);
      record(t[kProduct], evaluate_decomposition<T>(terms, view), expected, "sigma_j sigma_k decomposition");
      if (j + k == n) {
        const std::vector<ProductTerm> low = sigma_product_decompose(j, k, n, false);
        record(t[kProduct], evaluate_decomposition<T>(low, view), expected, "sigma_j sigma_k low regime");
      }
    }
  const std::vector<std::vector<T>> excl = elem_sym_excl_table(view);
  for (int k = 1; k <= n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    T weighted = T(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      record(t[kSplit], T(excl[i][ku] + a[i] * excl[i][ku - 1]), s[ku], "sigma_k split");
      weighted += a[i] * excl[i][ku - 1];
    }
    record(t[kWeighted], weighted, T(T(k) * s[ku]), "weighted sum");
    record(t[kEnumeration], s[ku], subset_sum(a, k), "recurrence vs enumeration");
  }
  const NewtonReport<T> newton = newton_check(view);
  for (const T& m : newton.margins) {
    ++t[kNewton].cases;
    t[kNewton].margin(m > T(0) ? A::magnitude(m) : -A::magnitude(m));
    if (m < T(0)) t[kNewton].fail(example("Newton inequality"));
  }
  return t;
}

Json tally_json(const char* name, const Tally& tally, bool exact_worst) {
  Json j;
  j["name"] = name;
  j["cases"] = tally.cases;
  j["failures"] = tally.failures;
  if (exact_worst && tally.residual_kind)
    j["worst"] = tally.worst == 0.0 ? Json("0") : Json(tally.worst);
  else
    j["worst"] = tally.worst;
  if (!tally.counterexample.is_null()) j["counterexample"] = tally.counterexample;
  return j;
}

template <class T>
std::array<Tally, kRationalSuites> identity_suites(std::size_t count, std::uint64_t seed, bool inject_fault) {
  std::vector<std::array<Tally, kRationalSuites>> slots(count);
  detail::parallel_for(count, [&](std::size_t i) {
    slots[i] = check_vector(random_vector<T>(seed, i), inject_fault && i == 0);
  });
  std::array<Tally, kRationalSuites> total;
  total[kNewton].residual_kind = false;
  for (const auto& slot : slots)
    for (std::size_t s = 0; s < total.size(); ++s) total[s].merge(slot[s]);
  return total;
}

// Level-set samples: a random supported phase per item.
struct Sampled {
  Tally m_range;
  Tally xi_chains;
  Tally ray_roots;
};

Sampled sampled_item(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{seed, static_cast<std::uint64_t>(index), std::uint64_t{2}};
  std::mt19937_64 rng(seq);
  const int n = 3 + static_cast<int>(index % 4);
  std::uniform_real_distribution<double> unit(0.02, 0.98);
  const PhaseSpec phase = index % 3 == 0   ? PhaseSpec::critical(n)
                          : index % 3 == 1 ? PhaseSpec(n, (n - 1) * kPi / 2)
                                           : PhaseSpec(n, (n - 2 + 2 * unit(rng)) * kPi / 2);
  const EigenVector a = random_level_set_point(phase, rng);
  Sampled out;
  out.m_range.residual_kind = false;
  out.xi_chains.residual_kind = false;
  out.ray_roots.residual_kind = false;
  auto example = [&](const char* what) {
    Json j;
    j["check"] = what;
    j["n"] = n;
    j["theta"] = phase.theta();
    j["vector"] = detail::number_array({a.values().begin(), a.values().end()});
    return j;
  };

  const double m = xi_select(phase, a).m;
  ++out.m_range.cases;
  const double m_slack = std::min(m, n - m);
  out.m_range.margin(m_slack);
  if (!(m > 0.0) || m > n * (1.0 + 1e-12)) out.m_range.fail(example("0 < m <= n"));

  double chain_slack = std::numeric_limits<double>::infinity();
  XiBounds prev = xi_bounds(a, 1);
  for (int k = 1; k <= n; ++k) {
    const XiBounds b = xi_bounds(a, k);
    const double kn = static_cast<double>(k) / n;
    chain_slack = std::min({chain_slack, kn - b.lower, b.upper - kn});
    if (k > 1) chain_slack = std::min({chain_slack, b.lower - prev.lower, b.upper - prev.upper});
    prev = b;
  }
  ++out.xi_chains.cases;
  out.xi_chains.margin(chain_slack);
  if (chain_slack < -1e-12) out.xi_chains.fail(example("xi chains"));

  ++out.ray_roots.cases;
  try {
    const RayRootCertificate cert = Z_ray_roots(phase, a.values());
    out.ray_roots.margin(cert.simplicity_margin);
    if (!cert.max_root_is_one || static_cast<int>(cert.roots.size()) != order_N(phase))
      out.ray_roots.fail(example("ray roots"));
  } catch (const NumericalError&) {
    out.ray_roots.fail(example("ray root certification"));
  }
  return out;
}

}  // namespace

RunResult run_verify(const RunConfig& config) {
  const int count = config.grid.value_or(kDefaultVectors);
  if (count < 1) throw DomainError("--grid must be positive");
  const bool exact = config.exact.value_or(true);
  const Format format = config.format.value_or(Format::json);

  const auto identities = exact ? identity_suites<Rational>(count, config.seed, config.inject_fault)
                                : identity_suites<double>(count, config.seed, config.inject_fault);

  Tally qio;
  for (int Q = 0; Q <= 20; ++Q) {
    ++qio.cases;
    const Integer value = qio_sum(Q);
    qio.residual(std::abs(Integer(value - (Q == 0 ? 1 : 0)).get_d()));
    if (value != (Q == 0 ? 1 : 0)) qio.fail(Json{{"check", "qio_sum"}, {"Q", Q}, {"value", value.get_str()}});
  }

  Tally ones;
  for (int n = 1; n <= 10; ++n) {
    const std::vector<Rational> one(static_cast<std::size_t>(n), Rational(1));
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j <= k; ++j) {
        ++ones.cases;
        const Rational got = gen_sym(std::span<const Rational>(one), k, j);
        const Integer want = binomial(n, k) * binomial(k, j);
        ones.residual(std::abs(Rational(got - Rational(want)).get_d()));
        if (got != Rational(want)) ones.fail(Json{{"check", "S_k^j(1)"}, {"n", n}, {"k", k}, {"j", j}});
      }
  }

  Tally zones;
  Json zstar_values = Json::array();
  for (int n = 3; n <= 12; ++n) {
    const std::vector<Rational> one(static_cast<std::size_t>(n), Rational(1));
    const std::span<const Rational> view(one);
    const Rational product = Zstar(view, ZstarMode::product);
    const Rational closed = Zstar(view, ZstarMode::closed_form);
    const Integer want = Integer(n) * (Integer(1) << static_cast<mp_bitcnt_t>(n - 1));
    ++zones.cases;
    zones.residual(std::abs(Rational(product - Rational(want)).get_d()));
    if (product != Rational(want) || closed != Rational(want))
      zones.fail(Json{{"check", "Zstar(1_n)"}, {"n", n}, {"value", to_string(product)}});
    zstar_values.push_back(Json{{"n", n}, {"value", to_string(product)}});
  }

  std::vector<Sampled> samples(static_cast<std::size_t>(count));
  detail::parallel_for(samples.size(), [&](std::size_t i) { samples[i] = sampled_item(config.seed, i); });
  Sampled sampled;
  sampled.m_range.residual_kind = sampled.xi_chains.residual_kind = sampled.ray_roots.residual_kind = false;
  for (const Sampled& s : samples) {
    sampled.m_range.merge(s.m_range);
    sampled.xi_chains.merge(s.xi_chains);
    sampled.ray_roots.merge(s.ray_roots);
  }

  std::vector<std::pair<const char*, const Tally*>> suites;
  for (std::size_t s = 0; s < identities.size(); ++s) suites.emplace_back(kSuiteNames[s], &identities[s]);
  suites.emplace_back("qio_sum", &qio);
  suites.emplace_back("gen_sym_ones", &ones);
  suites.emplace_back("zstar_ones", &zones);
  suites.emplace_back("level_set_m_range", &sampled.m_range);
  suites.emplace_back("xi_chains", &sampled.xi_chains);
  suites.emplace_back("ray_roots", &sampled.ray_roots);

  bool pass = true;
  for (const auto& [name, tally] : suites) pass = pass && tally->failures == 0;

  RunResult result;
  result.exit_code = pass ? kSuccess : kCheckFailure;
  std::ostringstream summary;
  for (const auto& [name, tally] : suites) {
    summary << name << ": " << tally->cases << " cases, " << tally->failures << " failures\n";
    if (!tally->counterexample.is_null()) summary << "  counterexample: " << tally->counterexample.dump() << "\n";
  }
  summary << (pass ? "verify: all suites passed" : "verify: FAILED") << "\n";
  result.message = summary.str();

  if (format == Format::json) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "verify";
    doc["seed"] = config.seed;
    doc["prng"] = "mt19937_64";
    doc["arithmetic"] = exact ? Arith<Rational>::name : Arith<double>::name;
    doc["vectors"] = count;
    Json arr = Json::array();
    for (const auto& [name, tally] : suites) arr.push_back(tally_json(name, *tally, exact));
    doc["suites"] = arr;
    doc["zstar_ones"] = zstar_values;
    doc["pass"] = pass;
    result.document = doc.dump(2) + "\n";
  } else {
    std::ostringstream csv;
    csv << "suite,cases,failures,worst\n";
    for (const auto& [name, tally] : suites)
      csv << name << ',' << tally->cases << ',' << tally->failures << ',' << detail::csv_number(tally->worst) << '\n';
    for (const Json& z : zstar_values)
      csv << "zstar_ones_n" << z["n"].get<int>() << ",1,0," << z["value"].get<std::string>() << '\n';
    result.document = csv.str();
  }
  return result;
}

}  // namespace slag::cli
