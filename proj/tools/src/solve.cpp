#include <cmath>
#include <sstream>

#include "internal.hpp"
#include "slag/subsol.hpp"

namespace slag::cli {

namespace {

using detail::Json;

constexpr double kRouteGapTol = 1e-8;
constexpr int kSamplesPerDecade = 16;

Json point_json(const Eigen::VectorXd& x) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) arr.push_back(x[i]);
  return arr;
}

}  // namespace

RunResult run_solve(const RunConfig& config) {
  if (config.exact.value_or(false)) throw DomainError("solve has no rational mode");
  const Format format = config.format.value_or(Format::json);
  const PhaseSpec phase = detail::resolve_phase(config);
  const std::vector<double> lambda = detail::resolve_lambda(config, phase);
  validate_beta(config.beta);
  if (!(config.gamma >= 1.0)) throw DomainError("--gamma must be at least 1");
  if (!(config.r_max > 1.0)) throw DomainError("--rmax must exceed 1");
  if (!std::isfinite(config.alpha)) throw DomainError("--alpha must be finite");
  const int shells = config.grid.value_or(VerificationGrid{}.shells);
  if (shells < 1) throw DomainError("--grid must be positive");

  const Admissibility adm = admissibility(lambda, phase);
  if (adm.klass != AdmissibilityClass::in_A || adm.reflected || !phase.in_supported_range()) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "solve";
    doc["error"] = "inadmissible";
    doc["klass"] = to_string(adm.klass);
    doc["m"] = adm.m ? Json(*adm.m) : Json(nullptr);
    doc["reflected"] = adm.reflected;
    RunResult result;
    result.exit_code = kInvalidInput;
    result.document = format == Format::json ? doc.dump(2) + "\n" : std::string();
    result.message = std::string("solve: input is not admissible (klass = ") + to_string(adm.klass) +
                     (adm.m ? ", m = " + format_double(*adm.m) : std::string()) + ")\n";
    return result;
  }

  const EigenVector a(lambda);
  const PsiField field(phase, a);
  const ImplicitPsi implicit(field);
  const std::vector<double> radii = log_spaced_radii(config.r_max, kSamplesPerDecade);
  const PsiSolution numeric = solve_psi_numeric(field, config.beta, radii);
  const PsiSolution exact = implicit.sample(config.beta, radii);

  double gap = 0.0;
  double g_prime_max = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    gap = std::max(gap, std::abs(numeric.samples[i].psi - exact.samples[i].psi));
    g_prime_max = std::max(g_prime_max, std::abs(field.g_prime(exact.samples[i].psi)));
  }

  std::optional<DecayFit> fit;
  if (config.beta > 1.0 && config.r_max >= 1e3) fit = decay_fit(numeric);

  SubsolutionSpec sspec;
  sspec.alpha = config.alpha;
  sspec.beta = config.beta;
  sspec.gamma = config.gamma;
  sspec.theta = phase.theta();
  sspec.A = Eigen::MatrixXd::Zero(phase.n(), phase.n());
  for (int i = 0; i < phase.n(); ++i) sspec.A(i, i) = lambda[static_cast<std::size_t>(i)];
  const Subsolution sub(sspec);
  VerificationGrid vgrid;
  vgrid.shells = shells;
  vgrid.r_max = std::max(50.0, 10.0 * config.gamma);
  const VerificationReport report = verify_subsolution(sub, vgrid);
  const double mu = mu_integral(implicit, config.beta, config.gamma);

  const bool pass = gap <= kRouteGapTol && report.success;
  RunResult result;
  result.exit_code = pass ? kSuccess : kCheckFailure;
  std::ostringstream summary;
  summary << "solve: m = " << format_double(field.m()) << ", route gap = " << format_double(gap)
          << ", verification " << (report.success ? "passed" : "FAILED") << " on " << report.points << " points\n";
  for (const std::string& w : numeric.warnings) summary << "warning: " << w << "\n";
  result.message = summary.str();

  if (format == Format::csv) {
    std::ostringstream csv;
    csv << "r,psi_numeric,psi_implicit,abs_diff\n";
    for (std::size_t i = 0; i < radii.size(); ++i)
      csv << detail::csv_number(radii[i]) << ',' << detail::csv_number(numeric.samples[i].psi) << ','
          << detail::csv_number(exact.samples[i].psi) << ','
          << detail::csv_number(std::abs(numeric.samples[i].psi - exact.samples[i].psi)) << '\n';
    result.document = csv.str();
    return result;
  }

  const PartialFractionData& pf = implicit.partial_fractions();
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = "solve";
  doc["input"] = Json{{"n", phase.n()},
                      {"theta", phase.theta()},
                      {"critical", phase.is_critical()},
                      {"a", detail::number_array({a.values().begin(), a.values().end()})},
                      {"beta", config.beta},
                      {"gamma", config.gamma},
                      {"alpha", config.alpha},
                      {"rmax", config.r_max}};
  doc["klass"] = to_string(adm.klass);
  doc["m"] = field.m();
  doc["order"] = field.order();
  Json roots = Json::array();
  Json K = Json::array();
  for (std::size_t j = 1; j <= pf.K.size(); ++j) {
    roots.push_back(pf.root(j));
    K.push_back(pf.K[j - 1]);
  }
  doc["partial_fractions"] = Json{{"roots", roots}, {"K", K}};
  Json traj = Json::array();
  for (std::size_t i = 0; i < radii.size(); ++i)
    traj.push_back(Json{{"r", radii[i]}, {"psi_numeric", numeric.samples[i].psi}, {"psi_implicit", exact.samples[i].psi}});
  doc["trajectory"] = traj;
  doc["route_gap_max"] = gap;
  doc["g_prime_max_abs"] = g_prime_max;
  doc["mu_gamma"] = mu;
  doc["asymptotic_offset"] = mu + config.alpha - 0.5 * config.gamma * config.gamma;
  if (fit)
    doc["decay_fit"] = Json{{"m_est", fit->m_est},
                            {"C_est", fit->C_est},
                            {"C", implicit.asymptotic_constant(config.beta)},
                            {"points", fit->points}};
  else
    doc["decay_fit"] = nullptr;
  doc["verification"] = Json{{"points", report.points},
                             {"r_max", vgrid.r_max},
                             {"min_H_minus_theta", report.min_H_minus_theta},
                             {"min_Z", report.min_Z},
                             {"worst_H_point", point_json(report.worst_H_point)},
                             {"worst_Z_point", point_json(report.worst_Z_point)},
                             {"tolerance", report.tolerance},
                             {"success", report.success}};
  Json warnings = Json::array();
  for (const std::string& w : numeric.warnings) warnings.push_back(w);
  doc["warnings"] = warnings;
  doc["pass"] = pass;
  result.document = doc.dump(2) + "\n";
  return result;
}

}  // namespace slag::cli
