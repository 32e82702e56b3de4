#include <cmath>
#include <sstream>

#include "internal.hpp"

namespace slag::cli {

namespace {

using detail::Json;

constexpr int kDefaultScanPoints = 97;

// m(eps) on the five-dimensional family in closed form.
double m_closed_form(double eps) {
  const double r3 = std::sqrt(3.0);
  const double num = 4 * r3 * std::cos(4 * eps) + 4 * r3 * std::cos(2 * eps) + 2 * r3;
  const double den = 2 * r3 * std::cos(4 * eps) + 2 * std::sin(6 * eps) + 2 * std::sin(2 * eps) + 3 * std::sin(4 * eps);
  return num / den;
}

double m_pipeline(const PhaseSpec& phase, double eps) { return m_value(phase, epsilon_family(eps)); }

}  // namespace

RunResult run_scan_epsilon(const RunConfig& config) {
  if (config.exact.value_or(false)) throw DomainError("scan-eps has no rational mode");
  if (config.n && *config.n != 5) throw DomainError("scan-eps runs the n = 5 family");
  const int points = config.grid.value_or(kDefaultScanPoints);
  if (points < 2) throw DomainError("--grid must be at least 2 for scan-eps");
  const Format format = config.format.value_or(Format::csv);
  const PhaseSpec phase(5, 5 * kPi / 3);
  const double eps_max = kPi / 12;

  std::vector<double> eps(static_cast<std::size_t>(points));
  std::vector<double> m(eps.size());
  std::vector<double> closed(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i)
    eps[i] = i + 1 == eps.size() ? eps_max : eps_max * static_cast<double>(i) / static_cast<double>(points - 1);
  detail::parallel_for(eps.size(), [&](std::size_t i) {
    m[i] = m_pipeline(phase, eps[i]);
    closed[i] = m_closed_form(eps[i]);
  });

  double max_gap = 0.0;
  bool monotone = true;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    max_gap = std::max(max_gap, std::abs(m[i] - closed[i]));
    if (i > 0 && !(m[i] < m[i - 1])) monotone = false;
  }

  std::optional<double> crossing;
  for (std::size_t i = 1; i < eps.size() && !crossing; ++i) {
    if ((m[i - 1] - 2.0) * (m[i] - 2.0) > 0.0) continue;
    double lo = eps[i - 1];
    double hi = eps[i];
    const bool lo_above = m[i - 1] > 2.0;
    while (hi - lo > 1e-13) {
      const double mid = 0.5 * (lo + hi);
      if ((m_pipeline(phase, mid) > 2.0) == lo_above)
        lo = mid;
      else
        hi = mid;
    }
    crossing = 0.5 * (lo + hi);
  }

  const bool pass = monotone && max_gap <= 1e-9;
  RunResult result;
  result.exit_code = pass ? kSuccess : kCheckFailure;
  std::ostringstream summary;
  summary << "scan-eps: " << points << " points, max |m - closed form| = " << format_double(max_gap)
          << ", monotone = " << (monotone ? "yes" : "no") << ", m = 2 crossing at eps = "
          << (crossing ? format_double(*crossing) : std::string("none")) << "\n";
  result.message = summary.str();

  if (format == Format::csv) {
    std::ostringstream csv;
    csv << "eps,m,m_closed_form,abs_diff\n";
    for (std::size_t i = 0; i < eps.size(); ++i)
      csv << detail::csv_number(eps[i]) << ',' << detail::csv_number(m[i]) << ',' << detail::csv_number(closed[i])
          << ',' << detail::csv_number(std::abs(m[i] - closed[i])) << '\n';
    result.document = csv.str();
  } else {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "scan-eps";
    doc["n"] = 5;
    doc["theta"] = phase.theta();
    Json rows = Json::array();
    for (std::size_t i = 0; i < eps.size(); ++i)
      rows.push_back(Json{{"eps", eps[i]}, {"m", m[i]}, {"m_closed_form", closed[i]}});
    doc["rows"] = rows;
    doc["max_abs_diff"] = max_gap;
    doc["monotone_decreasing"] = monotone;
    doc["crossing_eps"] = crossing ? Json(*crossing) : Json(nullptr);
    doc["pass"] = pass;
    result.document = doc.dump(2) + "\n";
  }
  return result;
}

}  // namespace slag::cli
