#include <charconv>
#include <cmath>
#include <regex>
#include <sstream>

#include "internal.hpp"

namespace slag::cli {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

double parse_real(const std::string& text, const char* what) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(value))
    throw DomainError(std::string(what) + ": cannot parse '" + text + "'");
  return value;
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw DomainError("--a: empty entry");
    out.push_back(parse_real(item.substr(first, last - first + 1), "--a"));
  }
  if (out.empty()) throw DomainError("--a: empty list");
  return out;
}

PhaseSpec parse_phase(int n, const std::string& text) {
  if (text == "critical") return PhaseSpec::critical(n);
  static const std::regex pi_form(R"(^\s*([+-]?\d*(?:\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d+)?))?\s*$)");
  std::smatch match;
  if (std::regex_match(text, match, pi_form)) {
    std::string k = match[1].str();
    if (k.empty() || k == "+") k = "1";
    if (k == "-") k = "-1";
    const double num = parse_real(k, "--theta");
    const double den = match[2].matched ? parse_real(match[2].str(), "--theta") : 1.0;
    if (den == 0.0) throw DomainError("--theta: zero denominator");
    return PhaseSpec(n, num * kPi / den);
  }
  return PhaseSpec(n, parse_real(text, "--theta"));
}

namespace detail {

namespace {

int resolve_n(const RunConfig& config) {
  if (config.n) return *config.n;
  if (!config.a.empty()) return static_cast<int>(config.a.size());
  if (config.family && config.family->rfind("eps:", 0) == 0) return 5;
  throw DomainError("--n is required");
}

}  // namespace

PhaseSpec resolve_phase(const RunConfig& config) {
  const int n = resolve_n(config);
  if (config.theta) return parse_phase(n, *config.theta);
  if (config.family && config.family->rfind("eps:", 0) == 0) return PhaseSpec(n, 5 * kPi / 3);
  throw DomainError("--theta is required");
}

std::vector<double> resolve_lambda(const RunConfig& config, const PhaseSpec& phase) {
  if (!config.a.empty() && config.family) throw DomainError("give either --a or --family, not both");
  std::vector<double> lambda;
  if (!config.a.empty()) {
    lambda = config.a;
  } else if (!config.family) {
    throw DomainError("one of --a or --family is required");
  } else if (*config.family == "iso") {
    const EigenVector a = isotropic_point(phase);
    lambda.assign(a.values().begin(), a.values().end());
  } else if (config.family->rfind("eps:", 0) == 0) {
    if (phase.n() != 5) throw DomainError("--family eps: requires n = 5");
    const EigenVector a = epsilon_family(parse_real(config.family->substr(4), "--family"));
    lambda.assign(a.values().begin(), a.values().end());
  } else {
    throw DomainError("--family must be eps:<value> or iso");
  }
  if (static_cast<int>(lambda.size()) != phase.n()) throw DomainError("--a length differs from --n");
  return lambda;
}

Json number_array(const std::vector<double>& values) {
  Json arr = Json::array();
  for (double v : values) arr.push_back(v);
  return arr;
}

std::string csv_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return format_double(value);
}

}  // namespace detail

RunResult run(const RunConfig& config) {
  try {
    if (config.command == "verify") return run_verify(config);
    if (config.command == "scan-eps") return run_scan_epsilon(config);
    if (config.command == "solve") return run_solve(config);
    throw DomainError("unknown command '" + config.command + "'");
  } catch (const DomainError& e) {
    RunResult res;
    res.exit_code = kInvalidInput;
    res.message = std::string("invalid input: ") + e.what();
    return res;
  } catch (const NumericalError& e) {
    RunResult res;
    res.exit_code = kCheckFailure;
    res.message = std::string("numerical failure: ") + e.what();
    return res;
  }
}

}  // namespace slag::cli
