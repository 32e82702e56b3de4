#pragma once

// Batch entry points behind the `slag` executable. Each run_* function returns
// the emitted document and an exit status instead of touching the filesystem,
// so tests can compare outputs byte for byte.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slag/xiquant.hpp"

namespace slag::cli {

enum class Format { csv, json };

enum ExitCode : int { kSuccess = 0, kCheckFailure = 1, kInvalidInput = 2 };

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string command;
  std::optional<int> n;
  std::optional<std::string> theta;  // radians, "critical", or a form like "5pi/3"
  std::vector<double> a;
  std::optional<std::string> family;  // "eps:<value>" or "iso"
  double beta = 2.0;
  double gamma = 1.0;
  double alpha = 0.0;
  double r_max = 1e4;
  std::optional<int> grid;
  std::uint64_t seed = 42;
  std::optional<std::string> out;
  std::optional<Format> format;
  std::optional<bool> exact;
  bool inject_fault = false;  // corrupts one identity evaluation; failure-path testing only
};

struct RunResult {
  int exit_code = kSuccess;
  std::string document;  // CSV or JSON text
  std::string message;   // human-readable summary for stderr
};

RunResult run_verify(const RunConfig& config);
RunResult run_scan_epsilon(const RunConfig& config);
RunResult run_solve(const RunConfig& config);

/// Dispatches on config.command, mapping DomainError to exit 2.
RunResult run(const RunConfig& config);

/// Parses argv, runs, writes the document to --out (or `out`) and the summary to `err`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "critical", plain radians, or [K][*]pi[/D]. Throws DomainError.
PhaseSpec parse_phase(int n, const std::string& text);

/// Comma-separated reals. Throws DomainError.
std::vector<double> parse_list(const std::string& text);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

}  // namespace slag::cli
