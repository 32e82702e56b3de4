#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "internal.hpp"

namespace slag::cli {

namespace {

void add_common(CLI::App& sub, RunConfig& cfg, std::string& a_text, std::string& format_text) {
  sub.add_option("--n", cfg.n, "dimension")->check(CLI::Range(3, 64));
  sub.add_option("--theta", cfg.theta, "phase: radians, 'critical', or e.g. 5pi/3");
  sub.add_option("--a", a_text, "comma-separated eigenvalues");
  sub.add_option("--family", cfg.family, "eps:<value> or iso");
  sub.add_option("--beta", cfg.beta, "psi(1) = beta >= 1");
  sub.add_option("--gamma", cfg.gamma, "inner radius gamma >= 1");
  sub.add_option("--alpha", cfg.alpha, "phi(gamma) = alpha");
  sub.add_option("--rmax", cfg.r_max, "outer radius for the psi trajectory");
  sub.add_option("--grid", cfg.grid, "vectors (verify), eps points (scan-eps), shells (solve)");
  sub.add_option("--seed", cfg.seed, "seed for randomized suites");
  sub.add_option("--out", cfg.out, "output file (default: stdout)");
  sub.add_option("--format", format_text, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub.add_flag("--exact,!--no-exact", cfg.exact, "rational arithmetic where supported");
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Special Lagrangian subsolution toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string a_text;
  std::string format_text;
  for (const char* name : {"verify", "scan-eps", "solve"}) {
    const char* help = std::string(name) == "verify"     ? "exact identity and property suites"
                       : std::string(name) == "scan-eps" ? "m(eps) scan of the five-dimensional family"
                                                         : "psi trajectory, partial fractions and subsolution check";
    add_common(*app.add_subcommand(name, help), cfg, a_text, format_text);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInvalidInput;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  RunResult result;
  try {
    if (!a_text.empty()) cfg.a = parse_list(a_text);
    if (!format_text.empty()) cfg.format = format_text == "csv" ? Format::csv : Format::json;
    result = run(cfg);
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  }

  if (!result.document.empty()) {
    if (cfg.out) {
      std::ofstream file(*cfg.out, std::ios::binary);
      if (!file) {
        err << "cannot open " << *cfg.out << " for writing\n";
        return kInvalidInput;
      }
      file << result.document;
    } else {
      out << result.document;
    }
  }
  err << result.message;
  return result.exit_code;
}

}  // namespace slag::cli
