#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "rbc/rbc.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Robust barrier certificates and safety supervision for uncertain SISO plants",
               "rbc"};
  app.set_version_flag("--version", std::string(rbc::kVersion));
  app.require_subcommand(1);

  rbc::cli::GlobalOptions globals;
  app.add_option("--tolerance", globals.tolerance, "Residual tolerance for certificate checks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", globals.seed, "Seed for randomized test harnesses")->capture_default_str();

  std::string config;
  std::string certificate;
  std::string out;
  std::string scenario;
  std::string trace;

  auto* synthesize = app.add_subcommand("synthesize", "Synthesize Q_j and the estimator matrix");
  synthesize->add_option("--config", config, "Project configuration (JSON)")->required();
  synthesize->add_option("--out", out, "Certificate output path")->required();

  auto* simulate = app.add_subcommand("simulate", "Simulate a configured scenario");
  simulate->add_option("--config", config, "Project configuration (JSON)")->required();
  simulate->add_option("--certificate", certificate, "Certificate from synthesize")->required();
  simulate->add_option("--scenario", scenario, "Scenario name from the configuration")->required();
  simulate->add_option("--out", out, "Trace CSV output path")->required();

  auto* verify = app.add_subcommand("verify", "Re-check a certificate against its configuration");
  verify->add_option("--certificate", certificate, "Certificate to check")->required();
  verify->add_option("--config", config, "Project configuration (JSON)")->required();

  auto* plot = app.add_subcommand("plot", "Render a trace as SVG");
  plot->add_option("--trace", trace, "Trace CSV from simulate")->required();
  plot->add_option("--out", out, "SVG output path")->required();
  plot->add_option("--certificate", certificate, "Certificate for drawing the ellipses and hull");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? rbc::cli::kExitOk : rbc::cli::kExitConfig;
  }

  if (*synthesize) return rbc::cli::cmd_synthesize(config, out, globals, std::cout, std::cerr);
  if (*simulate) {
    return rbc::cli::cmd_simulate(config, certificate, scenario, out, globals, std::cout, std::cerr);
  }
  if (*verify) return rbc::cli::cmd_verify(certificate, config, globals, std::cout, std::cerr);
  std::optional<std::filesystem::path> plot_certificate;
  if (!certificate.empty()) plot_certificate = certificate;
  return rbc::cli::cmd_plot(trace, out, plot_certificate, std::cout, std::cerr);
}
