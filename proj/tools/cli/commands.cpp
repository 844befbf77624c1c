#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>

#include "cli/certificate.hpp"
#include "cli/config.hpp"
#include "cli/plot.hpp"
#include "cli/trace_csv.hpp"

namespace rbc::cli {

namespace {

void print_diagnostics(const ConfigError& e, std::ostream& err) {
  err << "error: invalid input\n";
  for (const auto& line : e.diagnostics()) err << "  " << line << '\n';
}

void print_report(const SolveReport& report, std::ostream& err) {
  err << "  status: " << to_string(report.status) << '\n'
      << "  objective: " << format_number(report.objective) << '\n'
      << "  max constraint residual: " << format_number(report.max_constraint_residual) << '\n'
      << "  duality gap bound: " << format_number(report.duality_gap) << '\n'
      << "  newton steps: " << report.newton_steps << '\n';
  if (!report.message.empty()) err << "  message: " << report.message << '\n';
}

void print_checks(const std::vector<CheckResult>& checks, std::ostream& out) {
  for (const auto& check : checks) {
    out << (check.pass ? "PASS " : "FAIL ") << check.name;
    if (check.numeric) out << "  residual=" << format_number(check.residual);
    if (!check.detail.empty()) out << "  (" << check.detail << ')';
    out << '\n';
  }
}

std::size_t failures(const std::vector<CheckResult>& checks) {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.pass; }));
}

}  // namespace

int cmd_synthesize(const std::filesystem::path& config_path, const std::filesystem::path& out_path,
                   const GlobalOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const auto started = std::chrono::steady_clock::now();
    const ProjectConfig config = load_config(config_path);
    const auto& syn = config.synthesis;
    const std::vector<Matrix> vertices =
        pldi_vertices(config.plant, config.constraints.gain, syn.degeneracy_tol);
    out << "closed-loop vertices: " << vertices.size() << '\n';

    BarrierCertificate barrier;
    try {
      barrier = synthesize_certificate(vertices, config.constraints, syn.alpha0, syn.directions);
    } catch (const SynthesisInfeasibleError& e) {
      err << "error: " << e.what() << '\n';
      print_report(e.report(), err);
      return kExitInfeasible;
    }

    EstimatorDesign design;
    try {
      SolverOptions solver;
      solver.tolerance = syn.feasibility_tol;
      design = synthesize_a0(barrier.q_list, syn.alpha0, syn.upper_bracket(), syn.bisect_tol,
                             syn.trust_radius, solver);
    } catch (const ContractViolationError& e) {
      err << "error: synthesis infeasible: no estimator reaches the decay rate alpha0 ("
          << e.what() << ")\n";
      return kExitInfeasible;
    }

    CertificateFile certificate;
    certificate.n = config.plant.order();
    certificate.q_list = barrier.q_list;
    certificate.directions = barrier.directions;
    certificate.rho = barrier.rho;
    certificate.alpha0 = barrier.alpha0;
    certificate.gain = barrier.gain;
    certificate.a_hat = design.a_hat;
    certificate.alpha = design.alpha;
    certificate.config_hash = config.hash;
    certificate.version = kVersion;
    const auto checks = check_certificate(certificate, config, options.tolerance);
    certificate.residuals = residual_map(checks);

    out << "alpha0 = " << format_number(certificate.alpha0) << '\n';
    for (std::size_t j = 0; j < certificate.rho.size(); ++j) {
      out << "rho_" << j + 1 << " = " << format_number(certificate.rho[j]) << '\n';
    }
    out << "alpha = " << format_number(certificate.alpha) << " (" << design.bisection_steps
        << " bisection steps" << (design.saturated ? ", upper bracket reached" : "") << ")\n";
    out << "a_hat =";
    for (Eigen::Index i = 0; i < design.a_hat.size(); ++i) out << ' ' << format_number(design.a_hat(i));
    out << '\n';
    out << "residuals:\n";
    for (const auto& [name, value] : certificate.residuals) {
      out << "  " << name << " = " << format_number(value) << '\n';
    }
    if (const std::size_t failed = failures(checks); failed > 0) {
      err << "error: " << failed << " post-synthesis check(s) exceed the tolerance\n";
      print_checks(checks, err);
      return kExitRuntime;
    }
    save_certificate(certificate, out_path);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    out << "wrote " << out_path.string() << " in " << format_number(seconds) << " s\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    print_diagnostics(e, err);
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_simulate(const std::filesystem::path& config_path,
                 const std::filesystem::path& certificate_path, const std::string& scenario_name,
                 const std::filesystem::path& out_path, const GlobalOptions& options,
                 std::ostream& out, std::ostream& err) {
  try {
    const ProjectConfig config = load_config(config_path);
    const CertificateFile certificate = load_certificate(certificate_path);
    if (certificate.config_hash != config.hash) {
      err << "error: certificate was synthesized from a different configuration (hash "
          << certificate.config_hash << ", expected " << config.hash << ")\n";
      return kExitConsistency;
    }
    const auto it = config.scenarios.find(scenario_name);
    if (it == config.scenarios.end()) {
      err << "error: unknown scenario '" << scenario_name << "'; available:";
      for (const auto& [name, unused] : config.scenarios) err << ' ' << name;
      err << '\n';
      return kExitConfig;
    }

    SafetySystem system{config.plant,
                        certificate.barrier(config.constraints),
                        certificate.a_hat,
                        certificate.alpha,
                        config.eps0_norm,
                        config.b_lower,
                        config.b_upper,
                        config.synthesis.degeneracy_tol,
                        options.tolerance};
    SimulationTrace trace;
    try {
      const CompositeNorm norm(certificate.q_list);
      trace = simulate(make_scenario(config, it->second, norm), system);
    } catch (const ConfigurationError& e) {
      err << "error: certificate and configuration are inconsistent: " << e.what() << '\n';
      return kExitConsistency;
    }
    write_trace_csv(trace, out_path);

    double worst_increase = -std::numeric_limits<double>::infinity();
    bool estimate_dominates = true;
    for (std::size_t k = 0; k < trace.rows.size(); ++k) {
      if (k > 0) worst_increase = std::max(worst_increase, trace.rows[k].b_true - trace.rows[k - 1].b_true);
      estimate_dominates = estimate_dominates && trace.rows[k].b_hat_max >= trace.rows[k].b_true - 1e-6;
    }
    out << "scenario: " << scenario_name << '\n'
        << "rows: " << trace.rows.size() << '\n'
        << "max |y| = " << format_number(trace.max_abs_y()) << '\n'
        << "max |u| = " << format_number(trace.max_abs_u()) << '\n'
        << "switches to backup: " << trace.switches_to_backup() << '\n'
        << "source switches: " << trace.switch_count() << '\n'
        << "min margin (-B_true) = " << format_number(trace.min_margin()) << '\n'
        << "B_true non-increasing: " << (worst_increase <= 1e-6 ? "yes" : "no");
    if (trace.rows.size() > 1) out << " (largest step change " << format_number(worst_increase) << ')';
    out << '\n'
        << "B_hat_max >= B_true: " << (estimate_dominates ? "yes" : "no") << '\n'
        << "wrote " << out_path.string() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    print_diagnostics(e, err);
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_verify(const std::filesystem::path& certificate_path, const std::filesystem::path& config_path,
               const GlobalOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const ProjectConfig config = load_config(config_path);
    const CertificateFile certificate = load_certificate(certificate_path);
    const auto checks = check_certificate(certificate, config, options.tolerance);
    print_checks(checks, out);
    const std::size_t failed = failures(checks);
    if (failed > 0) {
      err << "verification failed: " << failed << " of " << checks.size()
          << " checks violated (tolerance " << format_number(options.tolerance) << ")\n";
      for (const auto& check : checks) {
        if (!check.pass) err << "  " << check.name << '\n';
      }
      return kExitConsistency;
    }
    out << "all " << checks.size() << " checks passed (tolerance "
        << format_number(options.tolerance) << ")\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    print_diagnostics(e, err);
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_plot(const std::filesystem::path& trace_path, const std::filesystem::path& out_path,
             const std::optional<std::filesystem::path>& certificate_path, std::ostream& out,
             std::ostream& err) {
  SimulationTrace trace;
  try {
    trace = read_trace_csv(trace_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (trace.rows.empty()) {
    err << "error: trace " << trace_path.string() << " has no rows\n";
    return kExitConfig;
  }
  try {
    std::optional<std::vector<Matrix>> q_list;
    if (certificate_path) {
      const CertificateFile certificate = load_certificate(*certificate_path);
      if (certificate.n != trace.order) {
        err << "error: certificate order " << certificate.n << " does not match trace order "
            << trace.order << '\n';
        return kExitConsistency;
      }
      q_list = certificate.q_list;
    }
    const std::string svg = render_plot(trace, q_list);
    std::ofstream file(out_path, std::ios::binary);
    if (!file || !(file << svg)) {
      err << "error: cannot write " << out_path.string() << '\n';
      return kExitRuntime;
    }
    out << "wrote " << out_path.string() << " (" << trace.rows.size() << " rows)\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    print_diagnostics(e, err);
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace rbc::cli
