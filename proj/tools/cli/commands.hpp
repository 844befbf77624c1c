#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace rbc::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitInfeasible = 2,
  kExitConsistency = 3,
  kExitRuntime = 4,
};

struct GlobalOptions {
  /// Acceptance tolerance for residual checks.
  double tolerance = 1e-7;
  /// Seed for randomized harnesses; the commands themselves are deterministic.
  unsigned long long seed = 0;
};

/// Each command writes a human-readable report to `out`, diagnostics to `err`,
/// and returns a process exit code.
int cmd_synthesize(const std::filesystem::path& config, const std::filesystem::path& out_path,
                   const GlobalOptions& options, std::ostream& out, std::ostream& err);

int cmd_simulate(const std::filesystem::path& config, const std::filesystem::path& certificate,
                 const std::string& scenario, const std::filesystem::path& out_path,
                 const GlobalOptions& options, std::ostream& out, std::ostream& err);

int cmd_verify(const std::filesystem::path& certificate, const std::filesystem::path& config,
               const GlobalOptions& options, std::ostream& out, std::ostream& err);

/// The certificate is optional; with it the phase panel shows the hull and ellipses.
int cmd_plot(const std::filesystem::path& trace, const std::filesystem::path& out_path,
             const std::optional<std::filesystem::path>& certificate, std::ostream& out,
             std::ostream& err);

}  // namespace rbc::cli
