#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli/config.hpp"
#include "rbc/rbc.hpp"

namespace rbc::cli {

/// Offline synthesis results as stored on disk. Constraint data is not stored;
/// it comes from the configuration the certificate was built from.
struct CertificateFile {
  std::size_t n = 0;
  std::vector<Matrix> q_list;
  std::vector<Vector> directions;
  std::vector<double> rho;
  double alpha0 = 0.0;
  double gain = 0.0;
  Vector a_hat;
  double alpha = 0.0;
  /// Check name -> signed residual (lhs - rhs); non-positive means satisfied.
  std::map<std::string, double> residuals;
  std::string config_hash;
  std::string version;

  BarrierCertificate barrier(const ConstraintSet& constraints) const;
};

nlohmann::json to_json(const CertificateFile& certificate);
/// Throws ConfigError listing every malformed field.
CertificateFile certificate_from_json(const nlohmann::json& document);

void save_certificate(const CertificateFile& certificate, const std::filesystem::path& path);
CertificateFile load_certificate(const std::filesystem::path& path);

struct CheckResult {
  std::string name;
  /// lhs - rhs; the check holds when residual <= tolerance.
  double residual = 0.0;
  bool pass = false;
  std::string detail;
  /// Consistency checks against the configuration are not recorded as residuals.
  bool numeric = true;
};

/// Recomputes every condition the certificate claims directly from the
/// matrices, without calling the SDP solver:
///   Q_j symmetric positive definite,
///   f_i Q_j f_i^T <= 1 and c0 Q_j c0^T <= u_max^2 / gain^2,
///   d_j^T Q_j^{-1} d_j <= rho_j,
///   A_ci Q_j + Q_j A_ci^T + 2 alpha0 Q_j <= 0 at every closed-loop vertex,
///   A0 Q_j + Q_j A0^T + 2 alpha Q_j <= 0 with A0 Hurwitz and |a_hat_i| <= R,
/// plus agreement of n, gain, alpha0, directions and the configuration hash.
std::vector<CheckResult> check_certificate(const CertificateFile& certificate,
                                           const ProjectConfig& config, double tolerance);

/// Residual map for the numeric checks, as recorded in the certificate.
std::map<std::string, double> residual_map(const std::vector<CheckResult>& checks);

}  // namespace rbc::cli
