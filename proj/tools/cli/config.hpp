#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rbc/rbc.hpp"

namespace rbc::cli {

/// Schema or cross-field validation failure; carries one line per problem.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

struct SynthesisConfig {
  double alpha0 = 0.5;
  std::vector<Vector> directions;
  double trust_radius = 100.0;
  /// Upper bisection bracket; defaults to 20 * alpha0.
  std::optional<double> alpha_hi;
  double bisect_tol = 1e-4;
  double feasibility_tol = 1e-7;
  double degeneracy_tol = kDefaultDegeneracyTolerance;

  double upper_bracket() const { return alpha_hi.value_or(20.0 * alpha0); }
};

struct InitialState {
  /// Either an explicit state or a point scale * (boundary of the unit ball
  /// along `boundary_direction`).
  std::optional<Vector> explicit_state;
  Vector boundary_direction;
  double scale = 1.0;
};

struct ScenarioConfig {
  std::string name;
  InitialState x0;
  enum class Nominal { kZero, kTracking } nominal = Nominal::kZero;
  ReferenceSignal reference;
  double kp = 2.0;
  double duration = 10.0;
  double dt = 1e-3;
  bool supervisor_enabled = true;
  bool always_backup = false;
};

struct ProjectConfig {
  UncertainPlant plant;
  PlantInstance truth;
  ConstraintSet constraints;
  SynthesisConfig synthesis;
  double eps0_norm = 1.0;
  double b_lower = -0.02;
  double b_upper = -0.01;
  std::map<std::string, ScenarioConfig> scenarios;
  /// Hash of the plant, constraints and synthesis blocks.
  std::string hash;
};

ProjectConfig parse_config(const nlohmann::json& document);
ProjectConfig load_config(const std::filesystem::path& path);

/// 64-bit FNV-1a of the text, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

/// Resolves a configured scenario into a runnable one.
Scenario make_scenario(const ProjectConfig& config, const ScenarioConfig& scenario,
                       const CompositeNorm& norm);

}  // namespace rbc::cli
