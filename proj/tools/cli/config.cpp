#include "cli/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rbc::cli {

using nlohmann::json;

namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out = "invalid configuration";
  for (const auto& line : lines) out += "\n  " + line;
  return out;
}

// Collects every schema problem instead of stopping at the first one.
class Reader {
 public:
  void error(const std::string& path, const std::string& message) {
    diagnostics_.push_back(path + ": " + message);
  }
  bool ok() const { return diagnostics_.empty(); }
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

  const json* object(const json& parent, const std::string& key, const std::string& path,
                     bool required = true) {
    if (!parent.contains(key)) {
      if (required) error(path + "." + key, "missing required object");
      return nullptr;
    }
    const json& value = parent.at(key);
    if (!value.is_object()) {
      error(path + "." + key, "expected an object");
      return nullptr;
    }
    return &value;
  }

  std::optional<double> number(const json& parent, const std::string& key,
                               const std::string& path, std::optional<double> fallback = {}) {
    if (!parent.contains(key)) {
      if (!fallback) error(path + "." + key, "missing required number");
      return fallback;
    }
    return as_number(parent.at(key), path + "." + key);
  }

  std::optional<double> as_number(const json& value, const std::string& path) {
    if (!value.is_number()) {
      error(path, "expected a number");
      return std::nullopt;
    }
    const double v = value.get<double>();
    if (!std::isfinite(v)) {
      error(path, "must be finite");
      return std::nullopt;
    }
    return v;
  }

  bool boolean(const json& parent, const std::string& key, const std::string& path,
               bool fallback) {
    if (!parent.contains(key)) return fallback;
    if (!parent.at(key).is_boolean()) {
      error(path + "." + key, "expected true or false");
      return fallback;
    }
    return parent.at(key).get<bool>();
  }

  std::optional<Vector> vector(const json& value, const std::string& path,
                               std::optional<std::size_t> size = {}) {
    if (!value.is_array()) {
      error(path, "expected an array of numbers");
      return std::nullopt;
    }
    if (size && value.size() != *size) {
      error(path, "expected " + std::to_string(*size) + " entries, got " +
                      std::to_string(value.size()));
      return std::nullopt;
    }
    Vector out(static_cast<Eigen::Index>(value.size()));
    bool good = true;
    for (std::size_t i = 0; i < value.size(); ++i) {
      const auto v = as_number(value[i], path + "[" + std::to_string(i) + "]");
      if (v) {
        out(static_cast<Eigen::Index>(i)) = *v;
      } else {
        good = false;
      }
    }
    return good ? std::optional<Vector>(out) : std::nullopt;
  }

  // A number (exact coefficient) or a [lower, upper] pair.
  std::optional<IntervalCoefficient> interval(const json& value, const std::string& path) {
    if (value.is_number()) {
      const auto v = as_number(value, path);
      if (!v) return std::nullopt;
      return IntervalCoefficient::exact(*v);
    }
    if (value.is_array() && value.size() == 2) {
      const auto lo = as_number(value[0], path + "[0]");
      const auto hi = as_number(value[1], path + "[1]");
      if (!lo || !hi) return std::nullopt;
      if (*lo > *hi) {
        error(path, "lower endpoint exceeds upper endpoint");
        return std::nullopt;
      }
      return IntervalCoefficient(*lo, *hi);
    }
    error(path, "expected a number or a [lower, upper] pair");
    return std::nullopt;
  }

 private:
  std::vector<std::string> diagnostics_;
};

struct PlantParse {
  std::optional<UncertainPlant> plant;
  std::optional<PlantInstance> truth;
};

std::optional<CoefficientRef> parse_coefficient_name(const std::string& name, std::size_t n) {
  if (name.size() < 2 || (name[0] != 'a' && name[0] != 'b')) return std::nullopt;
  std::size_t index = 0;
  try {
    std::size_t consumed = 0;
    index = std::stoul(name.substr(1), &consumed);
    if (consumed != name.size() - 1) return std::nullopt;
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (index < 1 || index > n) return std::nullopt;
  return CoefficientRef{name[0] == 'a' ? CoefficientRef::Polynomial::kDenominator
                                       : CoefficientRef::Polynomial::kNumerator,
                        index - 1};
}

PlantParse parse_plant(Reader& r, const json& block) {
  PlantParse out;
  const std::string path = "plant";
  const std::string model = block.value("model", std::string("transfer_function"));
  if (model == "mass_spring_damper") {
    const auto mass = r.number(block, "mass", path);
    const auto damping = r.number(block, "damping", path);
    std::optional<IntervalCoefficient> stiffness;
    if (block.contains("stiffness")) {
      stiffness = r.interval(block.at("stiffness"), path + ".stiffness");
    } else {
      r.error(path + ".stiffness", "missing required interval");
    }
    const auto true_stiffness = r.number(block, "true_stiffness", path);
    if (mass && !(*mass > 0.0)) r.error(path + ".mass", "must be positive");
    if (!mass || !damping || !stiffness || !true_stiffness || !(*mass > 0.0)) return out;
    out.plant = mass_spring_damper(*mass, *damping, *stiffness);
    out.truth = mass_spring_damper_instance(*mass, *damping, *true_stiffness);
    return out;
  }
  if (model != "transfer_function") {
    r.error(path + ".model", "unknown model '" + model +
                                 "' (expected transfer_function or mass_spring_damper)");
    return out;
  }
  if (!block.contains("denominator") || !block.at("denominator").is_array() ||
      !block.contains("numerator") || !block.at("numerator").is_array()) {
    r.error(path, "transfer_function plants need denominator and numerator arrays");
    return out;
  }
  const json& den = block.at("denominator");
  const json& num = block.at("numerator");
  if (den.empty()) {
    r.error(path + ".denominator", "plant order must be at least 1");
    return out;
  }
  if (den.size() != num.size()) {
    r.error(path + ".numerator", "must have as many entries as the denominator");
    return out;
  }
  const std::size_t n = den.size();
  if (block.contains("order")) {
    const auto order = r.number(block, "order", path);
    if (order && *order != static_cast<double>(n)) {
      r.error(path + ".order", "does not match the number of coefficients");
    }
  }
  std::vector<IntervalCoefficient> a;
  std::vector<IntervalCoefficient> b;
  bool good = true;
  for (std::size_t i = 0; i < n; ++i) {
    auto ai = r.interval(den[i], path + ".denominator[" + std::to_string(i) + "]");
    auto bi = r.interval(num[i], path + ".numerator[" + std::to_string(i) + "]");
    if (ai && bi) {
      a.push_back(*ai);
      b.push_back(*bi);
    } else {
      good = false;
    }
  }
  std::vector<std::vector<CoefficientRef>> ties;
  if (block.contains("tie_groups")) {
    const json& groups = block.at("tie_groups");
    if (!groups.is_array()) {
      r.error(path + ".tie_groups", "expected an array of coefficient-name arrays");
      good = false;
    } else {
      for (std::size_t g = 0; g < groups.size(); ++g) {
        const std::string gpath = path + ".tie_groups[" + std::to_string(g) + "]";
        if (!groups[g].is_array() || groups[g].empty()) {
          r.error(gpath, "expected a non-empty array of names like \"a2\" or \"b1\"");
          good = false;
          continue;
        }
        std::vector<CoefficientRef> group;
        for (const auto& name : groups[g]) {
          const auto ref = name.is_string() ? parse_coefficient_name(name.get<std::string>(), n)
                                            : std::nullopt;
          if (!ref) {
            r.error(gpath, "invalid coefficient name " + name.dump());
            good = false;
          } else {
            group.push_back(*ref);
          }
        }
        ties.push_back(std::move(group));
      }
    }
  }
  if (!good) return out;
  try {
    out.plant.emplace(std::move(a), std::move(b), std::move(ties));
  } catch (const Error& e) {
    r.error(path, e.what());
    return out;
  }
  const json* truth = r.object(block, "true_instance", path);
  if (truth) {
    const auto ta = truth->contains("denominator")
                        ? r.vector(truth->at("denominator"), path + ".true_instance.denominator", n)
                        : std::nullopt;
    const auto tb = truth->contains("numerator")
                        ? r.vector(truth->at("numerator"), path + ".true_instance.numerator", n)
                        : std::nullopt;
    if (!ta || !tb) {
      r.error(path + ".true_instance", "needs denominator and numerator arrays of length n");
    } else {
      out.truth = PlantInstance{*ta, *tb};
    }
  }
  return out;
}

std::optional<ConstraintSet> parse_constraints(Reader& r, const json& block, std::size_t n) {
  const std::string path = "constraints";
  ConstraintSet out;
  bool good = true;
  if (block.contains("f")) {
    const json& rows = block.at("f");
    if (!rows.is_array()) {
      r.error(path + ".f", "expected an array of rows");
      good = false;
    } else {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        auto row = r.vector(rows[i], path + ".f[" + std::to_string(i) + "]", n);
        if (row) {
          out.f.push_back(row->transpose());
        } else {
          good = false;
        }
      }
    }
  }
  const auto u_max = r.number(block, "u_max", path);
  const auto gain = r.number(block, "gain", path);
  if (u_max && !(*u_max > 0.0)) {
    r.error(path + ".u_max", "must be positive");
    good = false;
  }
  if (!u_max || !gain || !good) return std::nullopt;
  out.u_max = *u_max;
  out.gain = *gain;
  return out;
}

std::optional<SynthesisConfig> parse_synthesis(Reader& r, const json& block, std::size_t n) {
  const std::string path = "synthesis";
  SynthesisConfig out;
  bool good = true;
  const auto alpha0 = r.number(block, "alpha0", path);
  if (alpha0 && !(*alpha0 > 0.0)) {
    r.error(path + ".alpha0", "must be positive");
    good = false;
  }
  if (!block.contains("directions") || !block.at("directions").is_array() ||
      block.at("directions").empty()) {
    r.error(path + ".directions", "expected a non-empty array of direction vectors");
    good = false;
  } else {
    const json& dirs = block.at("directions");
    for (std::size_t j = 0; j < dirs.size(); ++j) {
      const std::string dpath = path + ".directions[" + std::to_string(j) + "]";
      auto d = r.vector(dirs[j], dpath, n);
      if (!d) {
        good = false;
      } else if (d->cwiseAbs().maxCoeff() == 0.0) {
        r.error(dpath, "direction must be nonzero");
        good = false;
      } else {
        out.directions.push_back(*d);
      }
    }
  }
  const auto trust = r.number(block, "trust_radius", path, out.trust_radius);
  const auto bisect = r.number(block, "bisect_tol", path, out.bisect_tol);
  const auto feas = r.number(block, "feasibility_tol", path, out.feasibility_tol);
  const auto degeneracy = r.number(block, "degeneracy_tol", path, out.degeneracy_tol);
  if (block.contains("alpha_hi") && !block.at("alpha_hi").is_null()) {
    out.alpha_hi = r.number(block, "alpha_hi", path);
  }
  if (trust && !(*trust > 0.0)) r.error(path + ".trust_radius", "must be positive");
  if (bisect && !(*bisect > 0.0)) r.error(path + ".bisect_tol", "must be positive");
  if (feas && !(*feas > 0.0)) r.error(path + ".feasibility_tol", "must be positive");
  if (degeneracy && !(*degeneracy >= 0.0)) r.error(path + ".degeneracy_tol", "must be >= 0");
  if (!alpha0 || !trust || !bisect || !feas || !degeneracy || !good) return std::nullopt;
  out.alpha0 = *alpha0;
  out.trust_radius = *trust;
  out.bisect_tol = *bisect;
  out.feasibility_tol = *feas;
  out.degeneracy_tol = *degeneracy;
  if (out.alpha_hi && !(*out.alpha_hi > out.alpha0)) {
    r.error(path + ".alpha_hi", "must exceed alpha0");
    return std::nullopt;
  }
  return out;
}

std::optional<ScenarioConfig> parse_scenario(Reader& r, const std::string& name, const json& block,
                                             std::size_t n) {
  const std::string path = "scenarios." + name;
  if (!block.is_object()) {
    r.error(path, "expected an object");
    return std::nullopt;
  }
  ScenarioConfig out;
  out.name = name;
  bool good = true;
  if (!block.contains("x0")) {
    r.error(path + ".x0", "missing initial state");
    good = false;
  } else if (block.at("x0").is_array()) {
    auto x0 = r.vector(block.at("x0"), path + ".x0", n);
    if (x0) {
      out.x0.explicit_state = *x0;
    } else {
      good = false;
    }
  } else if (block.at("x0").is_object() && block.at("x0").contains("boundary_direction")) {
    const json& spec = block.at("x0");
    auto d = r.vector(spec.at("boundary_direction"), path + ".x0.boundary_direction", n);
    const auto scale = r.number(spec, "scale", path + ".x0", 1.0);
    if (!d || !scale) {
      good = false;
    } else if (d->cwiseAbs().maxCoeff() == 0.0) {
      r.error(path + ".x0.boundary_direction", "must be nonzero");
      good = false;
    } else {
      out.x0.boundary_direction = *d;
      out.x0.scale = *scale;
    }
  } else {
    r.error(path + ".x0", "expected a state array or {boundary_direction, scale}");
    good = false;
  }

  if (block.contains("nominal")) {
    const json& nominal = block.at("nominal");
    const std::string type = nominal.is_object() ? nominal.value("type", std::string()) : "";
    if (type == "zero") {
      out.nominal = ScenarioConfig::Nominal::kZero;
    } else if (type == "tracking") {
      out.nominal = ScenarioConfig::Nominal::kTracking;
      const auto amplitude = r.number(nominal, "amplitude", path + ".nominal");
      const auto frequency = r.number(nominal, "frequency_hz", path + ".nominal");
      const auto kp = r.number(nominal, "kp", path + ".nominal", out.kp);
      if (!amplitude || !frequency || !kp) {
        good = false;
      } else {
        out.reference = {*amplitude, *frequency};
        out.kp = *kp;
      }
    } else {
      r.error(path + ".nominal.type", "expected \"zero\" or \"tracking\"");
      good = false;
    }
  }
  const auto duration = r.number(block, "duration", path, out.duration);
  const auto dt = r.number(block, "dt", path, out.dt);
  if (duration && !(*duration >= 0.0)) {
    r.error(path + ".duration", "must be non-negative");
    good = false;
  }
  if (dt && !(*dt > 0.0)) {
    r.error(path + ".dt", "must be positive");
    good = false;
  }
  out.supervisor_enabled = r.boolean(block, "supervisor_enabled", path, out.supervisor_enabled);
  out.always_backup = r.boolean(block, "always_backup", path, out.always_backup);
  if (!duration || !dt || !good) return std::nullopt;
  out.duration = *duration;
  out.dt = *dt;
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : Error(join_lines(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

ProjectConfig parse_config(const json& document) {
  Reader r;
  if (!document.is_object()) throw ConfigError({"$: expected a JSON object"});

  const json* plant_block = r.object(document, "plant", "$");
  const json* constraints_block = r.object(document, "constraints", "$");
  const json* synthesis_block = r.object(document, "synthesis", "$");
  const json* estimator_block = r.object(document, "estimator", "$", false);
  const json* supervisor_block = r.object(document, "supervisor", "$", false);
  const json* scenarios_block = r.object(document, "scenarios", "$", false);

  PlantParse plant;
  if (plant_block) plant = parse_plant(r, *plant_block);
  const std::size_t n = plant.plant ? plant.plant->order() : 0;

  std::optional<ConstraintSet> constraints;
  std::optional<SynthesisConfig> synthesis;
  if (plant.plant && constraints_block) constraints = parse_constraints(r, *constraints_block, n);
  if (plant.plant && synthesis_block) synthesis = parse_synthesis(r, *synthesis_block, n);

  double eps0 = 1.0;
  if (estimator_block) {
    eps0 = r.number(*estimator_block, "eps0_norm", "estimator", 1.0).value_or(1.0);
    if (!(eps0 >= 0.0)) r.error("estimator.eps0_norm", "must be non-negative");
  }
  double lower = -0.02;
  double upper = -0.01;
  if (supervisor_block) {
    lower = r.number(*supervisor_block, "B_lower", "supervisor", lower).value_or(lower);
    upper = r.number(*supervisor_block, "B_upper", "supervisor", upper).value_or(upper);
  }
  if (!(-1.0 < lower && lower < upper && upper <= 0.0)) {
    r.error("supervisor", "thresholds must satisfy -1 < B_lower < B_upper <= 0");
  }

  std::map<std::string, ScenarioConfig> scenarios;
  if (scenarios_block && plant.plant) {
    for (const auto& [name, block] : scenarios_block->items()) {
      if (auto s = parse_scenario(r, name, block, n)) scenarios.emplace(name, std::move(*s));
    }
  }

  if (plant.plant && plant.truth && !plant.plant->contains(*plant.truth)) {
    r.error("plant", "true instance lies outside the coefficient intervals or breaks a tie group");
  }
  if (constraints && synthesis && constraints->gain == 0.0) {
    r.error("constraints.gain", "a nonzero backup gain is required");
  }
  if (!r.ok() || !plant.plant || !plant.truth || !constraints || !synthesis) {
    auto diagnostics = r.diagnostics();
    if (diagnostics.empty()) diagnostics.push_back("$: incomplete configuration");
    throw ConfigError(std::move(diagnostics));
  }

  json hashed = json::object();
  hashed["plant"] = *plant_block;
  hashed["constraints"] = *constraints_block;
  hashed["synthesis"] = *synthesis_block;

  return ProjectConfig{*plant.plant, *plant.truth, *constraints, *synthesis, eps0, lower, upper,
                       std::move(scenarios), fnv1a_hex(hashed.dump())};
}

ProjectConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path.string() + ": cannot open file"});
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({path.string() + ": " + e.what()});
  }
  return parse_config(document);
}

Scenario make_scenario(const ProjectConfig& config, const ScenarioConfig& sc,
                       const CompositeNorm& norm) {
  Scenario out;
  out.name = sc.name;
  out.truth = config.truth;
  out.x0 = sc.x0.explicit_state ? *sc.x0.explicit_state
                                : Vector(sc.x0.scale * boundary_point(norm, sc.x0.boundary_direction));
  if (sc.nominal == ScenarioConfig::Nominal::kTracking) {
    out.reference = sc.reference;
    out.nominal = tracking_input(
        sc.reference, default_tracker(config.plant.nominal(), config.constraints.u_max, sc.kp));
  } else {
    out.nominal = zero_input();
  }
  out.duration = sc.duration;
  out.dt = sc.dt;
  out.supervisor_enabled = sc.supervisor_enabled;
  out.always_backup = sc.always_backup;
  return out;
}

}  // namespace rbc::cli
