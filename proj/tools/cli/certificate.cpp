#include "cli/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <Eigen/Eigenvalues>

namespace rbc::cli {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

class Parser {
 public:
  explicit Parser(const json& doc) : doc_(doc) {}

  void error(const std::string& path, const std::string& message) {
    diagnostics_.push_back(path + ": " + message);
  }
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

  const json* field(const std::string& key) {
    if (!doc_.contains(key)) {
      error(key, "missing");
      return nullptr;
    }
    return &doc_.at(key);
  }

  double number(const json& value, const std::string& path) {
    if (!value.is_number()) {
      error(path, "expected a number");
      return 0.0;
    }
    return value.get<double>();
  }

  Vector vector(const json& value, const std::string& path, std::size_t n) {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
    if (!value.is_array() || value.size() != n) {
      error(path, "expected " + std::to_string(n) + " numbers");
      return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
      out(static_cast<Eigen::Index>(i)) = number(value[i], path + "[" + std::to_string(i) + "]");
    }
    return out;
  }

  Matrix matrix(const json& value, const std::string& path, std::size_t n) {
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    if (!value.is_array() || value.size() != n) {
      error(path, "expected " + std::to_string(n) + " rows");
      return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
      out.row(static_cast<Eigen::Index>(i)) =
          vector(value[i], path + "[" + std::to_string(i) + "]", n).transpose();
    }
    return out;
  }

 private:
  const json& doc_;
  std::vector<std::string> diagnostics_;
};

double max_eigenvalue(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (symmetric + symmetric.transpose()),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

double min_eigenvalue(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (symmetric + symmetric.transpose()),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

BarrierCertificate CertificateFile::barrier(const ConstraintSet& constraints) const {
  return {q_list, gain, alpha0, constraints, directions, rho};
}

json to_json(const CertificateFile& c) {
  json doc = json::object();
  doc["n"] = c.n;
  json q_list = json::array();
  for (const auto& q : c.q_list) q_list.push_back(matrix_to_json(q));
  doc["Q_list"] = std::move(q_list);
  json directions = json::array();
  for (const auto& d : c.directions) directions.push_back(vector_to_json(d));
  doc["directions"] = std::move(directions);
  doc["rho"] = c.rho;
  doc["alpha0"] = c.alpha0;
  doc["gain"] = c.gain;
  doc["a_hat"] = vector_to_json(c.a_hat);
  doc["alpha"] = c.alpha;
  doc["residuals"] = c.residuals;
  doc["config_hash"] = c.config_hash;
  doc["version"] = c.version;
  return doc;
}

CertificateFile certificate_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError({"certificate: expected a JSON object"});
  Parser p(doc);
  CertificateFile c;
  if (const json* n = p.field("n")) {
    if (n->is_number_unsigned() && n->get<std::size_t>() > 0) {
      c.n = n->get<std::size_t>();
    } else {
      p.error("n", "expected a positive integer");
    }
  }
  if (c.n == 0) throw ConfigError(p.diagnostics());

  if (const json* q = p.field("Q_list")) {
    if (!q->is_array() || q->empty()) {
      p.error("Q_list", "expected a non-empty array of matrices");
    } else {
      for (std::size_t j = 0; j < q->size(); ++j) {
        c.q_list.push_back(p.matrix((*q)[j], "Q_list[" + std::to_string(j) + "]", c.n));
      }
    }
  }
  if (const json* d = p.field("directions")) {
    if (!d->is_array() || d->size() != c.q_list.size()) {
      p.error("directions", "expected one direction per matrix");
    } else {
      for (std::size_t j = 0; j < d->size(); ++j) {
        c.directions.push_back(p.vector((*d)[j], "directions[" + std::to_string(j) + "]", c.n));
      }
    }
  }
  if (const json* rho = p.field("rho")) {
    if (!rho->is_array() || rho->size() != c.q_list.size()) {
      p.error("rho", "expected one value per matrix");
    } else {
      for (std::size_t j = 0; j < rho->size(); ++j) {
        c.rho.push_back(p.number((*rho)[j], "rho[" + std::to_string(j) + "]"));
      }
    }
  }
  if (const json* v = p.field("alpha0")) c.alpha0 = p.number(*v, "alpha0");
  if (const json* v = p.field("gain")) c.gain = p.number(*v, "gain");
  if (const json* v = p.field("a_hat")) c.a_hat = p.vector(*v, "a_hat", c.n);
  if (const json* v = p.field("alpha")) c.alpha = p.number(*v, "alpha");
  if (const json* v = p.field("residuals")) {
    if (!v->is_object()) {
      p.error("residuals", "expected an object of numbers");
    } else {
      for (const auto& [name, value] : v->items()) {
        c.residuals[name] = p.number(value, "residuals." + name);
      }
    }
  }
  if (const json* v = p.field("config_hash")) {
    if (v->is_string()) {
      c.config_hash = v->get<std::string>();
    } else {
      p.error("config_hash", "expected a string");
    }
  }
  if (const json* v = p.field("version")) {
    if (v->is_string()) {
      c.version = v->get<std::string>();
    } else {
      p.error("version", "expected a string");
    }
  }
  if (!p.diagnostics().empty()) throw ConfigError(p.diagnostics());
  return c;
}

void save_certificate(const CertificateFile& certificate, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json(certificate).dump(2) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

CertificateFile load_certificate(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path.string() + ": cannot open file"});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({path.string() + ": " + e.what()});
  }
  return certificate_from_json(doc);
}

std::vector<CheckResult> check_certificate(const CertificateFile& c, const ProjectConfig& config,
                                           double tolerance) {
  std::vector<CheckResult> out;
  const auto numeric = [&](std::string name, double residual, std::string detail = {}) {
    out.push_back({std::move(name), residual, residual <= tolerance, std::move(detail), true});
  };
  const auto consistency = [&](std::string name, bool ok, std::string detail) {
    out.push_back({std::move(name), ok ? 0.0 : 1.0, ok, std::move(detail), false});
  };

  const std::size_t n = config.plant.order();
  consistency("config_hash", c.config_hash == config.hash,
              "certificate " + c.config_hash + ", config " + config.hash);
  consistency("order", c.n == n, "certificate n=" + std::to_string(c.n));
  consistency("gain", c.gain == config.constraints.gain, "backup gain matches the configuration");
  consistency("alpha0", c.alpha0 == config.synthesis.alpha0, "decay rate matches the configuration");
  bool directions_match = c.directions.size() == config.synthesis.directions.size();
  for (std::size_t j = 0; directions_match && j < c.directions.size(); ++j) {
    directions_match = c.directions[j] == config.synthesis.directions[j];
  }
  consistency("directions", directions_match, "width directions match the configuration");
  if (c.n != n) return out;

  const auto& cs = config.constraints;
  const RowVector c0 = output_row(n);
  const double input_bound = cs.output_bound_squared();
  const std::vector<Matrix> vertices =
      pldi_vertices(config.plant, c.gain, config.synthesis.degeneracy_tol);
  const Matrix a0 = observable_canonical(c.a_hat, Vector::Zero(static_cast<Eigen::Index>(n))).A;

  for (std::size_t j = 0; j < c.q_list.size(); ++j) {
    const Matrix& q = c.q_list[j];
    const std::string tag = "Q" + std::to_string(j + 1);
    const double asym = (q - q.transpose()).cwiseAbs().maxCoeff();
    numeric(tag + ".symmetry", asym);
    const double lambda_min = min_eigenvalue(q);
    out.push_back({tag + ".positive_definite", -lambda_min, lambda_min > 0.0,
                   "smallest eigenvalue must be positive", true});

    double state = -std::numeric_limits<double>::infinity();
    for (const auto& f : cs.f) state = std::max(state, (f * q * f.transpose())(0, 0) - 1.0);
    if (!cs.f.empty()) numeric(tag + ".state_constraint", state, "f Q f^T <= 1");
    if (std::isfinite(input_bound)) {
      numeric(tag + ".input_constraint", (c0 * q * c0.transpose())(0, 0) - input_bound,
              "c0 Q c0^T <= u_max^2 / gain^2");
    }
    if (lambda_min > 0.0 && j < c.directions.size() && j < c.rho.size()) {
      const Vector& d = c.directions[j];
      numeric(tag + ".width", d.dot(q.ldlt().solve(d)) - c.rho[j], "d^T Q^-1 d <= rho");
    }
    double decay = -std::numeric_limits<double>::infinity();
    for (const auto& a : vertices) decay = std::max(decay, max_eigenvalue(a * q + q * a.transpose() + 2.0 * c.alpha0 * q));
    numeric(tag + ".vertex_decay", decay, "A_ci Q + Q A_ci^T + 2 alpha0 Q <= 0 at all vertices");
    numeric(tag + ".estimator_decay",
            max_eigenvalue(a0 * q + q * a0.transpose() + 2.0 * c.alpha * q),
            "A0 Q + Q A0^T + 2 alpha Q <= 0");
  }
  const double abscissa = spectral_abscissa(a0);
  out.push_back({"A0.hurwitz", abscissa, abscissa < 0.0, "spectral abscissa must be negative", true});
  numeric("A0.trust_region", c.a_hat.cwiseAbs().maxCoeff() - config.synthesis.trust_radius,
          "|a_hat_i| <= trust radius");
  out.push_back({"alpha.positive", -c.alpha, c.alpha > 0.0, "estimator rate must be positive", true});
  return out;
}

std::map<std::string, double> residual_map(const std::vector<CheckResult>& checks) {
  std::map<std::string, double> out;
  for (const auto& check : checks) {
    if (check.numeric) out[check.name] = check.residual;
  }
  return out;
}

}  // namespace rbc::cli
