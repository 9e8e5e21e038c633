#include "geospectral/report.hpp"

#include <cmath>

#include "geospectral/io.hpp"

namespace geospectral::report {

using nlohmann::json;

namespace {

void put(json& obj, const std::string& key, double value, const JsonOptions& opts) {
  obj[key] = value;
  if (opts.hex_floats) obj[key + "_hex"] = io::hex_double(value);
}

void put(json& obj, const std::string& key, const VectorXd& v, const JsonOptions& opts) {
  json values = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) values.push_back(v[i]);
  obj[key] = std::move(values);
  if (opts.hex_floats) {
    json hex = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) hex.push_back(io::hex_double(v[i]));
    obj[key + "_hex"] = std::move(hex);
  }
}

const json& field(const json& obj, const std::string& key) {
  if (!obj.is_object() || !obj.contains(key)) throw InvalidInputError("missing field '" + key + "'");
  return obj.at(key);
}

double get_scalar(const json& obj, const std::string& key) {
  if (obj.contains(key + "_hex")) return io::parse_hex_double(obj.at(key + "_hex").get<std::string>());
  const json& v = field(obj, key);
  if (!v.is_number()) throw InvalidInputError("field '" + key + "' is not a number");
  return v.get<double>();
}

VectorXd get_vector(const json& obj, const std::string& key, Eigen::Index dim) {
  const bool hex = obj.contains(key + "_hex");
  const json& arr = hex ? obj.at(key + "_hex") : field(obj, key);
  if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != dim)
    throw InvalidInputError("field '" + key + "' must be an array of length " + std::to_string(dim));
  VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const json& e = arr[static_cast<std::size_t>(i)];
    v[i] = hex ? io::parse_hex_double(e.get<std::string>()) : e.get<double>();
  }
  return v;
}

}  // namespace

json decomposition_to_json(const SpectralDecomposition<double>& dec, const std::string& input_digest,
                           const JsonOptions& opts) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["dim"] = dec.dim;
  doc["input_digest"] = input_digest;

  json eigs = json::array();
  for (const auto& ev : dec.eigenvalues()) {
    json e;
    if (ev.is_real()) {
      e["kind"] = "real";
      put(e, "alpha", ev.alpha, opts);
    } else {
      e["kind"] = "complex_pair";
      put(e, "sigma", ev.sigma, opts);
      put(e, "omega", ev.omega, opts);
    }
    eigs.push_back(std::move(e));
  }
  doc["eigenvalues"] = std::move(eigs);

  json reals = json::array();
  for (const auto& t : dec.real_terms) {
    json e;
    put(e, "alpha", t.alpha, opts);
    put(e, "a", t.a, opts);
    put(e, "c", t.c, opts);
    reals.push_back(std::move(e));
  }
  doc["real_terms"] = std::move(reals);

  json planes = json::array();
  for (const auto& t : dec.plane_terms) {
    json e;
    put(e, "sigma", t.sigma, opts);
    put(e, "omega", t.omega, opts);
    put(e, "b", t.b, opts);
    put(e, "p", t.p, opts);
    put(e, "d", t.d, opts);
    put(e, "q", t.q, opts);
    put(e, "nu", t.nu, opts);
    e["biorthogonality"] = {t.biorthogonality.r1, t.biorthogonality.r2};
    planes.push_back(std::move(e));
  }
  doc["plane_terms"] = std::move(planes);

  const auto& d = dec.diagnostics;
  json diag;
  put(diag, "reconstruction_residual", d.reconstruction_residual, opts);
  put(diag, "max_eigen_residual", d.max_eigen_residual, opts);
  put(diag, "max_biorthogonality_residual", d.max_biorthogonality_residual, opts);
  put(diag, "reciprocal_condition", d.reciprocal_condition, opts);
  diag["sweeps"] = d.sweeps;
  doc["diagnostics"] = std::move(diag);
  return doc;
}

SpectralDecomposition<double> decomposition_from_json(const json& doc) {
  try {
    if (field(doc, "schema_version") != kSchemaVersion)
      throw InvalidInputError("unsupported schema_version");
    SpectralDecomposition<double> dec;
    dec.dim = field(doc, "dim").get<Eigen::Index>();
    if (dec.dim < 1) throw InvalidInputError("dim must be positive");

    for (const auto& e : field(doc, "real_terms"))
      dec.real_terms.push_back(RealTerm<double>::make(get_scalar(e, "alpha"), get_vector(e, "a", dec.dim),
                                                      get_vector(e, "c", dec.dim)));
    for (const auto& e : field(doc, "plane_terms")) {
      auto t = ComplexPlaneTerm<double>::make(get_scalar(e, "sigma"), get_scalar(e, "omega"),
                                              get_vector(e, "b", dec.dim), get_vector(e, "p", dec.dim),
                                              get_vector(e, "d", dec.dim), get_vector(e, "q", dec.dim));
      if (e.contains("nu") && std::abs(get_scalar(e, "nu") - t.nu) > 1e-12 * t.nu)
        throw InvalidInputError("stored nu disagrees with the term vectors");
      dec.plane_terms.push_back(std::move(t));
    }
    if (static_cast<Eigen::Index>(dec.real_terms.size() + 2 * dec.plane_terms.size()) != dec.dim)
      throw InvalidInputError("real terms + 2 * plane terms must equal dim");

    const auto& eigs = field(doc, "eigenvalues");
    if (eigs.size() != dec.real_terms.size() + dec.plane_terms.size())
      throw InvalidInputError("eigenvalue list does not match the terms");

    if (doc.contains("diagnostics")) {
      const auto& d = doc.at("diagnostics");
      auto& out = dec.diagnostics;
      out.reconstruction_residual = get_scalar(d, "reconstruction_residual");
      out.max_eigen_residual = get_scalar(d, "max_eigen_residual");
      out.max_biorthogonality_residual = get_scalar(d, "max_biorthogonality_residual");
      out.reciprocal_condition = get_scalar(d, "reciprocal_condition");
      out.sweeps = field(d, "sweeps").get<int>();
    }
    return dec;
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("malformed decomposition document: ") + e.what());
  } catch (const Error& e) {
    throw InvalidInputError(std::string("invalid decomposition document: ") + e.what());
  }
}

json report_to_json(const verify::VerificationReport& report) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["passed"] = report.passed;
  doc["elapsed_seconds"] = report.elapsed_seconds;
  json checks = json::array();
  for (const auto& c : report.checks) {
    json e;
    e["name"] = c.name;
    e["residual"] = std::isfinite(c.residual) ? json(c.residual) : json(nullptr);
    e["tolerance"] = c.tolerance;
    e["passed"] = c.passed;
    if (!c.detail.empty()) e["detail"] = c.detail;
    checks.push_back(std::move(e));
  }
  doc["checks"] = std::move(checks);
  return doc;
}

json spectrum_to_json(const verify::PlantedSpectrum& spec) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["dim"] = spec.dim();
  doc["real_eigs"] = spec.real_eigs;
  json pairs = json::array();
  for (auto [sigma, omega] : spec.complex_pairs) pairs.push_back({{"sigma", sigma}, {"omega", omega}});
  doc["complex_pairs"] = std::move(pairs);
  doc["basis_seed"] = spec.basis_seed;
  doc["condition_cap"] = spec.condition_cap;
  doc["identity_basis"] = spec.identity_basis;
  doc["min_separation"] = spec.min_separation();
  return doc;
}

verify::PlantedSpectrum spectrum_from_json(const json& doc) {
  try {
    verify::PlantedSpectrum spec;
    spec.real_eigs = field(doc, "real_eigs").get<std::vector<double>>();
    for (const auto& p : field(doc, "complex_pairs"))
      spec.complex_pairs.emplace_back(get_scalar(p, "sigma"), get_scalar(p, "omega"));
    spec.basis_seed = field(doc, "basis_seed").get<std::uint64_t>();
    spec.condition_cap = get_scalar(doc, "condition_cap");
    spec.identity_basis = doc.value("identity_basis", false);
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("malformed spectrum document: ") + e.what());
  }
}

json matrix_to_json(const MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXd matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw InvalidInputError("matrix must be a non-empty array of rows");
  const auto cols = rows.front().size();
  MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != cols) throw InvalidInputError("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
  }
  return m;
}

}  // namespace geospectral::report
