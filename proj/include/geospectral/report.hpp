#pragma once

// JSON documents written by the command-line tool (schema_version "1").

#include <string>

#include <json.hpp>

#include "geospectral/realdecomp.hpp"
#include "geospectral/verify.hpp"

namespace geospectral::report {

inline constexpr const char* kSchemaVersion = "1";

struct JsonOptions {
  /// Add a "<field>_hex" sibling holding "%a" hex floats next to every number.
  bool hex_floats = false;
};

nlohmann::json decomposition_to_json(const SpectralDecomposition<double>& dec,
                                     const std::string& input_digest, const JsonOptions& opts = {});

/// Inverse of decomposition_to_json. Hex fields win over decimal ones when
/// both are present. Throws InvalidInputError on schema violations,
/// including a term count that does not add up to the dimension.
SpectralDecomposition<double> decomposition_from_json(const nlohmann::json& doc);

nlohmann::json report_to_json(const verify::VerificationReport& report);

nlohmann::json spectrum_to_json(const verify::PlantedSpectrum& spec);
verify::PlantedSpectrum spectrum_from_json(const nlohmann::json& doc);

/// Row-major nested arrays.
nlohmann::json matrix_to_json(const MatrixXd& m);
MatrixXd matrix_from_json(const nlohmann::json& rows);

}  // namespace geospectral::report
