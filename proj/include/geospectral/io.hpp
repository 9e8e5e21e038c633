#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "geospectral/dense.hpp"
#include "geospectral/errors.hpp"

namespace geospectral::io {

enum class MatrixFormat { Auto, MatrixMarket, Csv };

/// "mm"/"mtx"/"matrix-market", "csv" or "auto".
MatrixFormat parse_format(const std::string& name);

/// Picks a format from the file extension, falling back to sniffing the
/// "%%MatrixMarket" banner.
MatrixFormat detect_format(const std::string& path);

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Matrix Market "array real general" (column-major body). Integer fields are
/// read as real.
MatrixXd read_matrix_market(std::istream& in);
/// One row per line, comma separated, no header.
MatrixXd read_csv(std::istream& in);

void write_matrix_market(std::ostream& out, const MatrixXd& m);
void write_csv(std::ostream& out, const MatrixXd& m);

/// Reads a square matrix from disk.
MatrixXd parse_matrix(const std::string& path, MatrixFormat format = MatrixFormat::Auto);
void save_matrix(const std::string& path, const MatrixXd& m, MatrixFormat format = MatrixFormat::Auto);

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);
/// C99 hex-float ("%a") and its inverse.
std::string hex_double(double x);
double parse_hex_double(const std::string& s);

/// "fnv1a64:<16 hex digits>" over the dimensions and IEEE bits of the entries.
std::string matrix_digest(const MatrixXd& m);

}  // namespace geospectral::io
