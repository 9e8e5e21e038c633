#include "geospectral/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

namespace geospectral::io {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Hand-authored files sometimes carry U+2212 instead of '-'.
std::string normalize_minus(std::string line) {
  static constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";
  for (auto pos = line.find(kUnicodeMinus); pos != std::string::npos; pos = line.find(kUnicodeMinus))
    line.replace(pos, kUnicodeMinus.size(), "-");
  return line;
}

double parse_number(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) throw ParseError(line, "empty numeric field");
  double value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec == std::errc::result_out_of_range) throw ParseError(line, "value out of range '" + std::string(token) + "'");
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(line, "invalid number '" + std::string(token) + "'");
  if (!std::isfinite(value)) throw ParseError(line, "non-finite value '" + std::string(token) + "'");
  return value;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

MatrixFormat parse_format(const std::string& name) {
  const auto n = lower(name);
  if (n == "auto") return MatrixFormat::Auto;
  if (n == "mm" || n == "mtx" || n == "matrix-market" || n == "matrixmarket") return MatrixFormat::MatrixMarket;
  if (n == "csv") return MatrixFormat::Csv;
  throw InvalidInputError("unknown matrix format '" + name + "'");
}

MatrixFormat detect_format(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot != std::string::npos) {
    const auto ext = lower(path.substr(dot + 1));
    if (ext == "mtx" || ext == "mm") return MatrixFormat::MatrixMarket;
    if (ext == "csv") return MatrixFormat::Csv;
  }
  std::ifstream in(path);
  std::string first;
  if (in && std::getline(in, first) && first.rfind("%%MatrixMarket", 0) == 0)
    return MatrixFormat::MatrixMarket;
  return MatrixFormat::Csv;
}

MatrixXd read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing Matrix Market banner");
  ++line_no;
  const auto banner = split_ws(lower(line));
  if (banner.size() != 5 || banner[0] != "%%matrixmarket")
    throw ParseError(line_no, "malformed Matrix Market banner");
  if (banner[1] != "matrix" || banner[2] != "array")
    throw ParseError(line_no, "only dense 'matrix array' files are supported");
  if (banner[3] != "real" && banner[3] != "double" && banner[3] != "integer")
    throw ParseError(line_no, "unsupported field '" + banner[3] + "'");
  if (banner[4] != "general") throw ParseError(line_no, "unsupported symmetry '" + banner[4] + "'");

  Eigen::Index rows = -1, cols = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '%') continue;
    const auto toks = split_ws(line);
    if (toks.size() != 2) throw ParseError(line_no, "expected 'rows cols' size line");
    const double r = parse_number(toks[0], line_no), c = parse_number(toks[1], line_no);
    if (r < 1 || c < 1 || r != std::floor(r) || c != std::floor(c))
      throw ParseError(line_no, "matrix dimensions must be positive integers");
    rows = static_cast<Eigen::Index>(r);
    cols = static_cast<Eigen::Index>(c);
    break;
  }
  if (rows < 0) throw ParseError(line_no, "missing size line");

  MatrixXd m(rows, cols);
  const Eigen::Index total = rows * cols;
  Eigen::Index filled = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '%') continue;
    for (const auto& tok : split_ws(line)) {
      if (filled == total) throw ParseError(line_no, "more entries than rows*cols");
      m(filled % rows, filled / rows) = parse_number(tok, line_no);
      ++filled;
    }
  }
  if (filled != total)
    throw ParseError(line_no, "expected " + std::to_string(total) + " entries, found " + std::to_string(filled));
  return m;
}

MatrixXd read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = normalize_minus(line);
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_number(rest.substr(0, comma), line_no));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(line_no, "ragged row: expected " + std::to_string(rows.front().size()) +
                                    " fields, found " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(line_no == 0 ? 1 : line_no, "no matrix rows");
  MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

void write_matrix_market(std::ostream& out, const MatrixXd& m) {
  out << "%%MatrixMarket matrix array real general\n" << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) out << format_double(m(i, j)) << '\n';
}

void write_csv(std::ostream& out, const MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

MatrixXd parse_matrix(const std::string& path, MatrixFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  if (format == MatrixFormat::Auto) format = detect_format(path);
  MatrixXd m = format == MatrixFormat::MatrixMarket ? read_matrix_market(in) : read_csv(in);
  if (m.rows() != m.cols())
    throw ShapeError("matrix in '" + path + "' is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", expected square");
  return m;
}

void save_matrix(const std::string& path, const MatrixXd& m, MatrixFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  if (format == MatrixFormat::Auto) {
    const auto dot = path.find_last_of('.');
    format = (dot != std::string::npos && lower(path.substr(dot + 1)) == "csv") ? MatrixFormat::Csv
                                                                                : MatrixFormat::MatrixMarket;
  }
  if (format == MatrixFormat::Csv)
    write_csv(out, m);
  else
    write_matrix_market(out, m);
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

std::string hex_double(double x) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%a", x);
  return buf.data();
}

double parse_hex_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw InvalidInputError("invalid hex float '" + s + "'");
  return v;
}

std::string matrix_digest(const MatrixXd& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(m.rows()));
  mix(static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::uint64_t bits;
      const double v = m(i, j);
      std::memcpy(&bits, &v, sizeof bits);
      mix(bits);
    }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace geospectral::io
