#include "geospectral/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "geospectral/io.hpp"
#include "geospectral/realdecomp.hpp"
#include "geospectral/report.hpp"
#include "geospectral/verify.hpp"

namespace geospectral::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct InputArgs {
  std::string path;
  std::string format = "auto";
};

MatrixXd load(const InputArgs& in) { return io::parse_matrix(in.path, io::parse_format(in.format)); }

void emit(const std::string& text, const std::string& output, std::ostream& out) {
  if (output.empty() || output == "-") {
    out << text;
    return;
  }
  std::ofstream file(output);
  if (!file) throw io::IoError("cannot write '" + output + "'");
  file << text;
}

void add_input(CLI::App* cmd, InputArgs& in) {
  cmd->add_option("input", in.path, "Matrix file (Matrix Market array or CSV)")->required();
  cmd->add_option("--format", in.format, "Input format: auto, mm or csv")
      ->check(CLI::IsMember({"auto", "mm", "mtx", "csv"}));
}

std::string fmt_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

int cmd_decompose(const InputArgs& in, double tol, const std::string& output, bool hex,
                  std::ostream& out) {
  const MatrixXd m = load(in);
  const auto dec = decompose(m, tol);
  report::JsonOptions opts;
  opts.hex_floats = hex;
  emit(report::decomposition_to_json(dec, io::matrix_digest(m), opts).dump(2) + "\n", output, out);
  return kOk;
}

int cmd_verify(const InputArgs& in, const std::string& profile_name, std::optional<double> tol,
               bool as_json, std::uint64_t seed, std::ostream& out) {
  auto profile = verify::ToleranceProfile::by_name(profile_name);
  if (tol) profile.decompose_tol = *tol;
  const MatrixXd m = load(in);
  const auto rep = verify::run_identity_suite(m, profile, seed);
  if (as_json) {
    out << report::report_to_json(rep).dump(2) << "\n";
  } else {
    char line[160];
    std::snprintf(line, sizeof line, "%-28s %12s %12s  %s\n", "check", "residual", "tolerance", "status");
    out << line;
    for (const auto& c : rep.checks) {
      std::snprintf(line, sizeof line, "%-28s %12s %12s  %s\n", c.name.c_str(), fmt_sci(c.residual).c_str(),
                    fmt_sci(c.tolerance).c_str(), c.passed ? "PASS" : "FAIL");
      out << line;
      if (!c.detail.empty()) out << "    " << c.detail << "\n";
    }
    out << (rep.passed ? "all checks passed" : "verification FAILED") << "\n";
  }
  return rep.passed ? kOk : kFailure;
}

int cmd_canonical(const InputArgs& in, double tol, const std::string& prefix, std::ostream& out) {
  const MatrixXd m = load(in);
  const auto dec = decompose(m, tol);
  const auto cf = real_canonical_form(dec);
  const double residual = (cf.similarity() - m).norm() / std::max(m.norm(), 1e-14);
  if (prefix.empty()) {
    nlohmann::json doc;
    doc["schema_version"] = report::kSchemaVersion;
    doc["B_real"] = report::matrix_to_json(cf.basis);
    doc["L_real"] = report::matrix_to_json(cf.blocks);
    doc["similarity_residual"] = residual;
    out << doc.dump(2) << "\n";
  } else {
    io::save_matrix(prefix + "_B.mtx", cf.basis, io::MatrixFormat::MatrixMarket);
    io::save_matrix(prefix + "_L.mtx", cf.blocks, io::MatrixFormat::MatrixMarket);
    out << "wrote " << prefix << "_B.mtx and " << prefix << "_L.mtx\n"
        << "similarity_residual " << io::format_double(residual) << "\n";
  }
  return kOk;
}

struct GenArgs {
  int size = 0;
  int real = 0;
  int pairs = 0;
  std::uint64_t seed = 1;
  double cond_cap = 1e4;
  double min_separation = 0.1;
  std::string output;
  std::string format = "auto";
};

int cmd_gen(const GenArgs& g, std::ostream& out) {
  if (g.size < 1 || g.real < 0 || g.pairs < 0 || g.real + 2 * g.pairs != g.size)
    throw UsageError("--real + 2 * --pairs must equal --size (" + std::to_string(g.real) + " + 2*" +
                     std::to_string(g.pairs) + " != " + std::to_string(g.size) + ")");
  const auto spec = verify::random_spectrum(g.real, g.pairs, g.seed, g.cond_cap, g.min_separation);
  const MatrixXd m = verify::gen_test_matrix(spec);
  io::save_matrix(g.output, m, io::parse_format(g.format));
  const std::string sidecar = g.output + ".spectrum.json";
  emit(report::spectrum_to_json(spec).dump(2) + "\n", sidecar, out);
  out << "wrote " << g.output << " and " << sidecar << "\n";
  return kOk;
}

}  // namespace

double resolve_tolerance(std::optional<double> flag, const char* env_value, double fallback) {
  if (flag) {
    if (!(*flag > 0)) throw InvalidInputError("--tol must be positive");
    return *flag;
  }
  if (env_value && *env_value) {
    char* end = nullptr;
    const double v = std::strtod(env_value, &end);
    if (end == env_value || *end != '\0' || !(v > 0))
      throw InvalidInputError(std::string(kToleranceEnv) + " is not a positive number: '" + env_value + "'");
    return v;
  }
  return fallback;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e)) return kUsage;
  if (dynamic_cast<const NotDiagonalizableError*>(&e) || dynamic_cast<const DegeneratePairError*>(&e))
    return kNotDiagonalizable;
  if (dynamic_cast<const ConvergenceError*>(&e) || dynamic_cast<const AccuracyError*>(&e))
    return kNoConvergence;
  return kFailure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Real spectral decomposition of diagonalizable matrices", "geospectral"};
  app.require_subcommand(1);

  InputArgs dec_in, ver_in, can_in;
  std::optional<double> dec_tol, ver_tol, can_tol;
  std::string dec_output, can_prefix, profile = "default";
  bool hex = false, ver_json = false;
  std::uint64_t ver_seed = 0x5eed;
  GenArgs gen;

  auto* dec_cmd = app.add_subcommand("decompose", "Write the real decomposition as JSON");
  add_input(dec_cmd, dec_in);
  dec_cmd->add_option("--tol", dec_tol, "Eigenvector residual tolerance (overrides GEOSPECTRAL_TOL)");
  dec_cmd->add_option("--output,-o", dec_output, "Output file (default: stdout)");
  dec_cmd->add_flag("--hex-floats", hex, "Add bit-exact hex-float fields");

  auto* ver_cmd = app.add_subcommand("verify", "Check every identity of the decomposition");
  add_input(ver_cmd, ver_in);
  ver_cmd->add_option("--tol-profile", profile, "Tolerance profile: default or loose")
      ->check(CLI::IsMember({"default", "loose"}));
  ver_cmd->add_option("--tol", ver_tol, "Eigenvector residual tolerance (overrides GEOSPECTRAL_TOL)");
  ver_cmd->add_option("--seed", ver_seed, "Seed for the randomized checks");
  ver_cmd->add_flag("--json", ver_json, "Print the report as JSON");

  auto* can_cmd = app.add_subcommand("canonical", "Write the block-diagonal real canonical form");
  add_input(can_cmd, can_in);
  can_cmd->add_option("--tol", can_tol, "Eigenvector residual tolerance (overrides GEOSPECTRAL_TOL)");
  can_cmd->add_option("--output,-o", can_prefix, "Write <prefix>_B.mtx and <prefix>_L.mtx instead of JSON");

  auto* gen_cmd = app.add_subcommand("gen", "Generate a matrix with a planted spectrum");
  gen_cmd->add_option("--size", gen.size, "Matrix dimension")->required();
  gen_cmd->add_option("--real", gen.real, "Number of real eigenvalues");
  gen_cmd->add_option("--pairs", gen.pairs, "Number of complex conjugate pairs");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--cond-cap", gen.cond_cap, "Largest accepted basis condition number");
  gen_cmd->add_option("--min-separation", gen.min_separation, "Smallest eigenvalue spacing");
  gen_cmd->add_option("--output,-o", gen.output, "Matrix file to write")->required();
  gen_cmd->add_option("--format", gen.format, "Output format: auto, mm or csv")
      ->check(CLI::IsMember({"auto", "mm", "mtx", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    const char* env = std::getenv(kToleranceEnv);
    if (*dec_cmd) {
      return cmd_decompose(dec_in, resolve_tolerance(dec_tol, env), dec_output, hex, out);
    }
    if (*ver_cmd) {
      std::optional<double> tol;
      if (ver_tol || (env && *env)) tol = resolve_tolerance(ver_tol, env);
      return cmd_verify(ver_in, profile, tol, ver_json, ver_seed, out);
    }
    if (*can_cmd) return cmd_canonical(can_in, resolve_tolerance(can_tol, env), can_prefix, out);
    if (*gen_cmd) return cmd_gen(gen, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kUsage;
}

}  // namespace geospectral::cli
