#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "geospectral/cli.hpp"
#include "geospectral/io.hpp"
#include "geospectral/report.hpp"
#include "oracles.hpp"

using namespace geospectral;
using oracle::mat;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "geospectral");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "geospectral_cli_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string write_csv(const std::string& name, const std::string& body) {
  const auto path = scratch(name);
  std::ofstream(path) << body;
  return path;
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("decompose subcommand") {
  auto r = run_cli({"decompose", write_csv("diag.csv", "1,0\n0,2\n")});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["dim"] == 2);
  CHECK(doc["real_terms"].size() == 2);
  CHECK(doc["plane_terms"].empty());

  r = run_cli({"decompose", write_csv("jordan.csv", "1,1\n0,1\n")});
  CHECK(r.code == 2);
  CHECK(r.err.find("not diagonalizable") != std::string::npos);

  r = run_cli({"decompose", write_csv("rot.csv", "1,2\n-2,1\n"), "--hex-floats"});
  CHECK(r.code == 0);
  CHECK(r.out.find("sigma_hex") != std::string::npos);

  CHECK(run_cli({"decompose", scratch("absent.csv")}).code == 1);
  CHECK(run_cli({"decompose", write_csv("wide.csv", "1,2,3\n4,5,6\n")}).code == 1);
  CHECK(run_cli({"decompose", write_csv("ragged.csv", "1,2\n3\n")}).code == 1);
  CHECK(run_cli({"decompose"}).code == 64);
  CHECK(run_cli({"frobnicate"}).code == 64);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("gen then decompose recovers the planted spectrum") {
  const auto path = scratch("planted.mtx");
  auto r = run_cli({"gen", "--size", "6", "--real", "2", "--pairs", "2", "--seed", "7", "-o", path});
  REQUIRE(r.code == 0);
  std::ifstream sidecar(path + ".spectrum.json");
  const auto spec = report::spectrum_from_json(nlohmann::json::parse(sidecar));

  r = run_cli({"decompose", path});
  REQUIRE(r.code == 0);
  const auto dec = report::decomposition_from_json(nlohmann::json::parse(r.out));
  auto planted_real = spec.real_eigs;
  std::sort(planted_real.begin(), planted_real.end());
  REQUIRE(dec.real_terms.size() == planted_real.size());
  for (std::size_t i = 0; i < planted_real.size(); ++i)
    CHECK(std::abs(dec.real_terms[i].alpha - planted_real[i]) <= 1e-8);
  auto planted_pairs = spec.complex_pairs;
  std::sort(planted_pairs.begin(), planted_pairs.end());
  REQUIRE(dec.plane_terms.size() == planted_pairs.size());
  for (std::size_t i = 0; i < planted_pairs.size(); ++i) {
    CHECK(std::abs(dec.plane_terms[i].sigma - planted_pairs[i].first) <= 1e-8);
    CHECK(std::abs(dec.plane_terms[i].omega - planted_pairs[i].second) <= 1e-8);
  }
}

TEST_CASE("gen argument checks") {
  CHECK(run_cli({"gen", "--size", "5", "--real", "2", "--pairs", "2", "-o", scratch("bad.mtx")}).code == 64);
  CHECK(run_cli({"gen", "--size", "4", "--real", "4", "--cond-cap", "1", "-o", scratch("cap.mtx")}).code == 1);
  const auto csv = scratch("gen.csv");
  CHECK(run_cli({"gen", "--size", "3", "--real", "1", "--pairs", "1", "-o", csv}).code == 0);
  CHECK(io::parse_matrix(csv).rows() == 3);
}

TEST_CASE("verify subcommand") {
  auto r = run_cli({"verify", write_csv("eye.csv", "1,0,0,0\n0,1,0,0\n0,0,1,0\n0,0,0,1\n")});
  CHECK(r.code == 0);
  CHECK(r.out.find("all checks passed") != std::string::npos);

  r = run_cli({"verify", write_csv("rot.csv", "1,2\n-2,1\n"), "--json"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["passed"] == true);

  r = run_cli({"verify", write_csv("jordan.csv", "1,1\n0,1\n")});
  CHECK(r.code == 1);
  CHECK(r.out.find("verification FAILED") != std::string::npos);

  CHECK(run_cli({"verify", write_csv("rot.csv", "1,2\n-2,1\n"), "--tol-profile", "loose"}).code == 0);
  CHECK(run_cli({"verify", write_csv("rot.csv", "1,2\n-2,1\n"), "--tol-profile", "wild"}).code == 64);
}

TEST_CASE("canonical subcommand") {
  auto r = run_cli({"canonical", write_csv("rot.csv", "1,2\n-2,1\n")});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  const MatrixXd b = report::matrix_from_json(doc["B_real"]);
  const MatrixXd l = report::matrix_from_json(doc["L_real"]);
  CHECK((b - MatrixXd::Identity(2, 2)).norm() <= 1e-15);
  CHECK((l - mat({{1, 2}, {-2, 1}})).norm() <= 1e-14);

  const auto prefix = scratch("canon");
  r = run_cli({"canonical", write_csv("d3.csv", "5,0,0\n0,-2,0\n0,0,1\n"), "-o", prefix});
  REQUIRE(r.code == 0);
  const MatrixXd l3 = io::parse_matrix(prefix + "_L.mtx");
  CHECK((l3 - mat({{-2, 0, 0}, {0, 1, 0}, {0, 0, 5}})).norm() <= 1e-14);
  CHECK(io::parse_matrix(prefix + "_B.mtx").rows() == 3);

  CHECK(run_cli({"canonical", write_csv("jordan.csv", "1,1\n0,1\n")}).code == 2);
}

TEST_CASE("tolerance precedence") {
  CHECK(cli::resolve_tolerance(1e-6, "1e-3") == 1e-6);
  CHECK(cli::resolve_tolerance(std::nullopt, "1e-3") == 1e-3);
  CHECK(cli::resolve_tolerance(std::nullopt, nullptr) == 1e-9);
  CHECK(cli::resolve_tolerance(std::nullopt, "") == 1e-9);
  CHECK_THROWS_AS(cli::resolve_tolerance(std::nullopt, "abc"), InvalidInputError);
  CHECK_THROWS_AS(cli::resolve_tolerance(-1.0, nullptr), InvalidInputError);
}

TEST_CASE("exit codes from the installed binary") {
  const std::string bin = GEOSPECTRAL_BIN;
  const auto rot = write_csv("rot.csv", "1,2\n-2,1\n");
  const std::string quiet = " >/dev/null 2>&1";
  CHECK(shell(bin + " decompose " + rot + quiet) == 0);
  CHECK(shell(bin + " decompose " + write_csv("jordan.csv", "1,1\n0,1\n") + quiet) == 2);
  CHECK(shell(bin + " decompose " + scratch("absent.csv") + quiet) == 1);
  CHECK(shell(bin + " nonsense" + quiet) == 64);
  CHECK(shell("GEOSPECTRAL_TOL=bogus " + bin + " decompose " + rot + quiet) == 1);
}
