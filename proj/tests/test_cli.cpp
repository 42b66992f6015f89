// End-to-end checks of the command-line tool. The binary under test comes in
// through the BIEVOLVE_CLI environment variable (set by ctest).

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bievolve/io.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* cli_path() {
  const char* p = std::getenv("BIEVOLVE_CLI");
  REQUIRE_MESSAGE(p != nullptr, "BIEVOLVE_CLI must point at the binary under test");
  return p;
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("bievolve_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const fs::path out = scratch_dir() / "stdout.txt";
  const fs::path err = scratch_dir() / "stderr.txt";
  const std::string cmd = env_prefix + "\"" + std::string(cli_path()) + "\" " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> ls;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) ls.push_back(line);
  return ls;
}

double field(const std::string& csv_line, int idx) {
  std::istringstream in(csv_line);
  std::string cell;
  for (int i = 0; i <= idx; ++i) std::getline(in, cell, ',');
  return std::strtod(cell.c_str(), nullptr);
}

void write_fixture(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

fs::path sigma_x_file() {
  const fs::path p = scratch_dir() / "sx.json";
  write_fixture(p, R"({"dim": 2, "entries": [[0,0],[1,0],[1,0],[0,0]]})");
  return p;
}

fs::path sigma_y_file() {
  const fs::path p = scratch_dir() / "sy.json";
  write_fixture(p, R"({"dim": 2, "entries": [[0,0],[0,-1],[0,1],[0,0]]})");
  return p;
}

fs::path e0_file() {
  const fs::path p = scratch_dir() / "e0.json";
  write_fixture(p, R"({"dim": 2, "amplitudes": [[1,0],[0,0]]})");
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exit codes") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("").exit_code == 2);                 // a subcommand is required
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("interference --m 4 --n 4").exit_code == 2);  // no grid given
  CHECK(run_cli("interference --m 4 --n 4 --x-min 0 --x-max 1 --steps 1").exit_code == 2);
  CHECK(run_cli("verify --suite nonsense").exit_code == 2);
  CHECK(run_cli("regime --f 0 --N 1e27 --n 1").exit_code == 1);     // domain error from the library
  const RunResult missing = run_cli("pathsum --hf-file /nonexistent.json --hb-file " +
                                    sigma_y_file().string() + " --psi0-file " +
                                    e0_file().string() + " --N 2 --tau 0.1");
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("error:") != std::string::npos);
}

TEST_CASE("interference grid") {
  const fs::path csv = scratch_dir() / "two.csv";
  const RunResult two = run_cli(
      "interference --m 3 --n 2 --x-min -0.25 --x-max 0.25 --steps 2 -o " + csv.string());
  REQUIRE(two.exit_code == 0);
  const auto rows = lines_of(slurp(csv));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "x,re,im,log_abs,norm_abs,quad_approx");
  CHECK(field(rows[1], 0) == -0.25);
  CHECK(field(rows[2], 0) == 0.25);  // endpoint exact, not accumulated
  // I(-x) = conj(I(x)): equal moduli at the two ends
  CHECK(field(rows[1], 4) == field(rows[2], 4));

  // eigenvalue-unit flags map to x = tau^2 * lambda
  const RunResult lam = run_cli(
      "interference --m 3 --n 2 --lambda-min -4 --lambda-max 4 --tau 0.1 --steps 2 -o " +
      csv.string());
  REQUIRE(lam.exit_code == 0);
  const auto lrows = lines_of(slurp(csv));
  CHECK(field(lrows[1], 0) == doctest::Approx(-0.04).epsilon(1e-14));
  CHECK(field(lrows[2], 0) == doctest::Approx(0.04).epsilon(1e-14));
}

TEST_CASE("normalized profile output is thread-count independent") {
  const fs::path a = scratch_dir() / "t1.csv";
  const fs::path b = scratch_dir() / "t5.csv";
  const std::string args =
      "interference --m 40 --n 30 --x-min -0.05 --x-max 0.05 --steps 201 --normalize -o ";
  REQUIRE(run_cli(args + a.string(), "BIEVOLVE_THREADS=1 ").exit_code == 0);
  REQUIRE(run_cli(args + b.string(), "BIEVOLVE_THREADS=5 ").exit_code == 0);
  const std::string ca = slurp(a), cb = slurp(b);
  CHECK(ca == cb);  // byte identical
  REQUIRE(!ca.empty());

  // the peak row sits at x = 0 with norm_abs = 1
  double best = 0.0;
  for (size_t i = 1; i < lines_of(ca).size(); ++i) best = std::max(best, field(lines_of(ca)[i], 4));
  CHECK(best == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("density overlay column") {
  const fs::path csv = scratch_dir() / "dens.csv";
  const RunResult r = run_cli(
      "interference --m 200 --n 200 --x-min -0.01 --x-max 0.01 --steps 41 "
      "--with-density --lambda-sd-x 2e-3 -o " + csv.string());
  REQUIRE(r.exit_code == 0);
  const auto rows = lines_of(slurp(csv));
  REQUIRE(rows.size() == 42);
  CHECK(rows[0] == "x,re,im,log_abs,norm_abs,quad_approx,density");
  // density is scaled to peak at 1/2 on the grid centre
  CHECK(field(rows[21], 6) == doctest::Approx(0.5).epsilon(1e-12));
  // missing spread parameter is a usage error
  CHECK(run_cli("interference --m 2 --n 2 --x-min -1 --x-max 1 --with-density").exit_code == 2);
}

TEST_CASE("pathsum emits per-path norms, state, and the condition check") {
  const fs::path csv = scratch_dir() / "paths.csv";
  const fs::path state = scratch_dir() / "state.json";
  const RunResult r = run_cli("pathsum --hf-file " + sigma_x_file().string() + " --hb-file " +
                              sigma_y_file().string() + " --psi0-file " + e0_file().string() +
                              " --N 4 --tau 0.5 --output-csv " + csv.string() +
                              " --output-state " + state.string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.err.find("nonzero_condition") != std::string::npos);
  CHECK(r.err.find("holds") != std::string::npos);

  const auto rows = lines_of(slurp(csv));
  REQUIRE(rows.size() == 6);  // header + n = 0..4
  CHECK(rows[0] == "n,norm,log_norm,binomial_log");
  // both end paths are single-direction unitaries
  CHECK(field(rows[1], 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(field(rows[5], 1) == doctest::Approx(1.0).epsilon(1e-12));

  // the emitted state parses back as a dim-2 vector
  const auto psi = bievolve::io::vector_from_json(slurp(state));
  CHECK(psi.dim() == 2);

  // N above the per-path cap is rejected at parse time
  CHECK(run_cli("pathsum --hf-file " + sigma_x_file().string() + " --hb-file " +
                sigma_y_file().string() + " --psi0-file " + e0_file().string() +
                " --N 65 --tau 0.5").exit_code == 2);
}

TEST_CASE("kaon report") {
  const RunResult r = run_cli("kaon");
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("paper_order_of_magnitude").get<double>() == 1e17);
  const double lambda1 = doc.at("lambda1").get<double>();
  CHECK(lambda1 > 1.5e17);
  CHECK(lambda1 < 2.5e17);
  CHECK(doc.at("eigenvalues").size() == 2);
  CHECK(doc.at("inputs").at("eps_abs").get<double>() == 2.3e-3);
}

TEST_CASE("regime report") {
  const RunResult r = run_cli("regime --f 1 --tau 5e-44 --N 1e27 --n 1");
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("classification").get<std::string>() == "Broad");
  CHECK(doc.at("lambda_sd").at("exp10").get<int>() == 56);
  CHECK(doc.at("t23_seconds").at("exp10").get<int>() == -24);
  CHECK(doc.at("t13_seconds").at("exp10").get<int>() == -13);
}

TEST_CASE("attractor trace") {
  const fs::path h = scratch_dir() / "h.json";
  write_fixture(h, R"({"dim": 2, "entries": [[0,0],[0,0],[0,0],[1.0471975511965976,0]]})");
  const fs::path psi = scratch_dir() / "plus.json";
  write_fixture(psi,
                R"({"dim": 2, "amplitudes": [[0.7071067811865476,0],[0.7071067811865476,0]]})");
  const fs::path csv = scratch_dir() / "att.csv";
  const RunResult r = run_cli("attractor --h-file " + h.string() + " --psi0-file " + psi.string() +
                              " --tau 1.0 --N 12 --output-csv " + csv.string());
  REQUIRE(r.exit_code == 0);
  const auto rows = lines_of(slurp(csv));
  REQUIRE(rows.size() == 14);  // header + n = 0..12
  CHECK(rows[0] == "n,residual,dominant_fraction");
  // residual falls by cos(pi/3) = 1/2 per step once the split is established
  CHECK(field(rows[13], 1) == doctest::Approx(0.5 * field(rows[12], 1)).epsilon(1e-9));
  CHECK(field(rows[13], 2) > 0.999);
}

TEST_CASE("verify is deterministic and seed-stable") {
  const fs::path a = scratch_dir() / "v1.json";
  const fs::path b = scratch_dir() / "v2.json";
  REQUIRE(run_cli("verify --suite interference --seed 42 --output " + a.string()).exit_code == 0);
  REQUIRE(run_cli("verify --suite interference --seed 42 --output " + b.string()).exit_code == 0);
  const std::string ra = slurp(a);
  CHECK(ra == slurp(b));
  REQUIRE(!ra.empty());

  const auto doc = nlohmann::json::parse(ra);
  CHECK(doc.at("all_pass").get<bool>());
  // the oracle-equivalence property reports a tight max error
  bool saw_oracle = false;
  for (const auto& suite : doc.at("suites"))
    for (const auto& prop : suite.at("properties"))
      if (prop.at("name").get<std::string>().find("oracle") != std::string::npos) {
        saw_oracle = true;
        CHECK(prop.at("max_error").get<double>() < 1e-11);
      }
  CHECK(saw_oracle);

  // a different seed still passes
  const RunResult other = run_cli("verify --suite interference --seed 977");
  CHECK(other.exit_code == 0);
}

}  // TEST_SUITE
