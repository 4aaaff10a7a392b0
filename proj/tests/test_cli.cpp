#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks of the installed command-line surface: exit codes,
// JSON report shapes, CSV dumps, and byte-identical reruns.

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path tmp = fs::temp_directory_path() / ("schouten_cli_" + std::to_string(counter++));
  const std::string cmd = std::string(SCHOUTEN_CLI_PATH) + " " + args + " > " + tmp.string() +
                          " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WEXITSTATUS(status);
  std::ifstream in(tmp);
  std::stringstream ss;
  ss << in.rdbuf();
  res.out = ss.str();
  fs::remove(tmp);
  return res;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("schouten_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_config(const fs::path& p, const std::string& body) {
  std::ofstream out(p);
  out << body;
}

}  // namespace

TEST_CASE("cone subcommand: constants, exit codes, determinism") {
  const RunResult r = run_cli("cone --n 5 --k 2 --tau 1 --samples 2000 --seed 7");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["mu_plus"].get<double>() == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(doc["kappa"] == 3);
  CHECK(doc["beta"].get<double>() == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(doc["structure_check"]["violations"] == 0);
  CHECK(doc["structure_check"]["samples"] == 2000);

  // byte-identical rerun with the same configuration and seed
  const RunResult again = run_cli("cone --n 5 --k 2 --tau 1 --samples 2000 --seed 7");
  CHECK(again.out == r.out);

  // top cone: mu_plus 0, beta undefined
  const json top = json::parse(run_cli("cone --n 5 --k 5 --samples 200").out);
  CHECK(top["mu_plus"].get<double>() == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(top["beta"].is_null());

  // deformed value agrees with the derived closed form
  const json def = json::parse(run_cli("cone --n 7 --k 3 --tau 0.75 --samples 200").out);
  const double mu = def["mu_plus"].get<double>();
  const double base = 4.0 / 3.0;
  const double expected = ((1 - 0.75) * 6 * (1 + base) + base * 0.75) / (1 + base * (1 - 0.75));
  CHECK(mu == doctest::Approx(expected).epsilon(1e-10));

  CHECK(run_cli("cone --n 5 --k 9").exit_code == 2);
  CHECK(run_cli("cone --n 5 --k 2 --tau 1.5").exit_code == 2);
}

TEST_CASE("barrier-check subcommand") {
  const RunResult ok = run_cli(
      "barrier-check --family AnnulusLog --n 5 --k 2 --m 0 --eps 0.5 "
      "--r-minus 0.01 --r-plus 0.0104 --grid 400");
  REQUIRE(ok.exit_code == 0);
  const json doc = json::parse(ok.out);
  CHECK(doc["pass"] == true);
  CHECK(doc["reports"][0]["family"] == "AnnulusLog");
  CHECK(doc["reports"][0]["min_cone_margin"].get<double>() > 0.0);

  // window violation: usage error citing the admissibility inequality
  const RunResult bad = run_cli(
      "barrier-check --family AnnulusLog --n 5 --k 2 --eps 0.1 --r-minus 0.01 --r-plus 0.02");
  CHECK(bad.exit_code == 2);
  CHECK(json::parse(bad.out)["error"]["message"].get<std::string>().find("eps/(2(beta+2))") !=
        std::string::npos);

  // sweep with deterministic merge order under --jobs
  const RunResult sweep = run_cli(
      "barrier-check --family AnnulusLog --n 7 --k 3 --eps-list 0.3,0.5,0.7 "
      "--window-frac-list 0.25,0.5,0.75 --r-minus 0.01 --grid 200 --jobs 3");
  REQUIRE(sweep.exit_code == 0);
  const json sdoc = json::parse(sweep.out);
  CHECK(sdoc["reports"].size() == 9);
  const RunResult sweep1 = run_cli(
      "barrier-check --family AnnulusLog --n 7 --k 3 --eps-list 0.3,0.5,0.7 "
      "--window-frac-list 0.25,0.5,0.75 --r-minus 0.01 --grid 200 --jobs 1");
  // merge order and numbers agree across fan-out widths (the config echo
  // legitimately records the different --jobs value)
  CHECK(json::parse(sweep1.out)["reports"] == sdoc["reports"]);

  const json guan = json::parse(
      run_cli("barrier-check --family GuanUpper --n 4 --xi-bar 0 --grid 300").out);
  CHECK(guan["pass"] == true);
  CHECK(guan["reports"][0]["measured"]["delta_star"].get<double>() > 0.0);

  const json lns =
      json::parse(run_cli("barrier-check --family LNSuper --n 3 --radius 0.05 --eps 0.01").out);
  CHECK(lns["pass"] == true);

  const json collar = json::parse(
      run_cli("barrier-check --family CollarLog --n 5 --k 2 --eps 0.1 --a 1 --grid 300").out);
  CHECK(collar["pass"] == true);

  CHECK(run_cli("barrier-check --family Unknown").exit_code == 2);
}

TEST_CASE("solve subcommand: oracle ball run, outputs, determinism") {
  const fs::path dir = fresh_dir("solve");
  const fs::path cfg = dir / "ball.cfg";
  write_config(cfg, R"([cone]
n = 3
k = 1
tau = 0.0

[geometry]
kind = flat
r_lo = 0.0
r_hi = 0.9

[grid]
intervals = 400
kind = ball

[problem]
oracle_boundary = true
oracle_ball_radius = 1.0

[solve]
mode = newton
)");
  const RunResult r =
      run_cli("solve --config " + cfg.string() + " --out " + (dir / "out").string());
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["converged"] == true);
  CHECK(doc["sup_error"].get<double>() <= 5e-4);
  CHECK(doc["config"]["cone"]["n"] == 3);

  // solution dump: header plus one row per node, parseable numbers
  const std::string csv = read_file(dir / "out" / "solution.csv");
  std::stringstream ss(csv);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "r,u,u_r,u_rr,eig_radial,eig_tangential,f_value,cone_margin");
  int rows = 0;
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 401);
  CHECK(csv.find("\r") == std::string::npos);

  // byte-identical rerun
  const RunResult again =
      run_cli("solve --config " + cfg.string() + " --out " + (dir / "out2").string());
  CHECK(again.out == r.out);
  CHECK(read_file(dir / "out2" / "solution.csv") == csv);

  CHECK(run_cli("solve --config " + (dir / "missing.cfg").string()).exit_code == 2);

  // unknown keys are rejected
  const fs::path badcfg = dir / "bad.cfg";
  write_config(badcfg, "[cone]\nn = 3\nk = 1\nbogus = 1\n");
  CHECK(run_cli("solve --config " + badcfg.string()).exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("solve subcommand: tau ladder via config") {
  const fs::path dir = fresh_dir("ladder");
  const fs::path cfg = dir / "ladder.cfg";
  write_config(cfg, R"([cone]
n = 5
k = 2
tau = 0.9

[geometry]
kind = flat
r_lo = 0.0
r_hi = 0.9

[grid]
intervals = 200
kind = ball

[problem]
oracle_boundary = true

[continuation]
tau_targets = 0.0, 0.25, 0.5, 0.75, 0.9

[solve]
mode = continue_tau
)");
  const RunResult r =
      run_cli("solve --config " + cfg.string() + " --out " + (dir / "out").string());
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["stages"].size() == 5);
  CHECK(doc["sup_error"].get<double>() <= 2e-3);
  fs::remove_all(dir);
}

TEST_CASE("asymptotics subcommand") {
  const fs::path dir = fresh_dir("asym");
  const fs::path cfg = dir / "sing.cfg";
  write_config(cfg, R"([cone]
n = 5
k = 2
tau = 0.9

[geometry]
kind = flat
r_lo = 0.0
r_hi = 1.0

[grid]
intervals = 400
kind = ball

[newton]
tol_residual = 1e-9

[continuation]
m_schedule = 2, 4, 6, 8

[diagnostics]
band_lo = 0.05
band_hi = 0.2

[solve]
mode = continue_m
)");
  const RunResult solve =
      run_cli("solve --config " + cfg.string() + " --out " + (dir / "out").string());
  REQUIRE(solve.exit_code == 0);

  const RunResult asym = run_cli("asymptotics --config " + cfg.string() + " --csv " +
                                 (dir / "out" / "solution.csv").string() + " --out " +
                                 (dir / "asym").string());
  REQUIRE(asym.exit_code == 0);
  const json doc = json::parse(asym.out);
  CHECK(doc["upper_envelope_holds"] == true);
  CHECK(doc["lower_envelope"]["holds"] == true);
  CHECK(doc["fitted_sqrt_c"].get<double>() > 0.0);
  CHECK(doc["band"]["nodes"].get<int>() > 10);

  const std::string csv = read_file(dir / "asym" / "asymptotics.csv");
  std::stringstream ss(csv);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "d,u_plus_ln_d");

  // empty band: usage error
  CHECK(run_cli("asymptotics --config " + cfg.string() + " --csv " +
                (dir / "out" / "solution.csv").string() + " --band 0.0001,0.0002")
            .exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("solve subcommand: singular mode") {
  const fs::path dir = fresh_dir("singular");
  const fs::path cfg = dir / "sing.cfg";
  write_config(cfg, R"([cone]
n = 5
k = 2
tau = 0.9

[geometry]
kind = flat
r_lo = 0.0
r_hi = 1.0

[grid]
intervals = 800
kind = ball

[newton]
tol_residual = 1e-8

[solve]
mode = singular
)");
  const RunResult r =
      run_cli("solve --config " + cfg.string() + " --out " + (dir / "out").string());
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["converged"] == true);
  CHECK(doc["singular"]["upper_envelope_holds"] == true);
  CHECK(doc["singular"]["lower_envelope_holds"] == true);
  CHECK(doc["increments"].size() >= 2);
  CHECK(doc["increments"].back().get<double>() < 1e-3);

  // a cone without the structural condition is rejected as a numerical error
  // (at tau = 0.99 the deformed boundary parameter of (5,3) stays below 1)
  const fs::path badcfg = dir / "bad.cfg";
  write_config(badcfg, R"([cone]
n = 5
k = 3
tau = 0.99

[geometry]
kind = flat
r_lo = 0.0
r_hi = 1.0

[grid]
intervals = 64
kind = ball

[solve]
mode = singular
)");
  CHECK(run_cli("solve --config " + badcfg.string()).exit_code == 3);
  fs::remove_all(dir);
}
