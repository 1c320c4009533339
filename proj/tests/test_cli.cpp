#include <doctest.h>

#include "near.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("covent_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const auto out = scratch() / "stdout.txt";
  const std::string cmd =
      std::string(COVENT_CLI) + " " + args + " > " + out.string() + " 2> " + (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream text;
  text << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, text.str()};
}

std::string config(const std::string& name, const std::string& text) {
  const auto path = scratch() / name;
  std::ofstream(path) << text;
  return path.string();
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("cli: epsilon at defaults") {
  const auto r = run("epsilon");
  CHECK(r.code == 0);
  CHECK(r.out.find("eps_coulomb       0.00079673108") != std::string::npos);
  CHECK(r.out.find("ratio             0.986528051") != std::string::npos);
}

TEST_CASE("cli: epsilon json is deterministic") {
  const auto a = run("epsilon --json");
  const auto b = run("epsilon --json");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"eps_transformed\"") != std::string::npos);
}

TEST_CASE("cli: zero splitting is a validation error") {
  CHECK(run("epsilon --config " + config("de0.cfg", "delta_e = 0\n")).code == 1);
}

TEST_CASE("cli: unreachable tolerance is a convergence error") {
  CHECK(run("epsilon --config " + config("tol.cfg", "rel_tol = 1e-30\n")).code == 2);
}

TEST_CASE("cli: unknown option is a validation error") {
  CHECK(run("epsilon --frobnicate").code == 1);
  CHECK(run("").code == 1);
}

TEST_CASE("cli: sweep over dE") {
  const auto csv = (scratch() / "sweep.csv").string();
  const auto r = run("sweep --axis delta_e --from 1e-3 --to 1e-2 --points 10 --csv " + csv);
  CHECK(r.code == 0);
  std::ifstream in(csv);
  std::string header, line;
  std::getline(in, header);
  CHECK(header ==
        "omega_a,omega_b,delta_e,separation_l,dipole_d,charge_q,eps_coulomb,eps_lorentz,"
        "eps_transformed,ratio,c0,c1,c2,residue,status");
  double previous = 2.0;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::stringstream cells(line);
    std::string cell;
    for (int i = 0; i < 10; ++i) std::getline(cells, cell, ',');
    const double ratio = std::stod(cell);
    CHECK(ratio < previous);
    previous = ratio;
    CHECK(line.substr(line.size() - 3) == ",ok");
  }
  CHECK(rows == 10);
}

TEST_CASE("cli: sweep over L follows 1 / L^3") {
  const auto r = run("sweep --axis separation_l --from 2 --to 4 --points 2");
  REQUIRE(r.code == 0);
  std::stringstream text(r.out);
  std::string line;
  std::getline(text, line);
  double eps[2];
  for (double& e : eps) {
    std::getline(text, line);
    std::stringstream cells(line);
    std::string cell;
    for (int i = 0; i < 7; ++i) std::getline(cells, cell, ',');
    e = std::stod(cell);
  }
  CHECK(eps[0] / eps[1] == near(8.0, 0.01));
}

TEST_CASE("cli: sweep failures") {
  CHECK(run("sweep --axis delta_e --from 1 --to 0.1 --points 3").code == 1);
  CHECK(run("sweep --axis delta_e --from 0.1 --to 1 --points 0").code == 1);
  CHECK(run("sweep --axis omega_a --from 0.1 --to 1").code == 1);
  const auto r = run("sweep --axis delta_e --from -0.5 --to 0.1 --points 2 --spacing linear");
  CHECK(r.code == 2);
  CHECK(r.out.find("validation_error") != std::string::npos);
  CHECK(r.out.find(",ok") != std::string::npos);
}

TEST_CASE("cli: plot data") {
  const auto r = run("sweep --axis dipole_d --from 0.01 --to 0.02 --points 3 --plot-data");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("# dipole_d ratio\n", 0) == 0);
  CHECK(count_lines(r.out) == 4);
  CHECK(run("expand --plot-data").code == 0);
}

TEST_CASE("cli: expand") {
  const auto r = run("expand");
  CHECK(r.code == 0);
  CHECK(r.out.find("c0") != std::string::npos);
}

TEST_CASE("cli: check and its negative controls") {
  const auto a = run("check --seed 5");
  CHECK(a.code == 0);
  CHECK(a.out == run("check --seed 5").out);
  CHECK(run("check --corrupt-metric").code == 3);
  const auto b = run("check --corrupt-subsidiary");
  CHECK(b.code == 3);
  CHECK(b.out.find("[FAIL] subsidiary") != std::string::npos);
}

TEST_CASE("cli: oracle") {
  const auto r = run("oracle");
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  const auto q0 = run("oracle --config " + config("q0.cfg", "charge_q = 0\n"));
  CHECK(q0.code == 0);
  CHECK(q0.out.find("exact") != std::string::npos);
  CHECK(run("oracle --config " + config("res.cfg", "oracle_k_longitudinal = 0.6, 0.8, 0\n")).code ==
        2);
}
