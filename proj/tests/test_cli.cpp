#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string bin() { return NATGRAD_LAB_PATH; }

int run(const std::string& args) {
  const int status = std::system((bin() + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("usage errors exit with status 2") {
  CHECK(run("") == 2);
  CHECK(run("bogus-subcommand") == 2);
  CHECK(run("example --id not-a-real-example") == 2);
  CHECK(run("descend") == 2);  // missing required --model
}

TEST_CASE("example reports are deterministic and tagged") {
  const std::string p1 = "/tmp/natgrad_cli_ex1.csv";
  const std::string p2 = "/tmp/natgrad_cli_ex2.csv";
  REQUIRE(run("example --id a3-overparam --out " + p1) == 0);
  REQUIRE(run("example --id a3-overparam --out " + p2) == 0);
  const std::string a = slurp(p1);
  CHECK(a == slurp(p2));
  CHECK(a.find("min-norm-coefficients") != std::string::npos);
  CHECK(a.find("4.7999999999999") != std::string::npos);  // y_Theta first entry

  const std::string pj = "/tmp/natgrad_cli_ex.json";
  REQUIRE(run("example --id a1-cubic --format json --out " + pj) == 0);
  const std::string j = slurp(pj);
  CHECK(j.find("\"jacobian-reparam-at-zero\"") != std::string::npos);
}

TEST_CASE("descend writes both trajectories with LF endings") {
  const std::string p = "/tmp/natgrad_cli_traj.csv";
  REQUIRE(run("descend --model a3-overparam --steps 5 --lr 0.05 --out " + p) == 0);
  const std::string primary = slurp(p);
  const std::string reparam = slurp(p + ".reparam");
  CHECK(primary.rfind("step,", 0) == 0);
  CHECK(reparam.rfind("step,", 0) == 0);
  CHECK(primary.find('\r') == std::string::npos);
  // byte-identical on rerun
  REQUIRE(run("descend --model a3-overparam --steps 5 --lr 0.05 --out " + p) == 0);
  CHECK(primary == slurp(p));
}

TEST_CASE("descend accepts the damped inverse and the ascend flag") {
  const std::string p = "/tmp/natgrad_cli_damped.csv";
  CHECK(run("descend --model a3-overparam --steps 3 --inverse damped --lambda 1e-6 --out " +
            p) == 0);
  CHECK(run("descend --model a3-overparam --steps 3 --lr -0.1 --out " + p) == 2);
}

TEST_CASE("sample-proper reports a zero fraction for the built-ins") {
  const std::string p = "/tmp/natgrad_cli_proper.csv";
  REQUIRE(run("sample-proper --model a2-figure-eight --samples 2000 --out " + p) == 0);
  const std::string out = slurp(p);
  CHECK(out.find("a2-figure-eight,0,2000,0,42") != std::string::npos);
}

TEST_CASE("verify honours the tolerance override") {
  // an impossibly tight tolerance must produce exit status 1
  CHECK(run("verify --tol 1e-30") == 1);
}
