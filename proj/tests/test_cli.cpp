#include <doctest.h>

#include "support.hpp"

#include <array>
#include <cstdio>
#include <string>

using namespace testsupport;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(DEFEXP_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer{};
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string model(const std::string& name) {
  return "--model " + fixtures_dir() + "/models/" + name;
}

void check_golden(const std::string& args, const std::string& golden_name, int expected_exit) {
  const auto result = run_cli(args);
  CHECK(result.exit_code == expected_exit);
  const std::string expected = read_file(golden_dir() + "/" + golden_name);
  CHECK_MESSAGE(result.output == expected, golden_name.c_str());
}

}  // namespace

TEST_CASE("documented invocations match their golden bytes") {
  check_golden("family alpha " + model("two_point_classical.json") + " --theta 0",
               "family_alpha_theta0.json", 0);
  check_golden("family alpha " + model("two_point_classical.json") + " --theta 2",
               "family_alpha_theta2.json", 0);
  check_golden("polytope contains " + model("segment.json") + " --eta 3.5",
               "polytope_contains_eta3p5.json", 1);
  check_golden("polytope contains " + model("segment.json") + " --eta 2",
               "polytope_contains_eta2.json", 0);
  check_golden("conjugate legendre-check " + model("two_point_classical.json") + " --theta 2",
               "legendre_check_theta2.json", 0);
  check_golden("conjugate alpha-star " + model("two_point_classical.json") + " --eta 1.2",
               "alpha_star_outside.json", 1);
  check_golden("deform eval " + model("two_point_kaniadakis.json") +
                   " --op ln-phi --at 1,4",
               "deform_eval_lnphi.json", 0);
  check_golden("family alpha " + model("two_point_classical.json") + " --theta 2 --format csv",
               "family_alpha_theta2.csv", 0);
}

TEST_CASE("exit-code contract") {
  // 0: success on a finite query.
  CHECK(run_cli("family alpha " + model("two_point_kaniadakis.json") + " --theta 1").exit_code ==
        0);
  // 1: outside the polytope.
  CHECK(run_cli("conjugate alpha-star " + model("two_point_classical.json") + " --eta 1.5")
            .exit_code == 1);
  CHECK(run_cli("polytope interior " + model("segment.json") + " --eta 3").exit_code == 1);
  // 2: validation failures, including unknown flags.
  const auto bad_model = run_cli("family alpha " + model("bad_negative_mu.json") + " --theta 0");
  CHECK(bad_model.exit_code == 2);
  CHECK(bad_model.output.find("\"kind\": \"validation\"") != std::string::npos);
  CHECK(bad_model.output.find("\"path\": \"mu[1]\"") != std::string::npos);
  CHECK(run_cli("family alpha --no-such-flag").exit_code == 2);
  CHECK(run_cli("family alpha " + model("two_point_classical.json") + " --theta x").exit_code ==
        2);
  // 3: numerical failure from an exhausted quadrature budget.
  const auto numerical =
      run_cli("deform eval " + model("strict_quadrature.json") + " --op ln-phi --at 7");
  CHECK(numerical.exit_code == 3);
  CHECK(numerical.output.find("\"kind\": \"quadrature\"") != std::string::npos);
}

TEST_CASE("identical inputs produce byte-identical outputs") {
  const std::string args =
      "conjugate alpha-star " + model("square_kaniadakis.json") + " --eta 0.4,0.6";
  const auto first = run_cli(args);
  const auto second = run_cli(args);
  CHECK(first.exit_code == 0);
  CHECK(first.output == second.output);
}

TEST_CASE("check suite passes and reports sorted groups") {
  const auto result = run_cli("check suite");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("\"pass\": true") != std::string::npos);
  const auto a = result.output.find("conjugate.legendre_roundtrip");
  const auto b = result.output.find("deformation.rate_identity");
  const auto c = result.output.find("polytope.certificates");
  CHECK(a != std::string::npos);
  CHECK(a < b);
  CHECK(b < c);
}

TEST_CASE("seed override and version flag") {
  const auto seeded = run_cli("check suite --format csv");
  CHECK(seeded.exit_code == 0);
  setenv("DEFEXP_SEED", "7", 1);
  const auto overridden = run_cli("check suite");
  unsetenv("DEFEXP_SEED");
  CHECK(overridden.exit_code == 0);
  CHECK(overridden.output.find("\"seed\": 7") != std::string::npos);
  const auto version = run_cli("--version");
  CHECK(version.exit_code == 0);
  CHECK(version.output.find("schema 1") != std::string::npos);
}

TEST_CASE("oracle-values reproduces the committed fixture") {
  const auto result = run_cli("oracle-values");
  CHECK(result.exit_code == 0);
  CHECK(result.output == read_file(fixtures_dir() + "/derived_values.json"));
}
