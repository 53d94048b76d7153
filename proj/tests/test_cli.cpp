#include "commands.hpp"

#include <nlohmann/json.hpp>

#include <doctest.h>

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
namespace cli = markovmono::cli;

struct Result {
  int code;
  std::string out;
  std::string err;
};

std::string fixture(const char* name) { return std::string(MARKOVMONO_FIXTURES) + "/" + name; }

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "markovmono");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args, int expected_code = 0) {
  args.push_back("--json");
  const auto r = run(std::move(args));
  REQUIRE(r.code == expected_code);
  return json::parse(r.out);
}

}  // namespace

TEST_CASE("analyze") {
  SUBCASE("two-state with a target") {
    const auto doc = run_json({"analyze", fixture("two_state.json"), "--s0", "0"});
    CHECK(doc["stationary"]["linear"][0].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-11));
    CHECK(doc["stationary"]["linear"][1].get<double>() == doctest::Approx(2.0 / 3).epsilon(1e-11));
    CHECK(doc["stationary"]["power"].is_array());
    CHECK(doc["hitting"]["return_time"].get<double>() == 3.0);
    CHECK(doc["hitting"]["hit"] == json::array({0.0, 4.0}));
    CHECK(doc["hitting"]["return_time_residual"].get<double>() <= 1e-8);
    CHECK(doc["structure"]["period"] == 1);

    const auto human = run({"analyze", fixture("two_state.json"), "--s0", "0"});
    CHECK(human.code == 0);
    CHECK(human.out.find("0.333333") != std::string::npos);
    CHECK(human.out.find("return time mu: 3") != std::string::npos);
  }
  SUBCASE("periodic chain skips power iteration") {
    const auto doc = run_json({"analyze", fixture("cycle2.json")});
    CHECK(doc["stationary"]["power"].is_null());
    CHECK(doc["structure"]["period"] == 2);
  }
  SUBCASE("exit codes") {
    CHECK(run({"analyze", fixture("reducible.json")}).code == cli::kNotIrreducible);
    CHECK(run_json({"analyze", fixture("reducible.json")}, 3)["structure"]["irreducible"] == false);
    const auto bad = run({"analyze", fixture("malformed.json")});
    CHECK(bad.code == cli::kUsage);
    CHECK(bad.err.find("matrix[1][1]") != std::string::npos);
    CHECK(run({"analyze", fixture("bad_rowsum.json")}).code == cli::kUsage);
    CHECK(run({"analyze", fixture("two_state.json"), "--s0", "2"}).code == cli::kUsage);
    CHECK(run({"analyze"}).code == cli::kUsage);
    CHECK(run({}).code == cli::kUsage);
  }
}

TEST_CASE("sensitivity") {
  const auto doc = run_json({"sensitivity", fixture("two_state.json"), "--s0", "0", "--donor", "1"});
  CHECK(doc["d_mu"] == json::array({-4.0, -8.0}));
  CHECK(doc["fd"][0].get<double>() == doctest::Approx(-4.0).epsilon(1e-5));
  CHECK(doc["fd"][1].get<double>() == doctest::Approx(-8.0).epsilon(1e-5));
  // d pi / d c = -d_mu / mu^2 with mu = 3
  CHECK(doc["d_pi"][0].get<double>() == doctest::Approx(4.0 / 9).epsilon(1e-11));
  CHECK(doc["d_pi"][1].get<double>() == doctest::Approx(8.0 / 9).epsilon(1e-11));

  CHECK(run({"sensitivity", fixture("two_state.json"), "--s0", "0", "--donor", "0"}).code ==
        cli::kUsage);
  CHECK(run({"sensitivity", fixture("reducible.json"), "--s0", "0", "--donor", "1"}).code ==
        cli::kNotIrreducible);

  const auto cycle = run_json({"sensitivity", fixture("cycle2.json"), "--s0", "0", "--donor", "1"});
  CHECK(cycle["fd"][0].is_null());  // p(0, 0) = 0 so the -h point leaves the simplex
}

TEST_CASE("perturb") {
  SUBCASE("elementary perturbation file") {
    const auto doc = run_json({"perturb", fixture("uniform3.json"), fixture("pert_uniform3.json")});
    CHECK(doc["mode"] == "elementary");
    CHECK(doc["pi_before"].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-11));
    CHECK(doc["pi_after"].get<double>() > 1.0 / 3);
    CHECK(doc["gap"].get<double>() > 0.0);
    const auto human = run({"perturb", fixture("uniform3.json"), fixture("pert_uniform3.json")});
    CHECK(human.out.find("gap: ") != std::string::npos);
    CHECK(run({"perturb", fixture("uniform3.json"), fixture("pert_uniform3.json"), "--s0", "1"})
              .code == cli::kUsage);
  }
  SUBCASE("chain pair") {
    const auto doc = run_json(
        {"perturb", fixture("uniform3.json"), fixture("uniform3_two_donors.json"), "--s0", "0"});
    CHECK(doc["holds"] == true);
    CHECK(doc["strict"] == true);
    CHECK(doc["steps"].size() == 2);
    CHECK(doc["gap"].get<double>() > 0.0);
    CHECK(doc["steps"][1]["pi"].get<double>() == doc["pi_after"].get<double>());
  }
  SUBCASE("identical chains") {
    const auto r = run({"perturb", fixture("uniform3.json"), fixture("uniform3.json"), "--s0", "0"});
    CHECK(r.code == 0);
    CHECK(r.out.find("conditions hold, not strict, gap = 0") != std::string::npos);
  }
  SUBCASE("violating pair") {
    const auto r =
        run({"perturb", fixture("uniform3.json"), fixture("uniform3_raise_col1.json"), "--s0", "0"});
    CHECK(r.code == cli::kConditionsViolated);
    CHECK(r.out.find("row 0, column 1") != std::string::npos);
    CHECK(run({"perturb", fixture("uniform3.json"), fixture("uniform3.json")}).code == cli::kUsage);
  }
}

TEST_CASE("verify") {
  const auto a = run({"verify", "--trials", "1", "--seed", "7", "--json"});
  const auto b = run({"verify", "--trials", "1", "--seed", "7", "--json"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto doc = json::parse(a.out);
  CHECK(doc["pass"] == true);
  CHECK(doc["trials"] == 1);
  CHECK(doc["min_gap"].get<double>() > 0.0);

  CHECK(run({"verify", "--trials", "0"}).code == cli::kUsage);
  CHECK(run({"verify", "--trials", "3", "--min-entry", "0.5"}).code == cli::kUsage);
  const auto human = run({"verify", "--trials", "20", "--seed", "1"});
  CHECK(human.code == 0);
  CHECK(human.out.find("result: PASS") != std::string::npos);
}

TEST_CASE("simulate") {
  const auto doc =
      run_json({"simulate", fixture("two_state.json"), "--s0", "0", "-n", "100000", "--seed", "1"});
  CHECK(std::abs(doc["z"].get<double>()) <= 4.0);
  CHECK(doc["exact"].get<double>() == 3.0);

  const auto cycle = run_json({"simulate", fixture("cycle2.json"), "--s0", "0", "-n", "500"});
  CHECK(cycle["mean"].get<double>() == 2.0);
  CHECK(cycle["std_error"].get<double>() == 0.0);
  CHECK(cycle["z"].get<double>() == 0.0);

  const auto hit = run_json(
      {"simulate", fixture("two_state.json"), "--s0", "0", "--from", "1", "-n", "50000"});
  CHECK(hit["quantity"] == "hitting_time");
  CHECK(std::abs(hit["z"].get<double>()) <= 4.0);

  CHECK(run({"simulate", fixture("two_state.json"), "--s0", "0", "-n", "0"}).code == cli::kUsage);
  CHECK(run({"simulate", fixture("reducible.json"), "--s0", "0"}).code == cli::kNotIrreducible);
}

TEST_CASE("human and json modes report the same numbers") {
  const auto doc = run_json({"analyze", fixture("two_state.json"), "--s0", "1"});
  const auto human = run({"analyze", fixture("two_state.json"), "--s0", "1"});
  std::ostringstream mu;
  mu << "return time mu: " << std::setprecision(6) << doc["hitting"]["return_time"].get<double>();
  CHECK(human.out.find(mu.str()) != std::string::npos);
}
