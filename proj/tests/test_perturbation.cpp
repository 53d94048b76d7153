#include "markovmono/errors.hpp"
#include "markovmono/perturbation.hpp"
#include "markovmono/stationary.hpp"
#include "markovmono/verify.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace markovmono;

namespace {

ElementaryPerturbation move(std::size_t target, std::size_t donor, std::vector<double> c) {
  return {CouplingSpec{StateIndex{target}, StateIndex{donor}},
          Eigen::Map<Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()))};
}

}  // namespace

TEST_CASE("apply_elementary") {
  const auto u = validate(oracle::uniform(3));
  SUBCASE("moves mass in the coupled columns only") {
    const auto out = apply_elementary(u, move(0, 1, {0.1, 0, 0}));
    CHECK(out(0, 0) == doctest::Approx(1.0 / 3 + 0.1));
    CHECK(out(0, 1) == doctest::Approx(1.0 / 3 - 0.1));
    CHECK(out(0, 2) == u(0, 2));
    CHECK(out.entries().bottomRows(2) == u.entries().bottomRows(2));
  }
  SUBCASE("zero amounts are the identity") { CHECK(apply_elementary(u, move(0, 1, {0, 0, 0})) == u); }
  SUBCASE("infeasible amounts") {
    const auto two = validate({{0.5, 0.5}, {0.25, 0.75}});
    try {
      apply_elementary(two, move(0, 1, {0.6, 0}));
      FAIL("expected InfeasibleAmount");
    } catch (const InfeasibleAmount& e) {
      CHECK(e.row == 0);
    }
    CHECK_THROWS_AS(apply_elementary(two, move(0, 1, {-0.1, 0})), InfeasibleAmount);
    CHECK_THROWS_AS(apply_elementary(two, move(0, 1, {0.1})), DimensionMismatch);
    CHECK_THROWS_AS(apply_elementary(two, move(1, 1, {0.1, 0})), InvalidArgument);
  }
  SUBCASE("taking the whole donor entry") {
    const auto out = apply_elementary(u, move(0, 1, {1.0 / 3, 0, 0}));
    CHECK(out(0, 1) == 0.0);
    CHECK(std::abs(out(0, 0) - 2.0 / 3) <= 1e-15);
  }
}

TEST_CASE("check_theorem_conditions") {
  const auto u = validate(oracle::uniform(3));
  const StateIndex s0{0};
  SUBCASE("strict move") {
    const auto r = check_theorem_conditions(u, apply_elementary(u, move(0, 1, {0.1, 0, 0})), s0);
    CHECK(r.holds);
    CHECK(r.strict);
    CHECK(r.strict_rows == std::vector<std::size_t>{0});
  }
  SUBCASE("identity") {
    const auto r = check_theorem_conditions(u, u, s0);
    CHECK(r.holds);
    CHECK_FALSE(r.strict);
    CHECK(r.violations.empty());
  }
  SUBCASE("raising a non-target column") {
    const auto bad = validate({{0.3, 0.4, 0.3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}});
    const auto r = check_theorem_conditions(u, bad, s0);
    CHECK_FALSE(r.holds);
    REQUIRE_FALSE(r.violations.empty());
    const bool listed = std::any_of(r.violations.begin(), r.violations.end(),
                                    [](const auto& v) { return v.row == 0 && v.column == 1; });
    CHECK(listed);
  }
  SUBCASE("size mismatch") {
    CHECK_THROWS_AS(check_theorem_conditions(u, validate(oracle::uniform(2)), s0), DimensionMismatch);
  }
}

TEST_CASE("decompose fixtures") {
  const auto u = validate(oracle::uniform(3));
  const StateIndex s0{0};
  SUBCASE("single donor") {
    const auto pert = move(0, 1, {0.1, 0.05, 0});
    const auto target = apply_elementary(u, pert);
    const auto steps = decompose(u, target, s0);
    REQUIRE(steps.size() == 1);
    CHECK(steps[0].spec.donor.value == 1);
    CHECK((steps[0].c - pert.c).lpNorm<Eigen::Infinity>() <= 1e-15);
  }
  SUBCASE("identity") { CHECK(decompose(u, u, s0).empty()); }
  SUBCASE("two donors") {
    // Built by hand so the oracle is a direct matrix comparison.
    const auto target = validate({{1.0 / 3 + 0.15, 1.0 / 3 - 0.1, 1.0 / 3 - 0.05},
                                  {1.0 / 3 + 0.2, 1.0 / 3, 1.0 / 3 - 0.2},
                                  {1.0 / 3, 1.0 / 3, 1.0 / 3}});
    const auto steps = decompose(u, target, s0);
    REQUIRE(steps.size() == 2);
    CHECK(steps[0].spec.donor.value == 1);
    CHECK(steps[1].spec.donor.value == 2);
    CHECK(max_entry_difference(compose(u, steps), target) <= 1e-14);
  }
  SUBCASE("violating pair") {
    CHECK_THROWS_AS(decompose(apply_elementary(u, move(0, 1, {0.1, 0, 0})), u, s0),
                    ConditionsViolated);
  }
}

TEST_CASE("random compliant pairs: exact composition, any order, stochastic, monotone") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const auto base = validate(oracle::random_dense(rng, n, 0.01));
    const std::size_t s0 = trial % n;

    // Move a random fraction of each non-target column into s0.
    Eigen::MatrixXd raw = base.entries();
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
      for (Eigen::Index j = 0; j < raw.cols(); ++j) {
        if (static_cast<std::size_t>(j) == s0 || unit(rng) < 0.4) continue;
        const double c = raw(i, j) * 0.9 * unit(rng);
        raw(i, j) -= c;
        raw(i, static_cast<Eigen::Index>(s0)) += c;
      }
    }
    const auto target = validate(raw, 1e-12);
    const auto report = check_theorem_conditions(base, target, StateIndex{s0});
    if (!report.holds) continue;  // renormalization dust can tip an untouched column

    auto steps = decompose(base, target, StateIndex{s0});
    CHECK(max_entry_difference(compose(base, steps), target) <= 1e-14);
    for (const auto& step : steps) {
      CHECK_NOTHROW(validate(apply_elementary(base, step).entries(), 1e-12));
    }

    std::shuffle(steps.begin(), steps.end(), rng);
    CHECK(max_entry_difference(compose(base, steps), target) <= 1e-14);

    if (report.strict) {
      CHECK(stationary_linear(target)[s0] > stationary_linear(base)[s0] + 1e-12);
    }
  }
}
