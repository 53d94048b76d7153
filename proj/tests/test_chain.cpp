#include "markovmono/chain.hpp"
#include "markovmono/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace markovmono;

TEST_CASE("validate accepts an exactly stochastic matrix") {
  const auto m = validate({{0.5, 0.5}, {0.25, 0.75}}, 1e-9);
  CHECK(m.size() == 2);
  CHECK(m(1, 1) == 0.75);
}

TEST_CASE("validate rejects bad input with the offending position") {
  SUBCASE("row sum") {
    try {
      validate({{1.0, 0.1}, {0.5, 0.5}}, 1e-9);
      FAIL("expected RowSumViolation");
    } catch (const RowSumViolation& e) {
      CHECK(e.i == 0);
      CHECK(e.sum == doctest::Approx(1.1));
    }
  }
  SUBCASE("negative entry") {
    try {
      validate({{0.5, 0.5}, {-0.1, 1.1}}, 1e-9);
      FAIL("expected NegativeEntry");
    } catch (const NegativeEntry& e) {
      CHECK(e.i == 1);
      CHECK(e.j == 0);
    }
  }
  SUBCASE("too small") { CHECK_THROWS_AS(validate({{1.0}}, 1e-9), TooSmall); }
  SUBCASE("ragged") { CHECK_THROWS_AS(validate({{0.5, 0.5}, {1.0}}, 1e-9), NotSquare); }
  SUBCASE("zero row") { CHECK_THROWS_AS(validate({{0.0, 0.0}, {0.5, 0.5}}, 1e-9), RowSumViolation); }
  SUBCASE("nan") {
    CHECK_THROWS_AS(validate({{std::nan(""), 1.0}, {0.5, 0.5}}, 1e-9), InvalidArgument);
  }
  SUBCASE("label count") {
    CHECK_THROWS_AS(validate({{0.5, 0.5}, {0.5, 0.5}}, 1e-9, {"a"}), InvalidArgument);
  }
}

TEST_CASE("validate renormalizes near-stochastic rows and clamps dust") {
  const auto m = validate({{0.5 + 4e-10, 0.5}, {-1e-10, 1.0 + 1e-10}}, 1e-9);
  CHECK(m(0, 0) + m(0, 1) == 1.0);
  CHECK(m(1, 0) == 0.0);
  CHECK(m(1, 0) + m(1, 1) == 1.0);
}

TEST_CASE("validate is idempotent") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> noise(-5e-10, 5e-10);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 15;
    auto raw = oracle::random_dense(rng, n, 0.0);
    for (auto& row : raw)
      for (auto& x : row) x = std::max(0.0, x + noise(rng));
    const auto once = validate(raw, 1e-8);
    const auto twice = validate(once.entries(), 1e-8);
    REQUIRE(once == twice);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(once.entries().row(static_cast<Eigen::Index>(i)).sum() - 1.0) <= 4e-15);
    }
  }
}

TEST_CASE("structure on the small fixtures") {
  SUBCASE("two-cycle") {
    const auto r = structure(validate({{0.0, 1.0}, {1.0, 0.0}}));
    CHECK(r.irreducible);
    CHECK(r.period == 2);
    CHECK_FALSE(r.aperiodic);
  }
  SUBCASE("self loop") {
    const auto r = structure(validate({{0.5, 0.5}, {0.25, 0.75}}));
    CHECK(r.irreducible);
    CHECK(r.period == 1);
    CHECK(r.aperiodic);
  }
  SUBCASE("absorbing state") {
    const auto r = structure(validate({{1.0, 0.0}, {0.5, 0.5}}));
    CHECK_FALSE(r.irreducible);
    CHECK_FALSE(r.aperiodic);
    REQUIRE(r.communicating_classes.size() == 2);
    CHECK(r.communicating_classes[0] == std::vector<std::size_t>{0});
    CHECK(r.communicating_classes[1] == std::vector<std::size_t>{1});
  }
  SUBCASE("three-cycle has period 3, adding a chord to a 2-step path drops it to 1") {
    CHECK(structure(validate({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}})).period == 3);
    CHECK(structure(validate({{0, 1, 0}, {0, 0, 1}, {0.5, 0.5, 0}})).period == 1);
  }
  SUBCASE("bipartite four-state chain has period 2") {
    const auto r = structure(validate({{0, 0.5, 0, 0.5}, {0.5, 0, 0.5, 0}, {0, 0.5, 0, 0.5},
                                       {0.5, 0, 0.5, 0}}));
    CHECK(r.irreducible);
    CHECK(r.period == 2);
  }
}

TEST_CASE("positive matrices are irreducible and aperiodic for n in [2, 16]") {
  std::mt19937_64 rng(3);
  for (std::size_t n = 2; n <= 16; ++n) {
    const auto r = structure(validate(oracle::random_dense(rng, n, 1e-3)));
    CHECK(r.irreducible);
    CHECK(r.period == 1);
    REQUIRE(r.communicating_classes.size() == 1);
    CHECK(r.communicating_classes[0].size() == n);
  }
}

TEST_CASE("communicating classes partition the states") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 9;
    oracle::Matrix p(n, oracle::Vector(n, 0.0));
    for (auto& row : p) {
      double s = 0.0;
      for (auto& x : row) s += (x = u(rng) < 0.3 ? u(rng) : 0.0);
      if (s == 0.0) {
        row[trial % n] = 1.0;
        s = 1.0;
      }
      for (auto& x : row) x /= s;
    }
    const auto r = structure(validate(p));
    std::vector<int> seen(n, 0);
    for (const auto& c : r.communicating_classes)
      for (std::size_t s : c) ++seen[s];
    for (int count : seen) CHECK(count == 1);
    CHECK(r.aperiodic == (r.irreducible && r.period == 1));
  }
}

TEST_CASE("require_ergodic") {
  CHECK_NOTHROW(require_ergodic(validate({{0.0, 1.0}, {1.0, 0.0}})));
  CHECK_NOTHROW(require_ergodic(validate(oracle::uniform(3))));
  CHECK_THROWS_AS(require_ergodic(validate({{1.0, 0.0}, {0.5, 0.5}})), NotIrreducible);
}

TEST_CASE("shift_mass moves mass and leaves other entries untouched") {
  const auto m = validate(oracle::uniform(3));
  const auto s = shift_mass(m, 0, 1, 0, 0.1);
  CHECK(s(0, 0) == doctest::Approx(1.0 / 3 + 0.1));
  CHECK(s(0, 1) == doctest::Approx(1.0 / 3 - 0.1));
  CHECK(s(0, 2) == m(0, 2));
  CHECK(s.entries().bottomRows(2) == m.entries().bottomRows(2));
  CHECK_THROWS_AS(shift_mass(m, 0, 1, 0, 0.4), InfeasibleAmount);
  CHECK_THROWS_AS(shift_mass(m, 0, 1, 0, -0.4), InfeasibleAmount);
  CHECK_THROWS_AS(m.checked(StateIndex{3}), InvalidArgument);
}
