#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "polydens/counterexample.hpp"
#include "polydens/error.hpp"

using namespace polydens;

TEST_CASE("instance validation") {
  CHECK_NOTHROW(validate(AlphaInstance{4, 1, {1.5}, 0.5, -0.4}));
  CHECK_THROWS_AS(validate(AlphaInstance{4, 1, {1.5}, 0.5, -0.6}), Error);
  CHECK_NOTHROW(validate(AlphaInstance{5, 2, {1.5, 2.5}, 0.5, 0.1}));
  CHECK_THROWS_AS(validate(AlphaInstance{5, 2, {1.5, 2.5}, 0.5, 0.0}), Error);
  CHECK_THROWS_AS(validate(AlphaInstance{3, 1, {1.5}, 0.5, -0.4}), Error);
  CHECK_THROWS_AS(validate(AlphaInstance{4, 2, {1.5}, 0.5, -0.4}), Error);
  AlphaInstance a = sample_alpha_instance(4, 1, 0.5, -0.4, 9);
  AlphaInstance b = sample_alpha_instance(4, 1, 0.5, -0.4, 9);
  CHECK(a.alpha == b.alpha);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    AlphaInstance s = sample_alpha_instance(6, 3, 0.5, 1.5, seed);
    for (double v : s.alpha) CHECK((v >= 1.1 && v < 3.0));
  }
}

TEST_CASE("lemma margin examples") {
  AlphaInstance generic{4, 1, {std::sqrt(2.0) - 1.0}, 0.5, -0.4};
  // sqrt(2)-1 < 1 is allowed here: the lemma itself has no size condition on alpha.
  MarginReport r500 = lemma_margin(generic, 500);
  CHECK(r500.min_margin > 0.0);
  CHECK(r500.x_max == 500);
  MarginReport r1000 = lemma_margin(generic, 1000);
  CHECK(r1000.min_margin <= r500.min_margin);

  AlphaInstance rational{4, 1, {1.0}, 0.0, -0.4};
  MarginReport r = lemma_margin(rational, 10);
  CHECK(r.min_margin == 0.0);
  CHECK(r.argmin_x == std::vector<std::int64_t>{1});
  CHECK(r.argmin_z == 1);
  CHECK_THROWS_AS(lemma_margin(rational, 0), Error);
}

TEST_CASE("lemma margin agrees with the two-loop oracle") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    AlphaInstance one = sample_alpha_instance(4, 1, 0.5, -0.4, seed);
    CHECK(lemma_margin(one, 50).min_margin == doctest::Approx(oracle::lemma_margin(one.alpha, 0.5, -0.4, 50)).epsilon(1e-12));
    AlphaInstance two = sample_alpha_instance(5, 2, 0.3, 0.5, seed);
    CHECK(lemma_margin(two, 30).min_margin == doctest::Approx(oracle::lemma_margin(two.alpha, 0.3, 0.5, 30)).epsilon(1e-12));
  }
  AlphaInstance rational{4, 1, {1.0}, 0.0, -0.4};
  CHECK(oracle::lemma_margin(rational.alpha, 0.0, -0.4, 10) == 0.0);
}

TEST_CASE("lemma margin is independent of the worker count") {
  AlphaInstance inst = sample_alpha_instance(5, 2, 0.5, 0.5, 4);
  MarginReport a = lemma_margin(inst, 60, 1);
  MarginReport b = lemma_margin(inst, 60, 4);
  CHECK(a.min_margin == b.min_margin);
  CHECK(a.argmin_x == b.argmin_x);
  CHECK(a.argmin_z == b.argmin_z);
  CHECK(a.pairs_tested == b.pairs_tested);
}

TEST_CASE("verdicts agree with a direct scan of the hyperboloid ball") {
  std::vector<double> eps{0.1, 0.05};
  auto source = std::make_shared<ShellSource>(hyperboloid(4));
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    AlphaInstance inst = sample_alpha_instance(4, 1, 0.5, -0.4, seed);
    VerifyOptions opts;
    opts.source = source;
    NoSolutionReport r = verify_no_solutions(inst, 1.5, eps, opts);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.margin_constant > 0.0);
    for (const auto& row : r.rows) {
      const double want = oracle::alpha_min_deviation(inst.alpha[0], inst.xi, row.max_height);
      CHECK(row.min_deviation == doctest::Approx(want).epsilon(1e-12));
      CHECK(row.no_solution == (want >= row.epsilon));
      CHECK(row.witness.has_value() == !row.no_solution);
      CHECK(row.chain_violations == 0);
      CHECK(row.chain_checked > 0);
      CHECK(row.chain_min_ratio >= 1.0);
    }
  }
}

TEST_CASE("planted witness is found") {
  AlphaInstance inst{4, 1, {1.7}, 4 - 1.7 * 3, -0.4};  // attained at (3, 2, 2, 4)
  VerifyOptions opts;
  opts.check_kappa = false;
  std::vector<double> eps{1e-6};
  NoSolutionReport r = verify_no_solutions(inst, 0.2, eps, opts);
  REQUIRE(r.rows.size() == 1);
  CHECK_FALSE(r.rows[0].no_solution);
  REQUIRE(r.rows[0].witness);
  CHECK(r.rows[0].witness->height <= 4);
}

TEST_CASE("preconditions of the no-solution check") {
  std::vector<double> eps{0.1};
  AlphaInstance integer_xi{4, 1, {1.7}, 1.0, -0.4};
  CHECK_THROWS_AS(verify_no_solutions(integer_xi, 1.5, eps), Error);
  AlphaInstance inst{4, 1, {1.7}, 0.5, -0.4};
  CHECK_THROWS_AS(verify_no_solutions(inst, 2.0, eps), Error);
  std::vector<double> tiny{1e-9};
  try {
    verify_no_solutions(inst, 1.9, tiny);
    FAIL("expected BallTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BallTooLarge);
  }
}
