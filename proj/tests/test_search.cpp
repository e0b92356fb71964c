#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "polydens/error.hpp"
#include "polydens/search.hpp"

using namespace polydens;

namespace {

using Vec = std::vector<std::int64_t>;

QuadraticValues seeded_ternary(std::uint64_t seed) {
  return QuadraticValues{standard_form(2, 1, -1), random_group_element(3, seed)};
}

// Independent deviation of a quadratic-values problem.
std::function<double(const oracle::Point&)> quad_deviation(const QuadraticValues& f, double xi) {
  Eigen::MatrixXd a = f.q0.matrix(), g = f.g.matrix();
  return [a, g, xi](const oracle::Point& x) { return std::abs(oracle::translated_form(a, g, x) - xi); };
}

std::optional<oracle::Point> naive(const SearchProblem& p, const std::function<double(const oracle::Point&)>& dev,
                                   std::vector<oracle::Point> candidates) {
  return oracle::naive_search(std::move(candidates), dev, p.epsilon, max_admissible_height(p.epsilon, p.kappa),
                              p.exclude_zero);
}

void check_same(const SearchOutcome& out, const std::optional<oracle::Point>& want) {
  CHECK(out.found.has_value() == want.has_value());
  if (out.found && want) CHECK(out.found->point.coords == *want);
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected polydens::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("admissible height truncation") {
  CHECK(max_admissible_height(0.5, 2.0) == 3);
  CHECK(max_admissible_height(0.2, 1.2) == 6);
  CHECK(max_admissible_height(0.1, 1.0) == 9);
  CHECK(kind_of([] { max_admissible_height(1e-9, 3.0); }) == ErrorKind::BallTooLarge);
}

TEST_CASE("problem validation") {
  SearchProblem p = make_problem(seeded_ternary(1), {0.5}, 0.2, 1.2);
  CHECK_NOTHROW(validate(p));
  p.epsilon = 1.0;
  CHECK(kind_of([&] { validate(p); }) == ErrorKind::InvalidArgument);
  p.epsilon = 0.2;
  p.kappa = 0.0;
  CHECK(kind_of([&] { validate(p); }) == ErrorKind::InvalidArgument);
  p.kappa = 1.0;
  p.xi = {0.5, 0.5};
  CHECK(kind_of([&] { validate(p); }) == ErrorKind::DimensionMismatch);
  p.xi = {0.5};
  p.variety = hyperboloid(4);
  CHECK(kind_of([&] { validate(p); }) == ErrorKind::DimensionMismatch);
  SearchProblem q = make_problem(AlphaFamily{{2.0}, 4}, {0.5}, 0.5, 1.0);
  SearchOptions root;
  root.strategy = Strategy::RootSolve;
  CHECK(kind_of([&] { solve_system(q, root); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("isotropic form finds a null vector of height 1") {
  QuadraticValues f{QuadForm::from_integers(3, {1, 0, 0, 0, 1, 0, 0, 0, -1}), GroupElement::identity(3)};
  SearchProblem p = make_problem(f, {0.0}, 0.5, 2.0, true);
  for (Strategy s : {Strategy::ShellScan, Strategy::RootSolve}) {
    SearchOptions o;
    o.strategy = s;
    SearchOutcome out = solve_system(p, o);
    REQUIRE(out.found);
    CHECK(out.found->point.height == 1);
    CHECK(out.found->value.values[0] == 0.0);
    CHECK(out.found->point.coords == Vec{-1, 0, -1});
    CHECK(verify_solution(p, *out.found));
  }
}

TEST_CASE("seeded ternary form agrees with the naive scan") {
  auto box = oracle::box_scan(3, 8, [](const oracle::Point&) { return true; });
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    QuadraticValues f = seeded_ternary(seed);
    SearchProblem p = make_problem(f, {0.5}, 0.2, 1.2);
    for (Strategy s : {Strategy::ShellScan, Strategy::RootSolve}) {
      SearchOptions o;
      o.strategy = s;
      SearchOutcome out = solve_system(p, o);
      check_same(out, naive(p, quad_deviation(f, 0.5), box));
      if (out.found) CHECK(verify_solution(p, *out.found));
    }
  }
}

TEST_CASE("oracle equivalence across families") {
  // Quadratic values with balls up to 50.
  auto cube = oracle::box_scan(3, 51, [](const oracle::Point&) { return true; });
  for (std::uint64_t seed = 100; seed < 106; ++seed) {
    QuadraticValues f = seeded_ternary(seed);
    for (double xi : {0.3, -2.7}) {
      SearchProblem p = make_problem(f, {xi}, 0.01, std::log(50.0) / std::log(100.0));
      check_same(solve_system(p), naive(p, quad_deviation(f, xi), cube));
    }
  }

  // F_alpha on the hyperboloid.
  auto hyp = oracle::box_scan(4, 51, oracle::integer_quadric({1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1}, 1));
  for (double a : {1.3, 2.2, 2.9}) {
    AlphaFamily f{{a}, 4};
    for (double xi : {0.5, 0.25}) {
      SearchProblem p = make_problem(f, {xi}, 0.02, std::log(50.0) / std::log(50.0));
      auto dev = [a, xi](const oracle::Point& x) { return std::abs(static_cast<double>(x[3]) - a * static_cast<double>(x[0]) - xi); };
      check_same(solve_system(p), naive(p, dev, hyp));
    }
  }

  // Linear map on the hyperboloid, translated by an orthogonal element.
  {
    Quadric var = hyperboloid(4);
    Eigen::MatrixXd fm = Eigen::MatrixXd::Zero(1, 4);
    fm(0, 0) = 1;
    GroupElement g = random_orthogonal_element(var.q, 11);
    LinearOnQuadric f{LinearMap(fm), g, var};
    Eigen::MatrixXd gm = g.matrix();
    auto dev = [gm](const oracle::Point& x) {
      Eigen::Vector4d v(static_cast<double>(x[0]), static_cast<double>(x[1]), static_cast<double>(x[2]), static_cast<double>(x[3]));
      return std::abs(gm.partialPivLu().solve(v)(0) - 0.37);
    };
    SearchProblem p = make_problem(f, {0.37}, 0.01, std::log(40.0) / std::log(100.0));
    check_same(solve_system(p), naive(p, dev, hyp));
  }

  // Charpoly and Gram maps on determinant varieties with balls up to 4.
  auto frames = oracle::det_variety(4, 1);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    CharPoly cp{random_group_element(3, seed), random_group_element(3, seed + 7), 1};
    Eigen::MatrixXd g1 = cp.g1.matrix(), g2 = cp.g2.matrix();
    auto dev_cp = [g1, g2](const oracle::Point& x) {
      Eigen::Matrix3d m;
      for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = static_cast<double>(x[static_cast<std::size_t>(i)]);
      Eigen::Matrix3d y = g1.inverse() * m * g2;
      const double tr = y.trace();
      const double minors = y(0, 0) * y(1, 1) - y(0, 1) * y(1, 0) + y(0, 0) * y(2, 2) - y(0, 2) * y(2, 0) +
                            y(1, 1) * y(2, 2) - y(1, 2) * y(2, 1);
      return std::max(std::abs(-minors - 0.4), std::abs(tr - 1.1));
    };
    SearchProblem p = make_problem(cp, {0.4, 1.1}, 0.5, 2.0);
    check_same(solve_system(p), naive(p, dev_cp, frames));

    GramMap gm{random_group_element(3, seed + 50), QuadForm::from_integers(3, {-1, 0, 0, 0, -1, 0, 0, 0, 1})};
    Eigen::MatrixXd ginv = gm.g.matrix().inverse();
    std::vector<double> xi{-1.2, 0.3, 0.1, -0.8, 0.2, 1.1};
    auto dev_gram = [ginv, xi](const oracle::Point& x) {
      Eigen::Matrix3d m;
      for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = static_cast<double>(x[static_cast<std::size_t>(i)]);
      Eigen::Matrix3d u = ginv * m;
      Eigen::Matrix3d v = u.transpose() * Eigen::Vector3d(-1, -1, 1).asDiagonal() * u;
      const double vals[6] = {v(0, 0), v(0, 1), v(0, 2), v(1, 1), v(1, 2), v(2, 2)};
      double d = 0;
      for (int i = 0; i < 6; ++i) d = std::max(d, std::abs(vals[i] - xi[static_cast<std::size_t>(i)]));
      return d;
    };
    SearchProblem pg = make_problem(gm, xi, 0.5, 2.0);
    check_same(solve_system(pg), naive(pg, dev_gram, frames));
  }
}

TEST_CASE("planted witness on the hyperboloid") {
  Vec star{3, 2, 2, 4};
  AlphaFamily f{{1.7}, 4};
  const double xi = 4 - 1.7 * 3;
  SearchProblem p = make_problem(f, {xi}, 1e-6, 0.2);
  SearchOutcome out = solve_system(p);
  REQUIRE(out.found);
  CHECK(out.found->point.height <= 4);
  CHECK(out.found->error < 1e-6);
}

TEST_CASE("root solve and shell scan agree on 100 ternary problems") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    QuadraticValues f = seeded_ternary(1000 + seed);
    const double xi = 0.1 + 0.008 * static_cast<double>(seed);
    SearchProblem p = make_problem(f, {xi}, 0.01, std::log(300.0) / std::log(100.0), true);
    SearchOptions shell, root;
    shell.strategy = Strategy::ShellScan;
    root.strategy = Strategy::RootSolve;
    SearchOutcome a = solve_system(p, shell);
    SearchOutcome b = solve_system(p, root);
    REQUIRE(a.found.has_value() == b.found.has_value());
    if (a.found) {
      CHECK(a.found->point == b.found->point);
      CHECK(verify_solution(p, *a.found));
    }
  }
}

TEST_CASE("search is independent of the worker count") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SearchProblem p = make_problem(seeded_ternary(seed), {0.3}, 0.02, 1.1, true);
    for (Strategy s : {Strategy::ShellScan, Strategy::RootSolve}) {
      SearchOptions one, four;
      one.strategy = four.strategy = s;
      four.workers = 4;
      SearchOutcome a = solve_system(p, one), b = solve_system(p, four);
      CHECK(a.found.has_value() == b.found.has_value());
      if (a.found) CHECK(a.found->point == b.found->point);
      CHECK(a.points_scanned == b.points_scanned);
    }
  }
}

TEST_CASE("unsuccessful searches cover the whole ball") {
  AlphaFamily f{{2.0}, 4};
  // Integer alpha: values are integers, so xi = 0.5 is never within 0.1.
  SearchProblem p = make_problem(f, {0.5}, 0.1, 1.0);
  SearchOutcome out = solve_system(p);
  CHECK_FALSE(out.found);
  CHECK(out.max_height == max_admissible_height(0.1, 1.0));
  CHECK(out.shells_completed == out.max_height + 1);
}

TEST_CASE("schedule of epsilons") {
  SearchProblem templ = make_problem(seeded_ternary(3), {0.3}, 0.2, 1.3, true);
  std::vector<double> none;
  CHECK(min_height_over_schedule(templ, none).empty());

  std::vector<double> eps{0.2, 0.1, 0.05, 0.025, 0.0125};
  auto entries = min_height_over_schedule(templ, eps);
  REQUIRE(entries.size() == eps.size());
  std::int64_t last = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    SearchProblem fresh = templ;
    fresh.epsilon = eps[i];
    SearchOutcome direct = solve_system(fresh);
    CHECK(entries[i].outcome.found.has_value() == direct.found.has_value());
    if (direct.found) {
      CHECK(entries[i].outcome.found->point == direct.found->point);
      CHECK(direct.found->point.height >= last);
      last = direct.found->point.height;
    }
  }

  QuadraticValues iso{QuadForm::from_integers(3, {1, 0, 0, 0, 1, 0, 0, 0, -1}), GroupElement::identity(3)};
  auto constant = min_height_over_schedule(make_problem(iso, {0.0}, 0.5, 2.0, true), eps);
  for (const auto& e : constant) {
    REQUIRE(e.outcome.found);
    CHECK(e.outcome.found->point.height == 1);
  }

  std::vector<double> increasing{0.1, 0.2};
  CHECK(kind_of([&] { min_height_over_schedule(templ, increasing); }) == ErrorKind::InvalidArgument);
}
