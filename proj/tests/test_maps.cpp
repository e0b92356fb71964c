#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "polydens/error.hpp"
#include "polydens/maps.hpp"

using namespace polydens;

namespace {

using Vec = std::vector<std::int64_t>;

QuadForm j_form() { return QuadForm::from_integers(3, {-1, 0, 0, 0, -1, 0, 0, 0, 1}); }

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

Eigen::Matrix3d rotation12(double theta) {
  Eigen::Matrix3d h = Eigen::Matrix3d::Identity();
  h(0, 0) = std::cos(theta);
  h(0, 1) = -std::sin(theta);
  h(1, 0) = std::sin(theta);
  h(1, 1) = std::cos(theta);
  return h;
}

}  // namespace

TEST_CASE("charpoly on the identity") {
  CharPoly f{GroupElement::identity(3), GroupElement::identity(3), 1};
  Vec id{1, 0, 0, 0, 1, 0, 0, 0, 1};
  MapValue v = evaluate(f, id);
  REQUIRE(v.values.size() == 2);
  CHECK(v.values[0] == doctest::Approx(-3));
  CHECK(v.values[1] == doctest::Approx(3));
  CHECK(charpoly_invariants(id) == CharPolyInvariants{1, -3, 3});
}

TEST_CASE("charpoly on the companion witness") {
  for (std::int64_t ell : {-3, 1, 2, 7})
    for (std::int64_t a = -5; a <= 5; ++a)
      for (std::int64_t b = -5; b <= 5; ++b) {
        Vec x = companion_witness(a, b, ell);
        CHECK(x == Vec{0, 0, ell, 1, 0, a, 0, 1, b});
        CharPoly f{GroupElement::identity(3), GroupElement::identity(3), ell};
        MapValue v = evaluate(f, x);
        CHECK(v.values[0] == static_cast<double>(a));
        CHECK(v.values[1] == static_cast<double>(b));
        CHECK(charpoly_invariants(x) == CharPolyInvariants{ell, a, b});
      }
}

TEST_CASE("charpoly_invariants examples") {
  CHECK(charpoly_invariants(Vec{1, 0, 0, 0, 2, 0, 0, 0, 3}) == CharPolyInvariants{6, -11, 6});
  CHECK(charpoly_invariants(Vec(9, 0)) == CharPolyInvariants{0, 0, 0});
  try {
    charpoly_invariants(Vec{3000000, 1, 1, 1, 3000000, 1, 1, 1, 3000000});
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
  CHECK_THROWS_AS(charpoly_invariants(Vec{1, 2, 3}), Error);
}

TEST_CASE("charpoly_invariants agrees with det(tI - x) expansion") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    Vec x(9);
    for (auto& v : x) v = static_cast<std::int64_t>(rng.next_u64() % 19) - 9;
    CharPolyInvariants c = charpoly_invariants(x);
    for (std::int64_t t : {0, 1, 2}) CHECK(oracle::char_poly_at(x, t) == t * t * t - c.f2 * t * t - c.f1 * t - c.f0);
  }
}

TEST_CASE("charpoly values are invariant under simultaneous right translation") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GroupElement g1 = random_group_element(3, seed);
    GroupElement g2 = random_group_element(3, seed + 100);
    GroupElement h = random_group_element(3, seed + 200);
    CharPoly f{g1, g2, 1};
    CharPoly fh{g1 * h, g2 * h, 1};
    for (const Vec& x : {Vec{1, 0, 0, 0, 1, 0, 0, 0, 1}, Vec{2, 1, 0, 1, 1, 0, 0, 0, 1}, Vec{0, 0, 1, 1, 0, -3, 0, 1, 2}}) {
      CHECK(max_diff(evaluate(f, x).values, evaluate(fh, x).values) < 1e-8);
    }
  }
}

TEST_CASE("gram map examples and invariance") {
  GramMap f{GroupElement::identity(3), j_form()};
  Vec id{1, 0, 0, 0, 1, 0, 0, 0, 1};
  MapValue v = evaluate(f, id);
  CHECK(v.values == std::vector<double>{-1, 0, 0, -1, 0, 1});
  CHECK(v.matrix == std::vector<double>{-1, 0, 0, 0, -1, 0, 0, 0, 1});

  // Integer rotation in the (1,2) plane preserves J.
  Vec frame{2, 1, 0, 1, 1, 0, 0, 0, 1};
  Vec rotated{-1, -1, 0, 2, 1, 0, 0, 0, 1};  // h * frame with h = [[0,-1,0],[1,0,0],[0,0,1]]
  CHECK(max_diff(evaluate(f, frame).values, evaluate(f, rotated).values) < 1e-12);

  // Continuous rotations act on g: F_{g h^{-1}}(x) = F_g(x).
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GroupElement g = random_group_element(3, seed);
    Eigen::Matrix3d h = rotation12(0.1 + 0.3 * static_cast<double>(seed));
    GramMap moved{GroupElement(Eigen::MatrixXd(g.matrix() * h.transpose())), j_form()};
    GramMap base{g, j_form()};
    CHECK(max_diff(evaluate(base, frame).values, evaluate(moved, frame).values) < 1e-8);
  }
}

TEST_CASE("gram values keep det J on unimodular frames") {
  const double det_j = j_form().discriminant();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GramMap f{random_group_element(3, seed), j_form()};
    for (const auto& p : enumerate_points(DetVariety{1}, 2)) {
      MapValue v = evaluate(f, p.coords);
      Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>> m(v.matrix.data());
      CHECK(std::abs(m.determinant() - det_j) <= 1e-8 * std::abs(det_j));
    }
  }
}

TEST_CASE("quadratic values equal the translated form") {
  QuadForm q0 = standard_form(2, 1, -1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GroupElement g = random_group_element(3, seed);
    QuadraticValues a{q0, g};
    QuadraticValues b{translate(q0, g), GroupElement::identity(3)};
    for (const Vec& x : {Vec{1, 2, 3}, Vec{-4, 0, 7}, Vec{5, -5, 1}}) {
      const double va = evaluate(a, x).values[0];
      const double vb = evaluate(b, x).values[0];
      CHECK(std::abs(va - vb) <= 1e-9 * std::max(1.0, std::abs(va)));
      CHECK(va == doctest::Approx(oracle::translated_form(q0.matrix(), g.matrix(), x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("alpha and linear families") {
  AlphaFamily zero{{0.0}, 4};
  CHECK(evaluate(zero, Vec{3, 1, 1, -2}).values[0] == -2);
  AlphaFamily two{{1.5, -0.5}, 4};
  CHECK(evaluate(two, Vec{1, 2, 0, 3}).values[0] == doctest::Approx(3 - 1.5 + 1.0));

  Quadric var = hyperboloid(4);
  Eigen::MatrixXd fm = Eigen::MatrixXd::Zero(1, 4);
  fm(0, 3) = 1;
  fm(0, 0) = -2;
  GroupElement g = random_orthogonal_element(var.q, 5);
  LinearOnQuadric lin{LinearMap(fm), g, var};
  Vec x{2, 1, 1, 2};
  Eigen::Vector4d y = g.matrix().partialPivLu().solve(Eigen::Vector4d(2, 1, 1, 2));
  CHECK(evaluate(lin, x).values[0] == doctest::Approx(y(3) - 2 * y(0)).epsilon(1e-12));
}

TEST_CASE("family constants") {
  auto qv = family_constants(QuadraticValues{standard_form(2, 1, -1), GroupElement::identity(3)});
  CHECK((qv.m == 1 && qv.d == 2 && qv.a == 3));
  auto cp = family_constants(CharPoly{GroupElement::identity(3), GroupElement::identity(3), 1});
  CHECK((cp.m == 2 && cp.d == 2 && cp.a == 6));
  Eigen::MatrixXd fm = Eigen::MatrixXd::Zero(1, 4);
  fm(0, 0) = 1;
  auto lin = family_constants(LinearOnQuadric{LinearMap(fm), GroupElement::identity(4), hyperboloid(4)});
  CHECK((lin.m == 1 && lin.d == 1 && lin.a == 2));
  auto gram = family_constants(GramMap{GroupElement::identity(3), j_form()});
  CHECK(gram.m == 5);
  CHECK(gram.d == 2);
  CHECK_FALSE(gram.a.has_value());
  CHECK(gram.gram_count_exponent == 1);
  CHECK(gram.gram_target_dim == 5);
  auto alpha = family_constants(AlphaFamily{{2.0}, 5});
  CHECK((alpha.m == 1 && alpha.d == 1 && alpha.a == 3));
}

TEST_CASE("validation and dimension checks") {
  CHECK_THROWS_AS(validate(MapFamily{CharPoly{GroupElement::identity(3), GroupElement::identity(3), 0}}), Error);
  QuadraticValues qv{standard_form(2, 1, -1), GroupElement::identity(3)};
  try {
    evaluate(qv, Vec{1, 2});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
  CHECK(value_dim(GramMap{GroupElement::identity(3), j_form()}) == 6);
  CHECK(std::string(family_tag(qv)) == "quadratic");
}

TEST_CASE("evaluator deviation is the max norm") {
  GramMap f{random_group_element(3, 3), j_form()};
  Evaluator ev(f);
  Vec x{1, 1, 0, 0, 1, 0, 0, 0, 1};
  std::vector<double> xi{-1, 0.5, 0, -1, 0, 1};
  MapValue v = evaluate(f, x);
  double want = 0;
  for (int i = 0; i < 6; ++i) want = std::max(want, std::abs(v.values[static_cast<std::size_t>(i)] - xi[static_cast<std::size_t>(i)]));
  CHECK(ev.deviation(x, xi) == doctest::Approx(want).epsilon(1e-14));
}
