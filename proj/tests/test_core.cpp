#include <doctest.h>

#include <atomic>
#include <set>
#include <sstream>

#include "polydens/parallel.hpp"
#include "polydens/rational.hpp"
#include "polydens/rng.hpp"

using polydens::Error;
using polydens::ErrorKind;
using polydens::Rational;
using polydens::Rng;

TEST_CASE("rational normalises sign and common factors") {
  Rational r(6, -4);
  CHECK(r.num() == -3);
  CHECK(r.den() == 2);
  CHECK(r.str() == "-3/2");
  CHECK(Rational(10, 5).is_integer());
  CHECK(Rational(0, 7) == Rational(0));
}

TEST_CASE("rational arithmetic and ordering") {
  Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK(-a == Rational(-1, 3));
  CHECK(b < a);
  CHECK(a >= b);
  std::ostringstream os;
  os << Rational(5, 4);
  CHECK(os.str() == "5/4");
}

TEST_CASE("rational parse") {
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational::parse("2/3") == Rational(2, 3));
  CHECK(Rational::parse("0.25") == Rational(1, 4));
  CHECK(Rational::parse("-0.5") == Rational(-1, 2));
  CHECK_THROWS_AS(Rational::parse("x"), Error);
  CHECK_THROWS_AS(Rational::parse("1/2z"), Error);
  CHECK_THROWS_AS(Rational::parse(""), Error);
}

TEST_CASE("rational overflow and zero denominator are reported") {
  Rational big(INT64_MAX / 2);
  try {
    (void)(big * big);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
  CHECK_THROWS_AS(Rational(1, 0), Error);
  // Reduction happens before narrowing.
  CHECK(Rational(INT64_MAX, 3) * Rational(3, INT64_MAX) == Rational(1));
}

TEST_CASE("rng is deterministic and splits into distinct streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng base(7);
  std::set<std::uint64_t> firsts;
  for (std::uint64_t s = 0; s < 100; ++s) firsts.insert(base.split(s).next_u64());
  CHECK(firsts.size() == 100);
  // Splitting does not advance the parent.
  Rng c(9), d(9);
  (void)c.split(3);
  CHECK(c.next_u64() == d.next_u64());
  Rng u(1);
  for (int i = 0; i < 1000; ++i) {
    double v = u.uniform(1.1, 3.0);
    CHECK((v >= 1.1 && v < 3.0));
  }
}

TEST_CASE("parallel_blocks covers the range exactly once and rethrows") {
  for (int workers : {1, 3, 8}) {
    std::vector<std::atomic<int>> hits(101);
    polydens::parallel_blocks(hits.size(), workers, [&](std::size_t, std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) hits[i]++;
    });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  CHECK_THROWS_AS(polydens::parallel_blocks(10, 4,
                                            [](std::size_t w, std::size_t, std::size_t) {
                                              if (w == 2) throw std::runtime_error("boom");
                                            }),
                  std::runtime_error);
}
