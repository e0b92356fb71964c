#include "polydens/exponents.hpp"

#include <algorithm>

#include "polydens/error.hpp"

namespace polydens {

RootDatum so21_root_datum() { return {{"alpha", 1, 1}}; }

RootDatum sl3_diagonal_root_datum() { return {{"alpha1", 1, 2}, {"alpha2", 1, 2}}; }

Rational pigeonhole_kappa(const HeuristicParams& h) {
  if (h.m < 1 || h.d < 1) throw Error(ErrorKind::InvalidArgument, "m and d must be positive");
  Rational gap = h.a - Rational(h.m) * Rational(h.d);
  if (gap <= Rational(0)) throw Error(ErrorKind::DegenerateHeuristic, "pigeonhole bound needs a > m d");
  return Rational(h.m) / gap;
}

Rational gram_pigeonhole_kappa(int n, int p, int q) {
  if (p + q != n || q < 1 || p < 1) throw Error(ErrorKind::InvalidArgument, "signature must satisfy p + q = n, q >= 1");
  if (p == 1) throw Error(ErrorKind::DegenerateHeuristic, "Gram bound needs p > 1");
  return Rational(static_cast<std::int64_t>(n - 1) * (n + 2), 2 * static_cast<std::int64_t>(p - 1) * q);
}

Rational volume_exponent(const RootDatum& rd) {
  if (rd.empty()) throw Error(ErrorKind::EmptyDatum, "root datum has no simple roots");
  Rational best(0);
  for (const auto& r : rd) {
    if (r.m_alpha < 1 || r.n_alpha < 0) throw Error(ErrorKind::InvalidArgument, "root multiplicities out of range");
    best = std::max(best, Rational(r.n_alpha, r.m_alpha));
  }
  return best;
}

ErgodicExponent ergodic_theta(const Rational& p) {
  if (p < Rational(2)) throw Error(ErrorKind::InvalidP, "integrability exponent must be >= 2");
  std::int64_t ne = 1;
  if (p > Rational(2)) {
    // ceil(p/2), bumped to even
    Rational half = p / Rational(2);
    std::int64_t c = half.num() / half.den() + (half.num() % half.den() != 0 ? 1 : 0);
    ne = c % 2 == 0 ? c : c + 1;
  }
  return {ne, Rational(1, 2 * ne)};
}

Rational affine_kappa(const Rational& theta, const Rational& b, const Rational& zeta) {
  if (theta <= Rational(0) || b <= Rational(0) || zeta <= Rational(0))
    throw Error(ErrorKind::InvalidArgument, "theta, b and zeta must be positive");
  return zeta / (Rational(2) * theta * b);
}

Rational projective_kappa(const SpectralParams& sp) {
  Rational base = Rational(2) * sp.theta * sp.b * sp.c;
  Rational den = base * sp.d;
  if (den <= Rational(0)) throw Error(ErrorKind::NonpositiveDenominator, "2 theta b c d must be positive");
  return (sp.zeta - base) / den;
}

CounterexampleThresholds counterexample_thresholds(int s, int n) {
  if (n < 4 || s < 1 || s > n - 1) throw Error(ErrorKind::InvalidArgument, "need n >= 4 and 1 <= s <= n-1");
  CounterexampleThresholds t;
  t.nondensity_below = s == 1 ? Rational(2) : Rational(1, s - 1);
  t.heuristic_floor = s <= n - 3 ? Rational(1, s) : Rational(1, n - 3);
  return t;
}

std::vector<TheoremEntry> theorem_table() {
  std::vector<TheoremEntry> rows;
  const SpectralParams tempered{Rational(2), ergodic_theta(Rational(2)).theta, volume_exponent(so21_root_datum())};

  {
    TheoremEntry e;
    e.id = "1.1";
    e.family = "quadratic values of ternary forms";
    e.pigeonhole = pigeonhole_kappa({Rational(3), 1, 2});
    e.affine = affine_kappa(tempered.theta, tempered.b, Rational(1));
    e.threshold = e.affine;
    e.matches_pigeonhole = e.threshold == e.pigeonhole;
    // xi = 0 goes through the projective bound, which lands on the same value.
    SpectralParams proj{Rational(2), tempered.theta, tempered.b, Rational(2), Rational(2, 3), Rational(2)};
    e.note = "xi=0 via projective bound " + projective_kappa(proj).str();
    rows.push_back(e);
  }
  {
    // Checked symbolically over m = 1..12: a = n - 2 = m + 1, d = 1, zeta = m.
    TheoremEntry e;
    e.id = "1.2";
    e.family = "linear maps on quadratic surfaces";
    e.in_units_of_m = true;
    bool all = true;
    for (int m = 1; m <= 12; ++m) {
      Rational pig = pigeonhole_kappa({Rational(m + 1), m, 1});
      Rational aff = affine_kappa(tempered.theta, tempered.b, Rational(m));
      all = all && pig == Rational(m) && aff == Rational(m);
    }
    e.threshold = Rational(1);
    e.pigeonhole = Rational(1);
    e.affine = Rational(1);
    e.matches_pigeonhole = all;
    e.note = "n = m + 3, a = n - 2, d = 1";
    rows.push_back(e);
  }
  {
    TheoremEntry e;
    e.id = "1.3";
    e.family = "characteristic polynomial map";
    e.pigeonhole = pigeonhole_kappa({Rational(6), 2, 2});
    ErgodicExponent erg = ergodic_theta(Rational(4));
    e.affine = affine_kappa(erg.theta, volume_exponent(sl3_diagonal_root_datum()), Rational(2));
    e.threshold = Rational(1);
    e.refined = true;
    e.matches_pigeonhole = e.threshold == e.pigeonhole;
    e.note = "plain affine bound with theta=" + erg.theta.str() + " gives " + e.affine.str() +
             "; splitting off the tempered part recovers 1";
    rows.push_back(e);
  }
  {
    TheoremEntry e;
    e.id = "1.5";
    e.family = "Gram matrix map";
    e.pigeonhole = gram_pigeonhole_kappa(3, 2, 1);
    e.affine = affine_kappa(tempered.theta, tempered.b, Rational(5));
    e.threshold = e.affine;
    e.matches_pigeonhole = e.threshold == e.pigeonhole;
    e.note = "zeta = dim Sym(2,1;1) = 5";
    rows.push_back(e);
  }
  return rows;
}

}  // namespace polydens
