#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polydens/rational.hpp"

namespace polydens {

// Exponent arithmetic is exact; doubles appear only when printing.

struct HeuristicParams {
  Rational a;  // growth exponent of the integer points
  int m = 1;   // target dimension
  int d = 1;   // degree of the map
};

struct RootEntry {
  std::string name;
  std::int64_t m_alpha = 1;  // multiplicity in the highest weight
  std::int64_t n_alpha = 0;  // multiplicity in the product of positive roots
};

using RootDatum = std::vector<RootEntry>;

RootDatum so21_root_datum();
RootDatum sl3_diagonal_root_datum();

struct SpectralParams {
  Rational p{2};      // integrability exponent
  Rational theta{1, 2};
  Rational b{1};      // volume growth exponent
  Rational zeta{1};   // local dimension of the target
  Rational c{1};      // contraction exponent on the Siegel set
  Rational d{1};      // homogeneity degree
};

struct ErgodicExponent {
  std::int64_t n_e = 1;
  Rational theta;
};

// m / (a - m d); DegenerateHeuristic unless a > m d.
Rational pigeonhole_kappa(const HeuristicParams& h);

// (n-1)(n+2) / (2 (p-1) q) for Gram maps of signature (p, q).
Rational gram_pigeonhole_kappa(int n, int p, int q);

// max n_alpha / m_alpha.
Rational volume_exponent(const RootDatum& rd);

// n_e(2) = 1, otherwise the least even integer >= p/2; theta = 1/(2 n_e).
ErgodicExponent ergodic_theta(const Rational& p);

// zeta / (2 theta b).
Rational affine_kappa(const Rational& theta, const Rational& b, const Rational& zeta);
inline Rational affine_kappa(const SpectralParams& sp) { return affine_kappa(sp.theta, sp.b, sp.zeta); }

// (zeta - 2 theta b c) / (2 theta b c d).
Rational projective_kappa(const SpectralParams& sp);

struct CounterexampleThresholds {
  Rational nondensity_below;  // no solutions for kappa below this
  Rational heuristic_floor;   // pigeonhole expectation for F_alpha
};

CounterexampleThresholds counterexample_thresholds(int s, int n);

/// One row of the prediction table. When in_units_of_m is set the thresholds
/// are multiples of the target dimension m (the linear-map row reads "m").
struct TheoremEntry {
  std::string id;
  std::string family;
  Rational threshold;
  bool in_units_of_m = false;
  Rational pigeonhole;
  Rational affine;
  bool matches_pigeonhole = false;
  bool refined = false;  // threshold needs more than the plain affine bound
  std::string note;

  std::string threshold_text() const { return in_units_of_m ? (threshold == Rational(1) ? "m" : threshold.str() + "m") : threshold.str(); }
};

std::vector<TheoremEntry> theorem_table();

}  // namespace polydens
