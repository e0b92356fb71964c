#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "polydens/forms.hpp"
#include "polydens/varieties.hpp"

namespace polydens {

// x -> Q0(g^{-1} x) on Z^n.
struct QuadraticValues {
  QuadForm q0;
  GroupElement g;
};

// x -> F(g^{-1} x) on a rational quadric.
struct LinearOnQuadric {
  LinearMap f;
  GroupElement g;
  Quadric variety;
};

// x -> (F1, F2)(g1^{-1} x g2) on {det x = ell}, where
// det(tI - y) = t^3 - F2 t^2 - F1 t - F0.
struct CharPoly {
  GroupElement g1;
  GroupElement g2;
  std::int64_t ell = 1;
};

// Frame x (columns v_i) -> (g^{-1}x)^T J (g^{-1}x).
struct GramMap {
  GroupElement g;
  QuadForm j;
};

// x -> x_n - sum_i alpha_i x_i on the hyperboloid of dimension n.
struct AlphaFamily {
  std::vector<double> alpha;
  int n = 4;
};

using MapFamily = std::variant<QuadraticValues, LinearOnQuadric, CharPoly, GramMap, AlphaFamily>;

// For GramMap, `values` holds the six upper-triangle entries (row-major) and
// `matrix` the full symmetric 3x3 value; `matrix` is empty otherwise.
struct MapValue {
  std::vector<double> values;
  std::vector<double> matrix;
};

struct FamilyConstants {
  int m = 0;
  int d = 0;
  std::optional<int> a;
  // GramMap only: count exponent (p-1)q and dim Sym(p,q;1) = (n-1)(n+2)/2.
  std::optional<int> gram_count_exponent;
  std::optional<int> gram_target_dim;
};

struct CharPolyInvariants {
  std::int64_t f0 = 0;
  std::int64_t f1 = 0;
  std::int64_t f2 = 0;
  friend bool operator==(const CharPolyInvariants&, const CharPolyInvariants&) = default;
};

const char* family_tag(const MapFamily& family);
void validate(const MapFamily& family);

// Length of MapValue::values (6 for GramMap, m otherwise).
int value_dim(const MapFamily& family);
FamilyConstants family_constants(const MapFamily& family);

// Variety the family is defined on.
VarietySpec natural_variety(const MapFamily& family);

/// Allocation-free evaluator for one family; build once, evaluate many points.
class Evaluator {
 public:
  explicit Evaluator(const MapFamily& family);

  int input_dim() const noexcept { return input_dim_; }
  int value_dim() const noexcept { return value_dim_; }

  // Writes value_dim() entries into out.
  void operator()(std::span<const std::int64_t> x, std::span<double> out) const;
  // Max-norm distance to xi.
  double deviation(std::span<const std::int64_t> x, std::span<const double> xi) const;

 private:
  enum class Kind { Quadratic, Linear, CharPoly, Gram, Alpha } kind_;
  int n_ = 0;
  int input_dim_ = 0;
  int value_dim_ = 0;
  std::vector<double> inv_;   // g^{-1} (or g1^{-1}), row-major
  std::vector<double> inv2_;  // g2 for CharPoly
  std::vector<double> form_;  // Q0 or J, row-major
  std::vector<double> lin_;   // F, or alpha
};

MapValue evaluate(const MapFamily& family, std::span<const std::int64_t> x);

// Exact (F0, F1, F2) of a 3x3 integer matrix (row-major); throws Overflow.
CharPolyInvariants charpoly_invariants(std::span<const std::int64_t> x);

// The matrix [[0,0,ell],[1,0,xi1],[0,1,xi2]] with F = (xi1, xi2), F0 = ell.
std::vector<std::int64_t> companion_witness(std::int64_t xi1, std::int64_t xi2, std::int64_t ell);

}  // namespace polydens
