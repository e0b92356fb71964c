#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "polydens/forms.hpp"
#include "polydens/rational.hpp"

namespace polydens {

struct FullLattice {
  int n = 3;
};

// Selects a connected component of {Q = k} by the sign of one coordinate.
struct ComponentFilter {
  int coord = 0;
  int sign = 1;  // +1 keeps x[coord] > 0, -1 keeps x[coord] < 0
  bool accepts(std::span<const std::int64_t> x) const {
    return sign > 0 ? x[static_cast<std::size_t>(coord)] > 0 : x[static_cast<std::size_t>(coord)] < 0;
  }
};

// {x : Q(x) = k}; Q must carry an exact rational representation.
struct Quadric {
  QuadForm q;
  Rational k;
  std::optional<ComponentFilter> filter;
};

// {x in M_3 : det x = ell}, points stored row-major as 9 coordinates.
struct DetVariety {
  std::int64_t ell = 1;
};

using VarietySpec = std::variant<FullLattice, Quadric, DetVariety>;

inline VarietySpec unimodular_frames() { return DetVariety{1}; }

// Q = x_1^2 + ... + x_{n-1}^2 - x_n^2, k = 1.
Quadric hyperboloid(int n);

int ambient_dim(const VarietySpec& spec);
void validate(const VarietySpec& spec);

// Max-norm.
std::int64_t height(std::span<const std::int64_t> x) noexcept;

// Exact membership in integer arithmetic.
bool contains(const VarietySpec& spec, std::span<const std::int64_t> x);

struct LatticePoint {
  std::vector<std::int64_t> coords;
  std::int64_t height = 0;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

struct CountRecord {
  std::int64_t T = 0;
  std::uint64_t count = 0;
};

// All points of one exact height, lexicographically sorted, stored flat.
struct Shell {
  std::int64_t height = 0;
  int dim = 0;
  std::vector<std::int64_t> data;

  std::size_t size() const noexcept { return dim == 0 ? 0 : data.size() / static_cast<std::size_t>(dim); }
  std::span<const std::int64_t> point(std::size_t i) const noexcept {
    return {data.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

struct EnumerateOptions {
  int workers = 1;
  // When false, a quadric with no usable pure-square term throws
  // UnsupportedQuadric instead of falling back to the full odometer scan.
  bool allow_fallback = true;
};

/// Produces shells of a variety in increasing height.
///
/// Quadric and determinant shells are materialized in batches over a growing
/// box and cached, so repeated searches over the same variety (an epsilon
/// schedule, or many maps on one variety) enumerate each shell once. Full
/// lattice shells are generated directly and not cached.
class ShellSource {
 public:
  explicit ShellSource(VarietySpec spec, EnumerateOptions opts = {});

  const VarietySpec& spec() const noexcept { return spec_; }
  int dim() const noexcept { return dim_; }
  bool uses_fallback() const noexcept { return fallback_; }

  // Heights >= limit are never materialized; batches are clipped to it.
  void set_height_limit(std::int64_t limit) noexcept { limit_ = limit; }

  std::shared_ptr<const Shell> shell(std::int64_t h);

 private:
  void grow_to(std::int64_t target);

  VarietySpec spec_;
  EnumerateOptions opts_;
  int dim_;
  bool fallback_ = false;
  std::int64_t limit_ = INT64_MAX;
  std::int64_t materialized_ = 0;  // shells [0, materialized_) are cached
  std::vector<std::shared_ptr<const Shell>> cache_;
};

// Calls visit(point) for every point with height < T, shell by shell, each
// shell in lexicographic order.
void enumerate(const VarietySpec& spec, std::int64_t T,
               const std::function<void(std::span<const std::int64_t>)>& visit,
               EnumerateOptions opts = {});

std::vector<LatticePoint> enumerate_points(const VarietySpec& spec, std::int64_t T, EnumerateOptions opts = {});

// N(T) = #{x : ||x|| < T}, counted without storing points.
CountRecord count_points(const VarietySpec& spec, std::int64_t T, EnumerateOptions opts = {});

struct GrowthFit {
  double a = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least-squares slope of log N(T) against log T.
GrowthFit growth_exponent(std::span<const CountRecord> records);

}  // namespace polydens
