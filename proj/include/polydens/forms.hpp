#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polydens/rng.hpp"

namespace polydens {

// Tolerances are fixed so that acceptance runs are reproducible.
inline constexpr double kStructuralTol = 1e-9;
inline constexpr double kStatisticalTol = 1e-6;
inline constexpr double kSymmetryTol = 1e-12;

// Integer matrix scaled by a common positive denominator: entry = num / den.
struct ExactMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::int64_t> num;  // row-major
  std::int64_t den = 1;

  std::int64_t at(int i, int j) const { return num[static_cast<std::size_t>(i) * cols + j]; }
  Eigen::MatrixXd to_real() const;
};

struct Signature {
  int positive = 0;
  int negative = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Non-degenerate quadratic form Q(x) = x^T A x with A symmetric.
///
/// Forms built from integers keep their exact representation; forms obtained
/// by real translation drop it.
class QuadForm {
 public:
  explicit QuadForm(Eigen::MatrixXd a);
  QuadForm(Eigen::MatrixXd a, ExactMatrix exact);

  static QuadForm diagonal(std::span<const double> entries);
  static QuadForm from_integers(int dim, std::vector<std::int64_t> num, std::int64_t den = 1);

  int dim() const noexcept { return static_cast<int>(a_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return a_; }
  const std::optional<ExactMatrix>& exact() const noexcept { return exact_; }
  double discriminant() const { return a_.determinant(); }

  double operator()(std::span<const double> x) const;
  double operator()(std::span<const std::int64_t> x) const;

 private:
  Eigen::MatrixXd a_;
  std::optional<ExactMatrix> exact_;
};

/// Element of SL_n(R) acting by translation F_g = F o g^{-1}.
class GroupElement {
 public:
  explicit GroupElement(Eigen::MatrixXd g, std::optional<std::uint64_t> seed = std::nullopt);

  static GroupElement identity(int n);

  int dim() const noexcept { return static_cast<int>(g_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return g_; }
  const Eigen::MatrixXd& inverse() const noexcept { return inv_; }
  const std::optional<std::uint64_t>& seed() const noexcept { return seed_; }

  GroupElement operator*(const GroupElement& other) const;

 private:
  Eigen::MatrixXd g_;
  Eigen::MatrixXd inv_;
  std::optional<std::uint64_t> seed_;
};

/// Full-rank linear map R^n -> R^m.
class LinearMap {
 public:
  explicit LinearMap(Eigen::MatrixXd f);
  explicit LinearMap(ExactMatrix f);

  int rows() const noexcept { return static_cast<int>(f_.rows()); }
  int cols() const noexcept { return static_cast<int>(f_.cols()); }
  const Eigen::MatrixXd& matrix() const noexcept { return f_; }
  const std::optional<ExactMatrix>& exact() const noexcept { return exact_; }

 private:
  Eigen::MatrixXd f_;
  std::optional<ExactMatrix> exact_;
};

// Eigenvalue signs with zero threshold 1e-9 * ||A||; throws NearSingular.
Signature signature(const QuadForm& q);

// Matrix g^{-T} A g^{-1}, i.e. x -> Q0(g^{-1} x).
QuadForm translate(const QuadForm& q0, const GroupElement& g);

// Uniform(-1,1) entries, resampled until |det| is usable, then scaled into SL_n.
GroupElement random_group_element(int n, Rng& rng);
GroupElement random_group_element(int n, std::uint64_t seed);

// exp(A^{-1} K) for a random skew K: an element of SO(Q)^0.
GroupElement random_orthogonal_element(const QuadForm& q, std::uint64_t seed, double scale = 1.0);

QuadForm standard_form(int p, int q, double ell);
QuadForm random_form(int p, int q, double ell, std::uint64_t seed);

// Columns span ker(F). Pivots are taken from the rightmost usable column, so
// a relation like x4 - 2 x1 = 0 is solved for x4.
Eigen::MatrixXd kernel_basis(const LinearMap& f);

// Q restricted to ker(F) in the kernel_basis coordinates.
// Throws DegenerateRestriction if the restriction is singular.
QuadForm restrict_form(const QuadForm& q, const LinearMap& f);

// Q|_{F=0} non-degenerate and indefinite.
bool restriction_is_indefinite(const QuadForm& q, const LinearMap& f);

}  // namespace polydens
