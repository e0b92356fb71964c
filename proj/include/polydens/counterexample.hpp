#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "polydens/search.hpp"
#include "polydens/varieties.hpp"

namespace polydens {

/// F_alpha(x) = x_n - sum_{i<=s} alpha_i x_i on x_1^2 + ... + x_{n-1}^2 - x_n^2 = 1.
struct AlphaInstance {
  int n = 4;
  int s = 1;
  std::vector<double> alpha;
  double xi = 0.5;
  double sigma = -0.4;  // margin exponent sigma_s
};

void validate(const AlphaInstance& inst);

// alpha uniform in [1.1, 3]^s, so ||alpha|| > 1 and Q|_{F=0} is indefinite.
AlphaInstance sample_alpha_instance(int n, int s, double xi, double sigma, std::uint64_t seed);

AlphaFamily alpha_family(const AlphaInstance& inst);

struct MarginReport {
  std::int64_t x_max = 0;
  double min_margin = 0.0;
  std::vector<std::int64_t> argmin_x;
  std::int64_t argmin_z = 0;
  std::uint64_t pairs_tested = 0;
};

// |z - (alpha.x + xi)^2|, evaluated the same way everywhere.
double square_gap(const AlphaInstance& inst, std::span<const std::int64_t> x, std::int64_t z);

/// min over x in Z^s \ {0}, ||x|| <= x_max, and integers z >= ||x||^2 - 1 of
/// |z - (alpha.x + xi)^2| * ||x||^sigma. For each x only the integers next to
/// the rounded square (clamped to the admissible range) are tried.
MarginReport lemma_margin(const AlphaInstance& inst, std::int64_t x_max, int workers = 1);

struct VerdictRow {
  double epsilon = 0.0;
  bool no_solution = true;
  std::int64_t max_height = 0;
  std::uint64_t points_in_ball = 0;
  double min_deviation = 0.0;  // min |F_alpha(x) - xi| over the ball
  std::optional<LatticePoint> witness;
  // For every x in the ball with (x_1..x_s) != 0, the ratio
  // |z - (alpha.x + xi)^2| ||x'||^sigma / c with z = x_1^2+...+x_{n-1}^2-1.
  double chain_min_ratio = 0.0;
  std::uint64_t chain_checked = 0;
  std::uint64_t chain_violations = 0;
};

struct NoSolutionReport {
  double kappa = 0.0;
  double margin_constant = 0.0;  // empirical c from lemma_margin over the largest ball
  std::vector<VerdictRow> rows;
};

struct VerifyOptions {
  int workers = 1;
  // Hyperboloid shell cache; share it across instances with the same n.
  std::shared_ptr<ShellSource> source;
  // Skip the n_e/kappa precondition (used to plant witnesses above the threshold).
  bool check_kappa = true;
};

NoSolutionReport verify_no_solutions(const AlphaInstance& inst, double kappa, std::span<const double> epsilons,
                                     const VerifyOptions& opts = {});

}  // namespace polydens
