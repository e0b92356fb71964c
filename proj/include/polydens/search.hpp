#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "polydens/maps.hpp"
#include "polydens/varieties.hpp"

namespace polydens {

// Largest admissible ball bound eps^{-kappa}.
inline constexpr double kBallGuard = 1e9;

/// One instance of ||F(x) - xi|| < eps, ||x|| < eps^{-kappa}, x on the variety.
struct SearchProblem {
  MapFamily family;
  VarietySpec variety;
  std::vector<double> xi;
  double epsilon = 0.1;
  double kappa = 1.0;
  bool exclude_zero = false;
};

struct Solution {
  LatticePoint point;
  MapValue value;
  double error = 0.0;
};

struct SearchOutcome {
  std::optional<Solution> found;
  std::uint64_t points_scanned = 0;
  std::int64_t shells_completed = 0;
  std::int64_t wall_millis = 0;
  std::int64_t max_height = 0;  // largest admissible height of the ball
};

enum class Strategy { ShellScan, RootSolve, Auto };

struct SearchOptions {
  Strategy strategy = Strategy::ShellScan;
  int workers = 1;
  // Shells below this height are known to hold no solution and are skipped.
  std::int64_t start_height = 0;
  // Shared cache of variety shells; created on demand when null.
  std::shared_ptr<ShellSource> source;
};

SearchProblem make_problem(MapFamily family, std::vector<double> xi, double epsilon, double kappa,
                           bool exclude_zero = false);

void validate(const SearchProblem& p);

// ceil(eps^{-kappa}) - 1; throws BallTooLarge past the guard.
std::int64_t max_admissible_height(double epsilon, double kappa);

// True when RootSolve applies (quadratic values on Z^3).
bool supports_root_solve(const SearchProblem& p);

/// Minimal-height solution, ties broken lexicographically, or a certificate
/// that every shell of the ball was scanned without success.
SearchOutcome solve_system(const SearchProblem& p, const SearchOptions& opts = {});

// Re-evaluates both inequalities through an independent code path.
bool verify_solution(const SearchProblem& p, const Solution& s);

/// Solves a sequence of shrinking problems that share one variety.
///
/// The constraint sets shrink with epsilon, so the minimal height can only
/// grow: each step starts scanning where the previous one stopped, and the
/// variety shells are enumerated once.
class ScheduleSearch {
 public:
  ScheduleSearch(SearchProblem templ, SearchOptions opts);

  // epsilon must be below the previous step's.
  SearchOutcome step(double epsilon);

 private:
  SearchProblem problem_;
  SearchOptions opts_;
  std::optional<double> last_epsilon_;
  std::int64_t lower_bound_ = 0;
};

struct ScheduleEntry {
  double epsilon = 0.0;
  SearchOutcome outcome;
};

std::vector<ScheduleEntry> min_height_over_schedule(const SearchProblem& templ, std::span<const double> epsilons,
                                                    const SearchOptions& opts = {});

}  // namespace polydens
