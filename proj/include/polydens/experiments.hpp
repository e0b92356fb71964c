#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polydens/maps.hpp"
#include "polydens/search.hpp"

namespace polydens {

enum class FamilyKind { Quadratic, CharPoly, Gram, Linear, Alpha };

const char* to_string(FamilyKind kind);
FamilyKind parse_family_kind(const std::string& name);

// Recipe for a seeded family; every random choice flows from the seed.
struct FamilyTemplate {
  FamilyKind kind = FamilyKind::Quadratic;
  int p = 2;            // quadratic: signature (p, q)
  int q = 1;
  double disc = -1.0;   // quadratic: discriminant of the standard form
  std::int64_t ell = 1; // charpoly: determinant level
  int n = 4;            // linear / alpha: ambient dimension of the hyperboloid
  int m = 1;            // linear: number of coordinates kept
  int s = 1;            // alpha: number of coefficients
};

MapFamily instantiate(const FamilyTemplate& templ, std::uint64_t seed);

struct Schedule {
  FamilyTemplate family;
  std::uint64_t seed = 1;
  std::vector<double> xi;
  double kappa = 1.0;
  double epsilon0 = 0.2;
  double ratio = 0.5;
  int steps = 5;
  bool exclude_zero = false;
  Strategy strategy = Strategy::Auto;
};

void validate(const Schedule& s);
std::vector<double> epsilons(const Schedule& s);

struct RunRecord {
  double epsilon = 0.0;
  bool found = false;
  std::int64_t min_height = 0;
  std::uint64_t scanned = 0;
  std::int64_t millis = 0;
  std::uint64_t seed = 0;
  bool ball_too_large = false;

  // Equality ignores the wall clock.
  friend bool operator==(const RunRecord& a, const RunRecord& b) {
    return a.epsilon == b.epsilon && a.found == b.found && a.min_height == b.min_height && a.scanned == b.scanned &&
           a.seed == b.seed && a.ball_too_large == b.ball_too_large;
  }
};

std::vector<RunRecord> run_schedule(const Schedule& s, int workers = 1);

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points_used = 0;
};

/// Least-squares slope of log(min_height) against log(1/epsilon) over the
/// records that found a solution of positive height.
ExponentFit fit_exponent(std::span<const RunRecord> records);

struct SeedResult {
  std::uint64_t seed = 0;
  std::vector<RunRecord> records;
  std::optional<ExponentFit> fit;
  int steps_found = 0;
};

struct CampaignSummary {
  std::vector<SeedResult> runs;
  std::optional<double> median;
  double iqr = 0.0;
  int failures = 0;  // seeds whose records could not be fitted
};

std::uint64_t campaign_seed(std::uint64_t base, std::uint64_t index);

// Instances run concurrently; each search inside is single-threaded.
CampaignSummary sample_campaign(const Schedule& templ, int num_seeds, int workers = 1);

}  // namespace polydens
