#include "polydens/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polydens/error.hpp"
#include "polydens/parallel.hpp"
#include "polydens/rng.hpp"

namespace polydens {

namespace {

double quantile(std::vector<double> sorted, double p) {
  std::sort(sorted.begin(), sorted.end());
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

const char* to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Quadratic: return "quadratic";
    case FamilyKind::CharPoly: return "charpoly";
    case FamilyKind::Gram: return "gram";
    case FamilyKind::Linear: return "linear";
    case FamilyKind::Alpha: return "alpha";
  }
  return "?";
}

FamilyKind parse_family_kind(const std::string& name) {
  for (auto k : {FamilyKind::Quadratic, FamilyKind::CharPoly, FamilyKind::Gram, FamilyKind::Linear, FamilyKind::Alpha})
    if (name == to_string(k)) return k;
  throw Error(ErrorKind::InvalidArgument, "unknown family '" + name + "'");
}

MapFamily instantiate(const FamilyTemplate& t, std::uint64_t seed) {
  Rng rng(seed);
  switch (t.kind) {
    case FamilyKind::Quadratic: {
      const int n = t.p + t.q;
      return QuadraticValues{standard_form(t.p, t.q, t.disc), random_group_element(n, rng.next_u64())};
    }
    case FamilyKind::CharPoly: {
      const std::uint64_t s1 = rng.next_u64();
      const std::uint64_t s2 = rng.next_u64();
      return CharPoly{random_group_element(3, s1), random_group_element(3, s2), t.ell};
    }
    case FamilyKind::Gram:
      return GramMap{random_group_element(3, rng.next_u64()), QuadForm::from_integers(3, {-1, 0, 0, 0, -1, 0, 0, 0, 1})};
    case FamilyKind::Linear: {
      if (t.m < 1 || t.m > t.n - 2) throw Error(ErrorKind::InvalidArgument, "linear family needs 1 <= m <= n-2");
      Quadric variety = hyperboloid(t.n);
      Eigen::MatrixXd f = Eigen::MatrixXd::Zero(t.m, t.n);
      for (int i = 0; i < t.m; ++i) f(i, i) = 1.0;
      return LinearOnQuadric{LinearMap(f), random_orthogonal_element(variety.q, rng.next_u64()), variety};
    }
    case FamilyKind::Alpha: {
      if (t.s < 1 || t.s > t.n - 1) throw Error(ErrorKind::InvalidArgument, "alpha family needs 1 <= s <= n-1");
      std::vector<double> alpha;
      for (int i = 0; i < t.s; ++i) alpha.push_back(rng.uniform(1.1, 3.0));
      return AlphaFamily{alpha, t.n};
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown family kind");
}

void validate(const Schedule& s) {
  if (!(s.epsilon0 > 0.0 && s.epsilon0 < 1.0)) throw Error(ErrorKind::InvalidArgument, "epsilon0 must lie in (0, 1)");
  if (!(s.ratio > 0.0 && s.ratio < 1.0)) throw Error(ErrorKind::InvalidArgument, "ratio must lie in (0, 1)");
  if (s.steps < 0) throw Error(ErrorKind::InvalidArgument, "steps must be non-negative");
  if (!(s.kappa > 0.0)) throw Error(ErrorKind::InvalidArgument, "kappa must be positive");
}

std::vector<double> epsilons(const Schedule& s) {
  std::vector<double> out;
  double eps = s.epsilon0;
  for (int j = 0; j < s.steps; ++j) {
    out.push_back(eps);
    eps *= s.ratio;
  }
  return out;
}

std::vector<RunRecord> run_schedule(const Schedule& s, int workers) {
  validate(s);
  std::vector<RunRecord> records;
  if (s.steps == 0) return records;
  SearchProblem templ = make_problem(instantiate(s.family, s.seed), s.xi, s.epsilon0, s.kappa, s.exclude_zero);
  SearchOptions opts;
  opts.strategy = s.strategy;
  opts.workers = workers;
  ScheduleSearch search(templ, opts);
  for (double eps : epsilons(s)) {
    RunRecord r;
    r.epsilon = eps;
    r.seed = s.seed;
    try {
      SearchOutcome out = search.step(eps);
      r.found = out.found.has_value();
      r.min_height = out.found ? out.found->point.height : 0;
      r.scanned = out.points_scanned;
      r.millis = out.wall_millis;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BallTooLarge) throw;
      r.ball_too_large = true;
    }
    records.push_back(r);
  }
  return records;
}

ExponentFit fit_exponent(std::span<const RunRecord> records) {
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    if (!r.found || r.min_height <= 0) continue;
    xs.push_back(std::log(1.0 / r.epsilon));
    ys.push_back(std::log(static_cast<double>(r.min_height)));
  }
  if (xs.size() < 4) throw Error(ErrorKind::InsufficientData, "exponent fit needs at least 4 found records");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0) throw Error(ErrorKind::InsufficientData, "exponent fit needs distinct epsilons");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.points_used = static_cast<int>(xs.size());
  return fit;
}

std::uint64_t campaign_seed(std::uint64_t base, std::uint64_t index) { return Rng(base).split(index).next_u64(); }

CampaignSummary sample_campaign(const Schedule& templ, int num_seeds, int workers) {
  if (num_seeds < 1) throw Error(ErrorKind::InvalidArgument, "num_seeds must be >= 1");
  validate(templ);
  CampaignSummary summary;
  summary.runs.resize(static_cast<std::size_t>(num_seeds));
  parallel_blocks(summary.runs.size(), workers, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      Schedule s = templ;
      s.seed = campaign_seed(templ.seed, i);
      SeedResult& res = summary.runs[i];
      res.seed = s.seed;
      res.records = run_schedule(s, 1);
      for (const auto& r : res.records) res.steps_found += r.found ? 1 : 0;
      try {
        res.fit = fit_exponent(res.records);
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::InsufficientData) throw;
      }
    }
  });
  std::vector<double> slopes;
  for (const auto& r : summary.runs) {
    if (r.fit)
      slopes.push_back(r.fit->slope);
    else
      ++summary.failures;
  }
  if (!slopes.empty()) {
    summary.median = quantile(slopes, 0.5);
    summary.iqr = quantile(slopes, 0.75) - quantile(slopes, 0.25);
  }
  return summary;
}

}  // namespace polydens
