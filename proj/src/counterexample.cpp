#include "polydens/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polydens/error.hpp"
#include "polydens/exponents.hpp"
#include "polydens/parallel.hpp"

namespace polydens {

namespace {

double alpha_square(const AlphaInstance& inst, std::span<const std::int64_t> x) {
  double v = inst.xi;
  for (std::size_t i = 0; i < inst.alpha.size(); ++i) v += inst.alpha[i] * static_cast<double>(x[i]);
  return v * v;
}

struct MarginCandidate {
  double margin = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> x;
  std::int64_t z = 0;

  bool better_than(const MarginCandidate& o) const {
    if (margin != o.margin) return margin < o.margin;
    if (o.x.empty()) return true;
    const std::int64_t h = height(x), ho = height(o.x);
    if (h != ho) return h < ho;
    return x > o.x;
  }
};

}  // namespace

void validate(const AlphaInstance& inst) {
  if (inst.n < 4) throw Error(ErrorKind::InvalidArgument, "alpha instance needs n >= 4");
  if (inst.s < 1 || inst.s > inst.n - 1) throw Error(ErrorKind::InvalidArgument, "alpha instance needs 1 <= s <= n-1");
  if (static_cast<int>(inst.alpha.size()) != inst.s) throw Error(ErrorKind::DimensionMismatch, "alpha must have length s");
  if (inst.s >= 2 ? !(inst.sigma > inst.s - 2) : !(inst.sigma > -0.5))
    throw Error(ErrorKind::InvalidArgument, "sigma outside the range sigma_s > s-2 (s>=2), sigma_1 > -1/2");
}

AlphaInstance sample_alpha_instance(int n, int s, double xi, double sigma, std::uint64_t seed) {
  Rng rng(seed);
  AlphaInstance inst{n, s, {}, xi, sigma};
  for (int i = 0; i < s; ++i) inst.alpha.push_back(rng.uniform(1.1, 3.0));
  validate(inst);
  return inst;
}

AlphaFamily alpha_family(const AlphaInstance& inst) { return AlphaFamily{inst.alpha, inst.n}; }

double square_gap(const AlphaInstance& inst, std::span<const std::int64_t> x, std::int64_t z) {
  return std::abs(static_cast<double>(z) - alpha_square(inst, x));
}

MarginReport lemma_margin(const AlphaInstance& inst, std::int64_t x_max, int workers) {
  validate(inst);
  if (x_max < 1) throw Error(ErrorKind::InvalidArgument, "x_max must be >= 1");
  const int s = inst.s;
  const auto side = static_cast<std::size_t>(2 * x_max + 1);
  std::vector<MarginCandidate> best(static_cast<std::size_t>(std::max(1, workers)));
  std::vector<std::uint64_t> tested(best.size(), 0);
  parallel_blocks(side, workers, [&](std::size_t w, std::size_t b, std::size_t e) {
    std::vector<std::int64_t> x(static_cast<std::size_t>(s), -x_max);
    MarginCandidate local;
    std::uint64_t count = 0;
    for (std::size_t o = b; o < e; ++o) {
      x[0] = -x_max + static_cast<std::int64_t>(o);
      std::fill(x.begin() + 1, x.end(), -x_max);
      while (true) {
        const std::int64_t h = height(x);
        if (h > 0) {
          const double w2 = alpha_square(inst, x);
          const std::int64_t zmin = h * h - 1;
          const auto z0 = static_cast<std::int64_t>(std::llround(w2));
          const double scale = std::pow(static_cast<double>(h), inst.sigma);
          bool any = false;
          for (std::int64_t z = z0 - 1; z <= z0 + 1; ++z) {
            if (z < zmin) continue;
            any = true;
            ++count;
            MarginCandidate c{std::abs(static_cast<double>(z) - w2) * scale, x, z};
            if (c.better_than(local)) local = std::move(c);
          }
          if (!any) {
            ++count;
            MarginCandidate c{std::abs(static_cast<double>(zmin) - w2) * scale, x, zmin};
            if (c.better_than(local)) local = std::move(c);
          }
        }
        int i = s - 1;
        while (i >= 1 && x[static_cast<std::size_t>(i)] == x_max) {
          x[static_cast<std::size_t>(i)] = -x_max;
          --i;
        }
        if (i < 1) break;
        ++x[static_cast<std::size_t>(i)];
      }
    }
    best[w] = std::move(local);
    tested[w] = count;
  });
  MarginCandidate overall;
  MarginReport r;
  r.x_max = x_max;
  for (std::size_t w = 0; w < best.size(); ++w) {
    if (best[w].better_than(overall)) overall = best[w];
    r.pairs_tested += tested[w];
  }
  r.min_margin = overall.margin;
  r.argmin_x = overall.x;
  r.argmin_z = overall.z;
  return r;
}

NoSolutionReport verify_no_solutions(const AlphaInstance& inst, double kappa, std::span<const double> epsilons,
                                     const VerifyOptions& opts) {
  validate(inst);
  if (inst.xi == std::floor(inst.xi)) throw Error(ErrorKind::InvalidArgument, "xi must not be an integer");
  if (opts.check_kappa) {
    const double limit = counterexample_thresholds(inst.s, inst.n).nondensity_below.to_double();
    if (!(kappa < limit)) throw Error(ErrorKind::InvalidArgument, "kappa must lie below the non-density threshold");
  }
  NoSolutionReport report;
  report.kappa = kappa;
  if (epsilons.empty()) return report;

  const Quadric variety = hyperboloid(inst.n);
  auto source = opts.source ? opts.source : std::make_shared<ShellSource>(variety, EnumerateOptions{opts.workers});
  if (ambient_dim(source->spec()) != inst.n) throw Error(ErrorKind::DimensionMismatch, "shell cache has the wrong dimension");

  std::int64_t hmax_all = 0;
  for (double eps : epsilons) hmax_all = std::max(hmax_all, max_admissible_height(eps, kappa));
  const double c = lemma_margin(inst, std::max<std::int64_t>(1, hmax_all), opts.workers).min_margin;
  report.margin_constant = c;

  const AlphaFamily family = alpha_family(inst);
  const Evaluator ev(family);
  const std::vector<double> xi{inst.xi};
  for (double eps : epsilons) {
    SearchProblem p{family, variety, xi, eps, kappa, false};
    SearchOptions so;
    so.workers = opts.workers;
    so.source = source;
    SearchOutcome out = solve_system(p, so);

    VerdictRow row;
    row.epsilon = eps;
    row.no_solution = !out.found;
    row.max_height = out.max_height;
    if (out.found) row.witness = out.found->point;
    row.min_deviation = std::numeric_limits<double>::infinity();
    row.chain_min_ratio = std::numeric_limits<double>::infinity();
    for (std::int64_t h = 0; h <= out.max_height; ++h) {
      auto shell = source->shell(h);
      row.points_in_ball += shell->size();
      for (std::size_t i = 0; i < shell->size(); ++i) {
        auto x = shell->point(i);
        row.min_deviation = std::min(row.min_deviation, ev.deviation(x, xi));
        auto head = x.first(static_cast<std::size_t>(inst.s));
        const std::int64_t hs = height(head);
        if (hs == 0) continue;
        std::int64_t z = -1;
        for (int k = 0; k + 1 < inst.n; ++k) z += x[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
        const double lhs = square_gap(inst, head, z) * std::pow(static_cast<double>(hs), inst.sigma);
        const double ratio = c > 0 ? lhs / c : std::numeric_limits<double>::infinity();
        ++row.chain_checked;
        row.chain_min_ratio = std::min(row.chain_min_ratio, ratio);
        if (lhs < c) ++row.chain_violations;
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace polydens
