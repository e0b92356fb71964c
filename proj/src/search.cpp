#include "polydens/search.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <map>

#include "polydens/error.hpp"
#include "polydens/parallel.hpp"

namespace polydens {

namespace {

using Clock = std::chrono::steady_clock;

bool is_zero(std::span<const std::int64_t> x) {
  return std::all_of(x.begin(), x.end(), [](std::int64_t v) { return v == 0; });
}

Solution make_solution(const SearchProblem& p, std::span<const std::int64_t> x) {
  Solution s;
  s.point = {{x.begin(), x.end()}, height(x)};
  s.value = evaluate(p.family, x);
  s.error = 0;
  for (std::size_t i = 0; i < s.value.values.size(); ++i)
    s.error = std::max(s.error, std::abs(s.value.values[i] - p.xi[i]));
  return s;
}

void finish(const SearchProblem& p, SearchOutcome& out, Clock::time_point start) {
  if (out.found && (!(out.found->error < p.epsilon) || out.found->point.height > out.max_height))
    throw Error(ErrorKind::InvalidArgument, "internal: returned solution failed post-verification");
  out.wall_millis = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

SearchOutcome shell_scan(const SearchProblem& p, const SearchOptions& opts, std::int64_t hmax) {
  auto source = opts.source ? opts.source : std::make_shared<ShellSource>(p.variety, EnumerateOptions{opts.workers});
  source->set_height_limit(hmax + 1);
  const Evaluator ev(p.family);
  const std::size_t none = SIZE_MAX;
  SearchOutcome out;
  out.max_height = hmax;
  std::int64_t h = std::max<std::int64_t>(0, opts.start_height);
  out.shells_completed = h;
  for (; h <= hmax; ++h) {
    auto shell = source->shell(h);
    const std::size_t n = shell->size();
    std::vector<std::size_t> first(static_cast<std::size_t>(std::max(1, opts.workers)), none);
    parallel_blocks(n, opts.workers, [&](std::size_t w, std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        auto x = shell->point(i);
        if (p.exclude_zero && is_zero(x)) continue;
        if (ev.deviation(x, p.xi) < p.epsilon) {
          first[w] = i;
          return;
        }
      }
    });
    out.points_scanned += n;
    out.shells_completed = h + 1;
    std::size_t best = *std::min_element(first.begin(), first.end());
    if (best != none) {
      out.found = make_solution(p, shell->point(best));
      break;
    }
  }
  return out;
}

// Candidate t with |a t^2 + b t + c - xi| < eps, as inclusive integer ranges
// padded by one on each side to absorb rounding in the roots.
void candidate_ranges(double a, double b, double c, double xi, double eps, std::int64_t hmax,
                      std::vector<std::pair<std::int64_t, std::int64_t>>& out) {
  out.clear();
  auto clip = [&](double lo, double hi) {
    if (!(lo <= hi)) return;
    double l = std::max(std::floor(lo) - 1.0, static_cast<double>(-hmax));
    double u = std::min(std::ceil(hi) + 1.0, static_cast<double>(hmax));
    if (l <= u) out.emplace_back(static_cast<std::int64_t>(l), static_cast<std::int64_t>(u));
  };
  const double scale = std::max({std::abs(a), std::abs(b), 1.0});
  if (std::abs(a) <= 1e-12 * scale) {
    if (std::abs(b) <= 1e-12) {
      if (std::abs(c - xi) < eps + 1e-9) clip(static_cast<double>(-hmax), static_cast<double>(hmax));
      return;
    }
    double t1 = (xi - eps - c) / b, t2 = (xi + eps - c) / b;
    clip(std::min(t1, t2), std::max(t1, t2));
    return;
  }
  if (a < 0) {
    a = -a;
    b = -b;
    c = -c;
    xi = -xi;
  }
  // a > 0: Q < xi + eps between the upper roots; Q > xi - eps outside the lower roots.
  auto roots = [&](double level, double& r1, double& r2) {
    double disc = b * b - 4 * a * (c - level);
    if (disc < 0) return false;
    double sq = std::sqrt(disc);
    double q = -0.5 * (b + (b >= 0 ? sq : -sq));
    double x1 = q / a;
    double x2 = q != 0 ? (c - level) / q : x1;
    r1 = std::min(x1, x2);
    r2 = std::max(x1, x2);
    return true;
  };
  double u1, u2, l1, l2;
  if (!roots(xi + eps, u1, u2)) {
    // Vertex is above xi + eps up to rounding; keep the integers next to it.
    double v = -b / (2 * a);
    if (a * v * v + b * v + c - xi < eps + 1e-9) clip(v, v);
    return;
  }
  if (!roots(xi - eps, l1, l2)) {
    clip(u1, u2);
    return;
  }
  clip(u1, l1);
  clip(l2, u2);
}

SearchOutcome root_solve(const SearchProblem& p, const SearchOptions& opts, std::int64_t hmax) {
  const auto& qv = std::get<QuadraticValues>(p.family);
  const Eigen::MatrixXd m = qv.g.inverse().transpose() * qv.q0.matrix() * qv.g.inverse();
  const Evaluator ev(p.family);
  const double xi = p.xi[0];
  const std::int64_t start = std::max<std::int64_t>(0, opts.start_height);
  const int workers = std::max(1, opts.workers);

  SearchOutcome out;
  out.max_height = hmax;
  std::map<std::int64_t, std::vector<std::array<std::int64_t, 3>>> pending;

  for (std::int64_t h = 0; h <= hmax; ++h) {
    // Pairs (x1, x2) with max(|x1|, |x2|) == h, in lexicographic order.
    std::vector<std::array<std::int64_t, 2>> ring;
    for (std::int64_t x1 = -h; x1 <= h; ++x1) {
      if (std::abs(x1) == h) {
        for (std::int64_t x2 = -h; x2 <= h; ++x2) ring.push_back({x1, x2});
      } else {
        ring.push_back({x1, -h});
        if (h != 0) ring.push_back({x1, h});
      }
    }
    std::vector<std::vector<std::array<std::int64_t, 3>>> found(static_cast<std::size_t>(workers));
    std::vector<std::uint64_t> evals(static_cast<std::size_t>(workers), 0);
    parallel_blocks(ring.size(), workers, [&](std::size_t w, std::size_t b, std::size_t e) {
      std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
      for (std::size_t i = b; i < e; ++i) {
        const double x1 = static_cast<double>(ring[i][0]);
        const double x2 = static_cast<double>(ring[i][1]);
        const double a = m(2, 2);
        const double bb = 2 * (m(0, 2) * x1 + m(1, 2) * x2);
        const double c = m(0, 0) * x1 * x1 + 2 * m(0, 1) * x1 * x2 + m(1, 1) * x2 * x2;
        candidate_ranges(a, bb, c, xi, p.epsilon, hmax, ranges);
        std::int64_t last_checked = INT64_MIN;
        for (auto [lo, hi] : ranges) {
          for (std::int64_t t = std::max(lo, last_checked + 1); t <= hi; ++t) {
            last_checked = t;
            std::array<std::int64_t, 3> x{ring[i][0], ring[i][1], t};
            if (std::max(h, std::abs(t)) < start) continue;
            if (p.exclude_zero && h == 0 && t == 0) continue;
            ++evals[w];
            if (ev.deviation(x, p.xi) < p.epsilon) found[w].push_back(x);
          }
        }
      }
    });
    for (std::size_t w = 0; w < found.size(); ++w) {
      out.points_scanned += evals[w];
      for (const auto& x : found[w]) pending[height(x)].push_back(x);
    }
    if (h < start) continue;
    out.shells_completed = h + 1;
    if (auto it = pending.find(h); it != pending.end()) {
      const auto& best = *std::min_element(it->second.begin(), it->second.end());
      out.found = make_solution(p, best);
      break;
    }
  }
  if (!out.found) out.shells_completed = hmax + 1;
  return out;
}

}  // namespace

SearchProblem make_problem(MapFamily family, std::vector<double> xi, double epsilon, double kappa, bool exclude_zero) {
  VarietySpec variety = natural_variety(family);
  return SearchProblem{std::move(family), std::move(variety), std::move(xi), epsilon, kappa, exclude_zero};
}

void validate(const SearchProblem& p) {
  validate(p.family);
  validate(p.variety);
  if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
  if (!(p.kappa > 0.0)) throw Error(ErrorKind::InvalidArgument, "kappa must be positive");
  if (static_cast<int>(p.xi.size()) != value_dim(p.family))
    throw Error(ErrorKind::DimensionMismatch, "target xi has the wrong length for this family");
  if (ambient_dim(p.variety) != Evaluator(p.family).input_dim())
    throw Error(ErrorKind::DimensionMismatch, "variety and family dimensions differ");
}

std::int64_t max_admissible_height(double epsilon, double kappa) {
  const double bound = std::pow(epsilon, -kappa);
  if (!(bound <= kBallGuard))
    throw Error(ErrorKind::BallTooLarge, "eps^-kappa = " + std::to_string(bound) + " exceeds the 1e9 guard");
  return static_cast<std::int64_t>(std::ceil(bound)) - 1;
}

bool supports_root_solve(const SearchProblem& p) {
  const auto* qv = std::get_if<QuadraticValues>(&p.family);
  const auto* fl = std::get_if<FullLattice>(&p.variety);
  return qv && fl && fl->n == 3 && qv->q0.dim() == 3;
}

SearchOutcome solve_system(const SearchProblem& p, const SearchOptions& opts) {
  const auto start = Clock::now();
  validate(p);
  const std::int64_t hmax = max_admissible_height(p.epsilon, p.kappa);
  Strategy strategy = opts.strategy;
  if (strategy == Strategy::Auto) strategy = supports_root_solve(p) ? Strategy::RootSolve : Strategy::ShellScan;
  if (strategy == Strategy::RootSolve && !supports_root_solve(p))
    throw Error(ErrorKind::InvalidArgument, "RootSolve needs quadratic values on Z^3");
  SearchOutcome out = strategy == Strategy::RootSolve ? root_solve(p, opts, hmax) : shell_scan(p, opts, hmax);
  finish(p, out, start);
  return out;
}

bool verify_solution(const SearchProblem& p, const Solution& s) {
  const auto& x = s.point.coords;
  if (!contains(p.variety, x)) return false;
  if (p.exclude_zero && is_zero(x)) return false;
  if (!(static_cast<double>(height(x)) < std::pow(p.epsilon, -p.kappa))) return false;
  // Long-double re-evaluation through Eigen rather than the Evaluator loops.
  using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  std::vector<long double> v;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        auto vec = [&](int n) {
          Eigen::Matrix<long double, Eigen::Dynamic, 1> col(n);
          for (int i = 0; i < n; ++i) col(i) = static_cast<long double>(x[static_cast<std::size_t>(i)]);
          return col;
        };
        auto mat3 = [&] {
          MatL m(3, 3);
          for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = static_cast<long double>(x[static_cast<std::size_t>(i)]);
          return m;
        };
        if constexpr (std::is_same_v<T, QuadraticValues>) {
          auto y = (f.g.inverse().template cast<long double>() * vec(f.q0.dim())).eval();
          v = {y.dot(f.q0.matrix().template cast<long double>() * y)};
        } else if constexpr (std::is_same_v<T, LinearOnQuadric>) {
          auto y = (f.f.matrix().template cast<long double>() * (f.g.inverse().template cast<long double>() * vec(f.f.cols()))).eval();
          v.assign(y.data(), y.data() + y.size());
        } else if constexpr (std::is_same_v<T, CharPoly>) {
          MatL z = f.g1.inverse().template cast<long double>() * mat3() * f.g2.matrix().template cast<long double>();
          long double minors = z(0, 0) * z(1, 1) - z(0, 1) * z(1, 0) + z(0, 0) * z(2, 2) - z(0, 2) * z(2, 0) +
                               z(1, 1) * z(2, 2) - z(1, 2) * z(2, 1);
          v = {-minors, z.trace()};
        } else if constexpr (std::is_same_v<T, GramMap>) {
          MatL y = f.g.inverse().template cast<long double>() * mat3();
          MatL gram = y.transpose() * f.j.matrix().template cast<long double>() * y;
          for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) v.push_back(gram(i, j));
        } else {
          long double s = static_cast<long double>(x.back());
          for (std::size_t i = 0; i < f.alpha.size(); ++i) s -= static_cast<long double>(f.alpha[i]) * x[i];
          v = {s};
        }
      },
      p.family);
  if (v.size() != p.xi.size()) return false;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(std::abs(v[i] - static_cast<long double>(p.xi[i])) < static_cast<long double>(p.epsilon))) return false;
  return true;
}

ScheduleSearch::ScheduleSearch(SearchProblem templ, SearchOptions opts) : problem_(std::move(templ)), opts_(std::move(opts)) {
  if (!opts_.source && !std::holds_alternative<FullLattice>(problem_.variety))
    opts_.source = std::make_shared<ShellSource>(problem_.variety, EnumerateOptions{opts_.workers});
}

SearchOutcome ScheduleSearch::step(double epsilon) {
  if (last_epsilon_ && !(epsilon < *last_epsilon_))
    throw Error(ErrorKind::InvalidArgument, "epsilons must be strictly decreasing");
  problem_.epsilon = epsilon;
  SearchOptions o = opts_;
  o.start_height = std::max(opts_.start_height, lower_bound_);
  SearchOutcome out = solve_system(problem_, o);
  last_epsilon_ = epsilon;
  lower_bound_ = out.found ? out.found->point.height : out.max_height + 1;
  return out;
}

std::vector<ScheduleEntry> min_height_over_schedule(const SearchProblem& templ, std::span<const double> epsilons,
                                                    const SearchOptions& opts) {
  for (std::size_t i = 1; i < epsilons.size(); ++i)
    if (!(epsilons[i] < epsilons[i - 1])) throw Error(ErrorKind::InvalidArgument, "epsilons must be strictly decreasing");
  std::vector<ScheduleEntry> out;
  if (epsilons.empty()) return out;
  ScheduleSearch search(templ, opts);
  for (double eps : epsilons) out.push_back({eps, search.step(eps)});
  return out;
}

}  // namespace polydens
