#include "polydens/varieties.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "polydens/error.hpp"
#include "polydens/parallel.hpp"

namespace polydens {

namespace {

using i128 = __int128;

i128 isqrt128(i128 v) {
  if (v < 0) return -1;
  if (v <= static_cast<i128>(INT64_MAX)) {
    auto u = static_cast<std::uint64_t>(v);
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(u)));
    while (r > 0 && static_cast<unsigned __int128>(r) * r > u) --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= u) ++r;
    return r;
  }
  auto x = static_cast<i128>(std::sqrt(static_cast<long double>(v)));
  // Newton from the floating guess; converges in a couple of steps.
  for (int i = 0; i < 64; ++i) {
    i128 next = (x + v / x) / 2;
    if (next >= x - 1 && next <= x + 1) {
      x = next;
      break;
    }
    x = next;
  }
  while (x * x > v) --x;
  while ((x + 1) * (x + 1) <= v) ++x;
  return x;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

// Inverse of a modulo m (m > 0, gcd(a, m) = 1).
std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
  while (a1 != 0) {
    std::int64_t q = g / a1;
    std::tie(g, a1) = std::make_tuple(a1, g - q * a1);
    std::tie(x, x1) = std::make_tuple(x1, x - q * x1);
  }
  return ((x % m) + m) % m;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Integer data of kd * x^T N x - kn * D = 0 for a quadric with Q = N / D, k = kn / kd.
struct QuadricEquation {
  int n = 0;
  std::vector<std::int64_t> m;  // n*n
  i128 constant = 0;

  explicit QuadricEquation(const Quadric& qd) {
    const auto& ex = qd.q.exact();
    if (!ex) throw Error(ErrorKind::InvalidArgument, "quadric needs an exact rational form");
    n = ex->rows;
    m.resize(static_cast<std::size_t>(n) * n);
    for (std::size_t i = 0; i < m.size(); ++i) {
      i128 v = static_cast<i128>(ex->num[i]) * qd.k.den();
      if (v > INT64_MAX || v < -INT64_MAX) throw Error(ErrorKind::Overflow, "quadric coefficients too large");
      m[i] = static_cast<std::int64_t>(v);
    }
    constant = -static_cast<i128>(qd.k.num()) * ex->den;
  }

  std::int64_t at(int i, int j) const { return m[static_cast<std::size_t>(i) * n + j]; }

  i128 value(std::span<const std::int64_t> x) const {
    i128 s = constant;
    for (int i = 0; i < n; ++i) {
      i128 row = 0;
      for (int j = 0; j < n; ++j) row += static_cast<i128>(at(i, j)) * x[static_cast<std::size_t>(j)];
      s += row * x[static_cast<std::size_t>(i)];
    }
    return s;
  }
};

// Emits points of a variety whose coordinates lie in (-hi, hi) and whose height
// is in [lo, hi). The outermost loop variable is restricted to
// outer_begin + [0, outer_count) so the work can be split into blocks.
class BoxScanner {
 public:
  virtual ~BoxScanner() = default;
  virtual int dim() const = 0;
  // Number of values taken by the outermost loop variable for a box of size hi.
  std::size_t outer_extent(std::int64_t hi) const { return static_cast<std::size_t>(2 * hi - 1); }
  virtual void scan(std::int64_t lo, std::int64_t hi, std::size_t outer_first, std::size_t outer_last,
                    const std::function<void(std::span<const std::int64_t>)>& emit) const = 0;
};

class QuadricScanner final : public BoxScanner {
 public:
  explicit QuadricScanner(const Quadric& qd) : eq_(qd), filter_(qd.filter) {
    n_ = eq_.n;
    for (int i = n_ - 1; i >= 0; --i) {
      if (eq_.at(i, i) != 0) {
        solve_ = i;
        break;
      }
    }
    for (int i = 0; i < n_; ++i)
      if (i != solve_) free_.push_back(i);
  }

  bool has_solve_variable() const { return solve_ >= 0; }
  int dim() const override { return n_; }

  void scan(std::int64_t lo, std::int64_t hi, std::size_t outer_first, std::size_t outer_last,
            const std::function<void(std::span<const std::int64_t>)>& emit) const override {
    if (solve_ < 0) {
      odometer(lo, hi, outer_first, outer_last, emit);
      return;
    }
    std::vector<std::int64_t> x(static_cast<std::size_t>(n_), 0);
    // lin[d][j] = sum over assigned free coords i of M_ij x_i after d assignments.
    std::vector<std::vector<i128>> lin(free_.size() + 1, std::vector<i128>(static_cast<std::size_t>(n_), 0));
    descend(0, 0, lin, x, lo, hi, outer_first, outer_last, emit);
  }

 private:
  void descend(std::size_t depth, i128 acc, std::vector<std::vector<i128>>& lin, std::vector<std::int64_t>& x,
               std::int64_t lo, std::int64_t hi, std::size_t outer_first, std::size_t outer_last,
               const std::function<void(std::span<const std::int64_t>)>& emit) const {
    const int var = free_[depth];
    std::int64_t first = -(hi - 1);
    std::int64_t last = hi - 1;
    if (depth == 0) {
      first = -(hi - 1) + static_cast<std::int64_t>(outer_first);
      last = -(hi - 1) + static_cast<std::int64_t>(outer_last) - 1;
    }
    const auto& cur = lin[depth];
    const std::int64_t mvv = eq_.at(var, var);
    if (depth + 1 == free_.size()) {
      const i128 a = eq_.at(solve_, solve_);
      const std::int64_t msv = eq_.at(solve_, var);
      for (std::int64_t u = first; u <= last; ++u) {
        i128 c = acc + 2 * static_cast<i128>(u) * cur[static_cast<std::size_t>(var)] + static_cast<i128>(mvv) * u * u + eq_.constant;
        i128 b = 2 * (cur[static_cast<std::size_t>(solve_)] + static_cast<i128>(msv) * u);
        i128 disc = b * b - 4 * a * c;
        if (disc < 0) continue;
        i128 r = isqrt128(disc);
        if (r * r != disc) continue;
        x[static_cast<std::size_t>(var)] = u;
        emit_root(-b + r, a, lo, hi, x, emit);
        if (r != 0) emit_root(-b - r, a, lo, hi, x, emit);
      }
      return;
    }
    auto& next = lin[depth + 1];
    for (std::int64_t u = first; u <= last; ++u) {
      x[static_cast<std::size_t>(var)] = u;
      for (int j = 0; j < n_; ++j)
        next[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j)] + static_cast<i128>(eq_.at(var, j)) * u;
      i128 acc2 = acc + 2 * static_cast<i128>(u) * cur[static_cast<std::size_t>(var)] + static_cast<i128>(mvv) * u * u;
      descend(depth + 1, acc2, lin, x, lo, hi, 0, 0, emit);
    }
  }

  void emit_root(i128 numer, i128 a, std::int64_t lo, std::int64_t hi, std::vector<std::int64_t>& x,
                 const std::function<void(std::span<const std::int64_t>)>& emit) const {
    i128 den = 2 * a;
    if (numer % den != 0) return;
    i128 t = numer / den;
    if (t <= -hi || t >= hi) return;
    x[static_cast<std::size_t>(solve_)] = static_cast<std::int64_t>(t);
    std::int64_t h = height(x);
    if (h < lo) return;
    if (filter_ && !filter_->accepts(x)) return;
    emit(x);
  }

  void odometer(std::int64_t lo, std::int64_t hi, std::size_t outer_first, std::size_t outer_last,
                const std::function<void(std::span<const std::int64_t>)>& emit) const {
    std::vector<std::int64_t> x(static_cast<std::size_t>(n_), -(hi - 1));
    for (std::size_t o = outer_first; o < outer_last; ++o) {
      x[0] = -(hi - 1) + static_cast<std::int64_t>(o);
      std::fill(x.begin() + 1, x.end(), -(hi - 1));
      while (true) {
        if (height(x) >= lo && eq_.value(x) == 0 && (!filter_ || filter_->accepts(x))) emit(x);
        int i = n_ - 1;
        while (i >= 1 && x[static_cast<std::size_t>(i)] == hi - 1) {
          x[static_cast<std::size_t>(i)] = -(hi - 1);
          --i;
        }
        if (i < 1) break;
        ++x[static_cast<std::size_t>(i)];
      }
    }
  }

  QuadricEquation eq_;
  std::optional<ComponentFilter> filter_;
  int n_ = 0;
  int solve_ = -1;
  std::vector<int> free_;
};

// det(r1, r2, r3) = (r1 x r2) . r3: scan the first two rows and solve the
// linear equation for the third inside the box.
class DetScanner final : public BoxScanner {
 public:
  explicit DetScanner(std::int64_t ell) : ell_(ell) {}
  int dim() const override { return 9; }

  void scan(std::int64_t lo, std::int64_t hi, std::size_t outer_first, std::size_t outer_last,
            const std::function<void(std::span<const std::int64_t>)>& emit) const override {
    const std::int64_t b = hi - 1;
    std::vector<std::int64_t> x(9, 0);
    for (std::size_t o = outer_first; o < outer_last; ++o) {
      x[0] = -b + static_cast<std::int64_t>(o);
      for (x[1] = -b; x[1] <= b; ++x[1])
        for (x[2] = -b; x[2] <= b; ++x[2])
          for (x[3] = -b; x[3] <= b; ++x[3])
            for (x[4] = -b; x[4] <= b; ++x[4])
              for (x[5] = -b; x[5] <= b; ++x[5]) {
                std::int64_t c[3] = {x[1] * x[5] - x[2] * x[4], x[2] * x[3] - x[0] * x[5], x[0] * x[4] - x[1] * x[3]};
                solve_row(c, lo, hi, x, emit);
              }
    }
  }

 private:
  void solve_row(const std::int64_t (&c)[3], std::int64_t lo, std::int64_t hi, std::vector<std::int64_t>& x,
                 const std::function<void(std::span<const std::int64_t>)>& emit) const {
    const std::int64_t b = hi - 1;
    int k = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(c[i]) > std::abs(c[k])) k = i;
    const std::int64_t ck = c[k];
    if (ck == 0) return;
    const std::int64_t g = gcd64(gcd64(c[0], c[1]), c[2]);
    if (ell_ % g != 0) return;
    const int i = k == 0 ? 1 : 0;
    const int j = k == 2 ? 1 : 2;
    const std::int64_t ci = c[i], cj = c[j];
    const std::int64_t mk = std::abs(ck);
    for (std::int64_t yi = -b; yi <= b; ++yi) {
      const std::int64_t rhs = ell_ - ci * yi;  // cj*yj + ck*yk = rhs
      std::int64_t start = 0, step = 1;
      if (cj == 0) {
        if (rhs % ck != 0) continue;
        start = -b;
      } else {
        const std::int64_t gj = gcd64(cj, mk);
        if (rhs % gj != 0) continue;
        step = mk / gj;
        const std::int64_t residue = step == 1 ? 0
            : static_cast<std::int64_t>((static_cast<i128>(((rhs / gj) % step + step) % step) *
                                         mod_inverse((cj / gj) % step, step)) % step);
        // smallest yj >= -b with yj = residue (mod step)
        start = residue + step * (floor_div(-b - residue + step - 1, step));
      }
      for (std::int64_t yj = start; yj <= b; yj += step) {
        const std::int64_t rest = rhs - cj * yj;
        if (rest % ck != 0) continue;
        const std::int64_t yk = rest / ck;
        if (yk < -b || yk > b) continue;
        x[6 + static_cast<std::size_t>(i)] = yi;
        x[6 + static_cast<std::size_t>(j)] = yj;
        x[6 + static_cast<std::size_t>(k)] = yk;
        if (height(x) >= lo) emit(x);
      }
    }
  }

  std::int64_t ell_;
};

std::unique_ptr<BoxScanner> make_scanner(const VarietySpec& spec, bool allow_fallback, bool& fallback) {
  fallback = false;
  if (const auto* qd = std::get_if<Quadric>(&spec)) {
    auto s = std::make_unique<QuadricScanner>(*qd);
    if (!s->has_solve_variable()) {
      if (!allow_fallback)
        throw Error(ErrorKind::UnsupportedQuadric, "no coordinate has a nonzero pure-square coefficient");
      fallback = true;
    }
    return s;
  }
  if (const auto* dv = std::get_if<DetVariety>(&spec)) return std::make_unique<DetScanner>(dv->ell);
  return nullptr;
}

// Full lattice shell of height h in dimension n, lexicographic order.
void full_shell(int n, std::int64_t h, std::vector<std::int64_t>& x, int pos, bool reached,
                std::vector<std::int64_t>& out) {
  if (pos == n) {
    if (reached || h == 0) out.insert(out.end(), x.begin(), x.end());
    return;
  }
  for (std::int64_t v = -h; v <= h; ++v) {
    bool at_max = v == h || v == -h;
    // If no coordinate can reach h any more, skip interior values.
    if (!reached && !at_max && pos == n - 1) continue;
    x[static_cast<std::size_t>(pos)] = v;
    full_shell(n, h, x, pos + 1, reached || at_max, out);
  }
}

bool lex_less(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

Quadric hyperboloid(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "hyperboloid needs n >= 2");
  std::vector<std::int64_t> num(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) num[static_cast<std::size_t>(i) * n + i] = i + 1 < n ? 1 : -1;
  return Quadric{QuadForm::from_integers(n, std::move(num)), Rational(1), std::nullopt};
}

int ambient_dim(const VarietySpec& spec) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FullLattice>) return v.n;
        else if constexpr (std::is_same_v<T, Quadric>) return v.q.dim();
        else return 9;
      },
      spec);
}

void validate(const VarietySpec& spec) {
  if (const auto* fl = std::get_if<FullLattice>(&spec)) {
    if (fl->n < 1) throw Error(ErrorKind::InvalidArgument, "lattice dimension must be positive");
  } else if (const auto* qd = std::get_if<Quadric>(&spec)) {
    if (!qd->q.exact()) throw Error(ErrorKind::InvalidArgument, "quadric needs an exact rational form");
    if (qd->filter && (qd->filter->coord < 0 || qd->filter->coord >= qd->q.dim() || qd->filter->sign == 0))
      throw Error(ErrorKind::InvalidArgument, "bad component filter");
  } else if (const auto* dv = std::get_if<DetVariety>(&spec)) {
    if (dv->ell == 0) throw Error(ErrorKind::InvalidArgument, "determinant variety needs ell != 0");
  }
}

std::int64_t height(std::span<const std::int64_t> x) noexcept {
  std::int64_t h = 0;
  for (auto v : x) h = std::max(h, v < 0 ? -v : v);
  return h;
}

bool contains(const VarietySpec& spec, std::span<const std::int64_t> x) {
  if (static_cast<int>(x.size()) != ambient_dim(spec)) return false;
  if (std::holds_alternative<FullLattice>(spec)) return true;
  if (const auto* qd = std::get_if<Quadric>(&spec)) {
    if (qd->filter && !qd->filter->accepts(x)) return false;
    return QuadricEquation(*qd).value(x) == 0;
  }
  const auto& dv = std::get<DetVariety>(spec);
  i128 det = static_cast<i128>(x[0]) * (static_cast<i128>(x[4]) * x[8] - static_cast<i128>(x[5]) * x[7]) -
             static_cast<i128>(x[1]) * (static_cast<i128>(x[3]) * x[8] - static_cast<i128>(x[5]) * x[6]) +
             static_cast<i128>(x[2]) * (static_cast<i128>(x[3]) * x[7] - static_cast<i128>(x[4]) * x[6]);
  return det == dv.ell;
}

ShellSource::ShellSource(VarietySpec spec, EnumerateOptions opts) : spec_(std::move(spec)), opts_(opts) {
  validate(spec_);
  dim_ = ambient_dim(spec_);
  make_scanner(spec_, opts_.allow_fallback, fallback_);
}

std::shared_ptr<const Shell> ShellSource::shell(std::int64_t h) {
  if (h < 0) throw Error(ErrorKind::InvalidArgument, "negative shell index");
  if (const auto* fl = std::get_if<FullLattice>(&spec_)) {
    auto s = std::make_shared<Shell>();
    s->height = h;
    s->dim = fl->n;
    std::vector<std::int64_t> x(static_cast<std::size_t>(fl->n), 0);
    full_shell(fl->n, h, x, 0, false, s->data);
    return s;
  }
  if (h >= materialized_) grow_to(h + 1);
  return cache_[static_cast<std::size_t>(h)];
}

void ShellSource::grow_to(std::int64_t target) {
  std::int64_t hi = std::max({target, 2 * materialized_, std::int64_t{4}});
  if (limit_ != INT64_MAX) hi = std::min(hi, std::max(limit_, target));
  const std::int64_t lo = materialized_;
  bool unused = false;
  auto scanner = make_scanner(spec_, opts_.allow_fallback, unused);
  std::vector<std::vector<std::int64_t>> parts(static_cast<std::size_t>(std::max(1, opts_.workers)));
  parallel_blocks(scanner->outer_extent(hi), opts_.workers, [&](std::size_t w, std::size_t b, std::size_t e) {
    auto& out = parts[w];
    scanner->scan(lo, hi, b, e, [&](std::span<const std::int64_t> p) { out.insert(out.end(), p.begin(), p.end()); });
  });
  std::vector<std::shared_ptr<Shell>> fresh;
  for (std::int64_t h = lo; h < hi; ++h) {
    auto s = std::make_shared<Shell>();
    s->height = h;
    s->dim = dim_;
    fresh.push_back(std::move(s));
  }
  const auto d = static_cast<std::size_t>(dim_);
  for (const auto& part : parts)
    for (std::size_t i = 0; i + d <= part.size(); i += d) {
      std::span<const std::int64_t> p(part.data() + i, d);
      auto& data = fresh[static_cast<std::size_t>(height(p) - lo)]->data;
      data.insert(data.end(), p.begin(), p.end());
    }
  for (auto& s : fresh) {
    std::vector<std::size_t> order(s->size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lex_less(s->point(a), s->point(b)); });
    std::vector<std::int64_t> sorted;
    sorted.reserve(s->data.size());
    for (auto idx : order) {
      auto p = s->point(idx);
      sorted.insert(sorted.end(), p.begin(), p.end());
    }
    s->data = std::move(sorted);
    cache_.push_back(std::move(s));
  }
  materialized_ = hi;
}

void enumerate(const VarietySpec& spec, std::int64_t T, const std::function<void(std::span<const std::int64_t>)>& visit,
               EnumerateOptions opts) {
  if (T < 1) throw Error(ErrorKind::InvalidArgument, "height bound must be >= 1");
  ShellSource source(spec, opts);
  source.set_height_limit(T);
  for (std::int64_t h = 0; h < T; ++h) {
    auto s = source.shell(h);
    for (std::size_t i = 0; i < s->size(); ++i) visit(s->point(i));
  }
}

std::vector<LatticePoint> enumerate_points(const VarietySpec& spec, std::int64_t T, EnumerateOptions opts) {
  std::vector<LatticePoint> out;
  enumerate(spec, T, [&](std::span<const std::int64_t> p) { out.push_back({{p.begin(), p.end()}, height(p)}); }, opts);
  return out;
}

CountRecord count_points(const VarietySpec& spec, std::int64_t T, EnumerateOptions opts) {
  if (T < 1) throw Error(ErrorKind::InvalidArgument, "height bound must be >= 1");
  validate(spec);
  if (const auto* fl = std::get_if<FullLattice>(&spec)) {
    std::uint64_t side = static_cast<std::uint64_t>(2 * T - 1);
    std::uint64_t total = 1;
    for (int i = 0; i < fl->n; ++i) {
      if (total > UINT64_MAX / side) throw Error(ErrorKind::Overflow, "lattice count exceeds 64 bits");
      total *= side;
    }
    return {T, total};
  }
  bool fallback = false;
  auto scanner = make_scanner(spec, opts.allow_fallback, fallback);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(std::max(1, opts.workers)), 0);
  parallel_blocks(scanner->outer_extent(T), opts.workers, [&](std::size_t w, std::size_t b, std::size_t e) {
    std::uint64_t local = 0;
    scanner->scan(0, T, b, e, [&](std::span<const std::int64_t>) { ++local; });
    counts[w] = local;
  });
  return {T, std::accumulate(counts.begin(), counts.end(), std::uint64_t{0})};
}

GrowthFit growth_exponent(std::span<const CountRecord> records) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : records)
    if (r.count > 0 && r.T >= 1) pts.emplace_back(std::log(static_cast<double>(r.T)), std::log(static_cast<double>(r.count)));
  if (pts.size() < 4) throw Error(ErrorKind::InsufficientData, "growth fit needs at least 4 records with count > 0");
  double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0, sxy = 0, syy = 0;
  for (auto [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0) throw Error(ErrorKind::InsufficientData, "growth fit needs distinct heights");
  GrowthFit fit;
  fit.a = sxy / sxx;
  fit.intercept = my - fit.a * mx;
  fit.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace polydens
