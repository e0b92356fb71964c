#include "polydens/maps.hpp"

#include <algorithm>
#include <cmath>

#include "polydens/error.hpp"

namespace polydens {

namespace {

std::vector<double> row_major(const Eigen::MatrixXd& m) {
  std::vector<double> out(static_cast<std::size_t>(m.rows() * m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "characteristic polynomial overflow");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "characteristic polynomial overflow");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "characteristic polynomial overflow");
  return r;
}

std::int64_t minor2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return checked_sub(checked_mul(a, d), checked_mul(b, c));
}

}  // namespace

const char* family_tag(const MapFamily& family) {
  switch (family.index()) {
    case 0: return "quadratic";
    case 1: return "linear";
    case 2: return "charpoly";
    case 3: return "gram";
    default: return "alpha";
  }
}

void validate(const MapFamily& family) {
  std::visit(
      [](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, QuadraticValues>) {
          if (f.q0.dim() != f.g.dim()) throw Error(ErrorKind::DimensionMismatch, "form and translation dimensions differ");
        } else if constexpr (std::is_same_v<T, LinearOnQuadric>) {
          if (f.f.cols() != f.g.dim() || f.variety.q.dim() != f.g.dim())
            throw Error(ErrorKind::DimensionMismatch, "linear map, translation and quadric dimensions differ");
        } else if constexpr (std::is_same_v<T, CharPoly>) {
          if (f.g1.dim() != 3 || f.g2.dim() != 3) throw Error(ErrorKind::DimensionMismatch, "CharPoly acts on 3x3 matrices");
          if (f.ell == 0) throw Error(ErrorKind::InvalidArgument, "CharPoly needs ell != 0");
        } else if constexpr (std::is_same_v<T, GramMap>) {
          if (f.g.dim() != 3 || f.j.dim() != 3) throw Error(ErrorKind::DimensionMismatch, "Gram map acts on 3x3 frames");
        } else {
          if (f.n < 4) throw Error(ErrorKind::InvalidArgument, "alpha family needs n >= 4");
          if (f.alpha.empty() || static_cast<int>(f.alpha.size()) > f.n - 1)
            throw Error(ErrorKind::InvalidArgument, "alpha family needs 1 <= s <= n-1");
        }
      },
      family);
}

int value_dim(const MapFamily& family) {
  switch (family.index()) {
    case 0: return 1;
    case 1: return std::get<LinearOnQuadric>(family).f.rows();
    case 2: return 2;
    case 3: return 6;
    default: return 1;
  }
}

FamilyConstants family_constants(const MapFamily& family) {
  FamilyConstants c;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, QuadraticValues>) {
          c = {1, 2, f.q0.dim(), std::nullopt, std::nullopt};
        } else if constexpr (std::is_same_v<T, LinearOnQuadric>) {
          c = {f.f.rows(), 1, f.variety.q.dim() - 2, std::nullopt, std::nullopt};
        } else if constexpr (std::is_same_v<T, CharPoly>) {
          c = {2, 2, 6, std::nullopt, std::nullopt};
        } else if constexpr (std::is_same_v<T, GramMap>) {
          // Q and -Q have the same Gram problem; normalise to p >= q.
          Signature s = signature(f.j);
          int p = std::max(s.positive, s.negative);
          int q = std::min(s.positive, s.negative);
          int n = p + q;
          c = {(n - 1) * (n + 2) / 2, 2, std::nullopt, (p - 1) * q, (n - 1) * (n + 2) / 2};
        } else {
          c = {1, 1, f.n - 2, std::nullopt, std::nullopt};
        }
      },
      family);
  return c;
}

VarietySpec natural_variety(const MapFamily& family) {
  return std::visit(
      [](const auto& f) -> VarietySpec {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, QuadraticValues>) return FullLattice{f.q0.dim()};
        else if constexpr (std::is_same_v<T, LinearOnQuadric>) return f.variety;
        else if constexpr (std::is_same_v<T, CharPoly>) return DetVariety{f.ell};
        else if constexpr (std::is_same_v<T, GramMap>) return unimodular_frames();
        else return hyperboloid(f.n);
      },
      family);
}

Evaluator::Evaluator(const MapFamily& family) {
  validate(family);
  value_dim_ = polydens::value_dim(family);
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, QuadraticValues>) {
          kind_ = Kind::Quadratic;
          n_ = input_dim_ = f.q0.dim();
          inv_ = row_major(f.g.inverse());
          form_ = row_major(f.q0.matrix());
        } else if constexpr (std::is_same_v<T, LinearOnQuadric>) {
          kind_ = Kind::Linear;
          n_ = input_dim_ = f.f.cols();
          inv_ = row_major(f.g.inverse());
          lin_ = row_major(f.f.matrix());
        } else if constexpr (std::is_same_v<T, CharPoly>) {
          kind_ = Kind::CharPoly;
          n_ = 3;
          input_dim_ = 9;
          inv_ = row_major(f.g1.inverse());
          inv2_ = row_major(f.g2.matrix());
        } else if constexpr (std::is_same_v<T, GramMap>) {
          kind_ = Kind::Gram;
          n_ = 3;
          input_dim_ = 9;
          inv_ = row_major(f.g.inverse());
          form_ = row_major(f.j.matrix());
        } else {
          kind_ = Kind::Alpha;
          n_ = input_dim_ = f.n;
          lin_ = f.alpha;
        }
      },
      family);
}

void Evaluator::operator()(std::span<const std::int64_t> x, std::span<double> out) const {
  if (static_cast<int>(x.size()) != input_dim_) throw Error(ErrorKind::DimensionMismatch, "point has wrong dimension");
  if (static_cast<int>(out.size()) < value_dim_) throw Error(ErrorKind::DimensionMismatch, "output buffer too small");
  const int n = n_;
  auto idx = [n](int i, int j) { return static_cast<std::size_t>(i * n + j); };
  switch (kind_) {
    case Kind::Quadratic:
    case Kind::Linear: {
      double y[16];
      std::vector<double> big;
      double* yp = y;
      if (n > 16) {
        big.resize(static_cast<std::size_t>(n));
        yp = big.data();
      }
      for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += inv_[idx(i, j)] * static_cast<double>(x[static_cast<std::size_t>(j)]);
        yp[i] = s;
      }
      if (kind_ == Kind::Quadratic) {
        double q = 0;
        for (int i = 0; i < n; ++i) {
          double row = 0;
          for (int j = 0; j < n; ++j) row += form_[idx(i, j)] * yp[j];
          q += yp[i] * row;
        }
        out[0] = q;
      } else {
        for (int r = 0; r < value_dim_; ++r) {
          double s = 0;
          for (int j = 0; j < n; ++j) s += lin_[static_cast<std::size_t>(r * n + j)] * yp[j];
          out[static_cast<std::size_t>(r)] = s;
        }
      }
      return;
    }
    case Kind::CharPoly:
    case Kind::Gram: {
      // y = g^{-1} x (then x g2 for CharPoly)
      double y[9];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double s = 0;
          for (int k = 0; k < 3; ++k) s += inv_[idx(i, k)] * static_cast<double>(x[static_cast<std::size_t>(3 * k + j)]);
          y[3 * i + j] = s;
        }
      if (kind_ == Kind::CharPoly) {
        double z[9];
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += y[3 * i + k] * inv2_[idx(k, j)];
            z[3 * i + j] = s;
          }
        double minors = (z[0] * z[4] - z[1] * z[3]) + (z[0] * z[8] - z[2] * z[6]) + (z[4] * z[8] - z[5] * z[7]);
        out[0] = -minors;
        out[1] = z[0] + z[4] + z[8];
        return;
      }
      // G = y^T J y
      double jy[9];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double s = 0;
          for (int k = 0; k < 3; ++k) s += form_[idx(i, k)] * y[3 * k + j];
          jy[3 * i + j] = s;
        }
      std::size_t o = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          double s = 0;
          for (int k = 0; k < 3; ++k) s += y[3 * k + i] * jy[3 * k + j];
          out[o++] = s;
        }
      return;
    }
    case Kind::Alpha: {
      double s = static_cast<double>(x[static_cast<std::size_t>(n - 1)]);
      for (std::size_t i = 0; i < lin_.size(); ++i) s -= lin_[i] * static_cast<double>(x[i]);
      out[0] = s;
      return;
    }
  }
}

double Evaluator::deviation(std::span<const std::int64_t> x, std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != value_dim_) throw Error(ErrorKind::DimensionMismatch, "target has wrong dimension");
  double small[8];
  std::vector<double> big;
  double* v = small;
  if (value_dim_ > 8) {
    big.resize(static_cast<std::size_t>(value_dim_));
    v = big.data();
  }
  (*this)(x, std::span<double>(v, static_cast<std::size_t>(value_dim_)));
  double err = 0;
  for (int i = 0; i < value_dim_; ++i) err = std::max(err, std::abs(v[i] - xi[static_cast<std::size_t>(i)]));
  return err;
}

MapValue evaluate(const MapFamily& family, std::span<const std::int64_t> x) {
  Evaluator ev(family);
  MapValue mv;
  mv.values.resize(static_cast<std::size_t>(ev.value_dim()));
  ev(x, mv.values);
  if (std::holds_alternative<GramMap>(family)) {
    mv.matrix.resize(9);
    std::size_t o = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        mv.matrix[static_cast<std::size_t>(3 * i + j)] = mv.values[o];
        mv.matrix[static_cast<std::size_t>(3 * j + i)] = mv.values[o];
        ++o;
      }
  }
  return mv;
}

CharPolyInvariants charpoly_invariants(std::span<const std::int64_t> x) {
  if (x.size() != 9) throw Error(ErrorKind::DimensionMismatch, "characteristic polynomial needs a 3x3 matrix");
  CharPolyInvariants r;
  r.f2 = checked_add(checked_add(x[0], x[4]), x[8]);
  std::int64_t minors = checked_add(checked_add(minor2(x[0], x[1], x[3], x[4]), minor2(x[0], x[2], x[6], x[8])),
                                    minor2(x[4], x[5], x[7], x[8]));
  r.f1 = checked_sub(0, minors);
  std::int64_t d = checked_mul(x[0], minor2(x[4], x[5], x[7], x[8]));
  d = checked_sub(d, checked_mul(x[1], minor2(x[3], x[5], x[6], x[8])));
  d = checked_add(d, checked_mul(x[2], minor2(x[3], x[4], x[6], x[7])));
  r.f0 = d;
  return r;
}

std::vector<std::int64_t> companion_witness(std::int64_t xi1, std::int64_t xi2, std::int64_t ell) {
  return {0, 0, ell, 1, 0, xi1, 0, 1, xi2};
}

}  // namespace polydens
