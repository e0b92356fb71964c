#include "polydens/forms.hpp"

#include <cmath>
#include <string>

#include "polydens/error.hpp"

namespace polydens {

namespace {

constexpr int kMaxSampleAttempts = 100;
// Below this |det| a uniform sample is rejected; rescaling would blow up the entries.
constexpr double kMinSampleDet = 0.1;

void require_square(const Eigen::MatrixXd& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " must be a non-empty square matrix");
}

}  // namespace

Eigen::MatrixXd ExactMatrix::to_real() const {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = static_cast<double>(at(i, j)) / static_cast<double>(den);
  return m;
}

QuadForm::QuadForm(Eigen::MatrixXd a) : a_(std::move(a)) {
  require_square(a_, "form matrix");
  double scale = std::max(1.0, a_.cwiseAbs().maxCoeff());
  if ((a_ - a_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale)
    throw Error(ErrorKind::InvalidArgument, "form matrix is not symmetric");
  a_ = 0.5 * (a_ + a_.transpose());
  (void)signature(*this);
}

QuadForm::QuadForm(Eigen::MatrixXd a, ExactMatrix exact) : QuadForm(std::move(a)) {
  if (exact.rows != dim() || exact.cols != dim() || exact.den <= 0)
    throw Error(ErrorKind::DimensionMismatch, "exact form representation does not match");
  exact_ = std::move(exact);
}

QuadForm QuadForm::diagonal(std::span<const double> entries) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(entries.size()),
                                            static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = entries[i];
  return QuadForm(std::move(a));
}

QuadForm QuadForm::from_integers(int dim, std::vector<std::int64_t> num, std::int64_t den) {
  if (dim < 1 || num.size() != static_cast<std::size_t>(dim) * dim)
    throw Error(ErrorKind::DimensionMismatch, "integer form needs dim*dim entries");
  if (den <= 0) throw Error(ErrorKind::InvalidArgument, "denominator must be positive");
  ExactMatrix exact{dim, dim, std::move(num), den};
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < i; ++j)
      if (exact.at(i, j) != exact.at(j, i))
        throw Error(ErrorKind::InvalidArgument, "integer form is not symmetric");
  Eigen::MatrixXd real = exact.to_real();
  return QuadForm(std::move(real), std::move(exact));
}

double QuadForm::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) throw Error(ErrorKind::DimensionMismatch, "vector length");
  Eigen::Map<const Eigen::VectorXd> v(x.data(), dim());
  return v.dot(a_ * v);
}

double QuadForm::operator()(std::span<const std::int64_t> x) const {
  if (static_cast<int>(x.size()) != dim()) throw Error(ErrorKind::DimensionMismatch, "vector length");
  Eigen::VectorXd v(dim());
  for (int i = 0; i < dim(); ++i) v(i) = static_cast<double>(x[static_cast<std::size_t>(i)]);
  return v.dot(a_ * v);
}

GroupElement::GroupElement(Eigen::MatrixXd g, std::optional<std::uint64_t> seed)
    : g_(std::move(g)), seed_(seed) {
  require_square(g_, "group element");
  double det = g_.determinant();
  if (std::abs(det - 1.0) > kStructuralTol)
    throw Error(ErrorKind::InvalidArgument, "group element must have determinant 1 (got " + std::to_string(det) + ")");
  inv_ = g_.inverse();
  double residual = (g_ * inv_ - Eigen::MatrixXd::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  if (!std::isfinite(residual) || residual > kStatisticalTol)
    throw Error(ErrorKind::SingularTranslate, "group element is numerically singular");
}

GroupElement GroupElement::identity(int n) { return GroupElement(Eigen::MatrixXd::Identity(n, n)); }

GroupElement GroupElement::operator*(const GroupElement& other) const {
  if (dim() != other.dim()) throw Error(ErrorKind::DimensionMismatch, "group product");
  Eigen::MatrixXd prod = g_ * other.g_;
  // Renormalise so rounding does not push the determinant outside tolerance.
  prod /= std::pow(std::abs(prod.determinant()), 1.0 / dim());
  return GroupElement(std::move(prod));
}

LinearMap::LinearMap(Eigen::MatrixXd f) : f_(std::move(f)) {
  if (f_.rows() < 1 || f_.rows() > f_.cols())
    throw Error(ErrorKind::DimensionMismatch, "linear map needs 1 <= rows <= cols");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(f_);
  lu.setThreshold(kStructuralTol);
  if (lu.rank() != f_.rows()) throw Error(ErrorKind::InvalidArgument, "linear map is not of full rank");
}

LinearMap::LinearMap(ExactMatrix f) : LinearMap(f.to_real()) { exact_ = std::move(f); }

Signature signature(const QuadForm& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q.matrix(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  double norm = ev.cwiseAbs().maxCoeff();
  double threshold = kStructuralTol * norm;
  Signature s;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (norm == 0.0 || std::abs(ev(i)) < threshold)
      throw Error(ErrorKind::NearSingular, "form has an eigenvalue below the zero threshold");
    (ev(i) > 0 ? s.positive : s.negative)++;
  }
  return s;
}

QuadForm translate(const QuadForm& q0, const GroupElement& g) {
  if (q0.dim() != g.dim()) throw Error(ErrorKind::DimensionMismatch, "form and group element dimensions differ");
  const Eigen::MatrixXd& inv = g.inverse();
  Eigen::MatrixXd a = inv.transpose() * q0.matrix() * inv;
  a = 0.5 * (a + a.transpose());
  return QuadForm(std::move(a));
}

GroupElement random_group_element(int n, Rng& rng) {
  if (n < 1) throw Error(ErrorKind::DimensionMismatch, "dimension must be positive");
  for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = rng.uniform(-1.0, 1.0);
    double det = g.determinant();
    if (std::abs(det) < kMinSampleDet) continue;
    if (det < 0) {
      g.row(0) *= -1.0;
      det = -det;
    }
    g /= std::pow(det, 1.0 / n);
    return GroupElement(std::move(g));
  }
  throw Error(ErrorKind::DegenerateSample, "could not sample a well-conditioned group element");
}

GroupElement random_group_element(int n, std::uint64_t seed) {
  Rng rng(seed);
  GroupElement g = random_group_element(n, rng);
  return GroupElement(g.matrix(), seed);
}

GroupElement random_orthogonal_element(const QuadForm& q, std::uint64_t seed, double scale) {
  const int n = q.dim();
  Rng rng(seed);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      k(i, j) = rng.uniform(-scale, scale);
      k(j, i) = -k(i, j);
    }
  Eigen::MatrixXd x = q.matrix().inverse() * k;
  // Scaling and squaring with a Taylor series.
  int squarings = 0;
  double norm = x.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    x /= 2.0;
    norm /= 2.0;
    ++squarings;
  }
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sum = term;
  for (int i = 1; i <= 20; ++i) {
    term = term * x / static_cast<double>(i);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  sum /= std::pow(std::abs(sum.determinant()), 1.0 / n);
  return GroupElement(std::move(sum), seed);
}

QuadForm standard_form(int p, int q, double ell) {
  int n = p + q;
  if (p < 0 || q < 0 || n < 1) throw Error(ErrorKind::InvalidArgument, "bad signature");
  if (ell == 0.0 || (ell < 0) != (q % 2 == 1))
    throw Error(ErrorKind::InvalidArgument, "discriminant sign must equal (-1)^q");
  double scale = std::pow(std::abs(ell), 1.0 / n);
  std::vector<double> diag(static_cast<std::size_t>(n), scale);
  for (int i = p; i < n; ++i) diag[static_cast<std::size_t>(i)] = -scale;
  return QuadForm::diagonal(diag);
}

QuadForm random_form(int p, int q, double ell, std::uint64_t seed) {
  if (p + q < 2) throw Error(ErrorKind::InvalidArgument, "random forms need p + q >= 2");
  QuadForm base = standard_form(p, q, ell);
  return translate(base, random_group_element(p + q, seed));
}

Eigen::MatrixXd kernel_basis(const LinearMap& f) {
  Eigen::MatrixXd r = f.matrix();
  const int m = f.rows();
  const int n = f.cols();
  std::vector<int> pivot_col(static_cast<std::size_t>(m), -1);
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (int row = 0; row < m; ++row) {
    double row_max = r.row(row).cwiseAbs().maxCoeff();
    int col = -1;
    for (int c = n - 1; c >= 0; --c) {
      if (!is_pivot[static_cast<std::size_t>(c)] && std::abs(r(row, c)) > kStructuralTol * row_max) {
        col = c;
        break;
      }
    }
    if (col < 0) throw Error(ErrorKind::InvalidArgument, "linear map is not of full rank");
    r.row(row) /= r(row, col);
    for (int other = 0; other < m; ++other)
      if (other != row && r(other, col) != 0.0) r.row(other) -= r(other, col) * r.row(row);
    pivot_col[static_cast<std::size_t>(row)] = col;
    is_pivot[static_cast<std::size_t>(col)] = true;
  }
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, n - m);
  int k = 0;
  for (int c = 0; c < n; ++c) {
    if (is_pivot[static_cast<std::size_t>(c)]) continue;
    basis(c, k) = 1.0;
    for (int row = 0; row < m; ++row) basis(pivot_col[static_cast<std::size_t>(row)], k) = -r(row, c);
    ++k;
  }
  return basis;
}

QuadForm restrict_form(const QuadForm& q, const LinearMap& f) {
  if (q.dim() != f.cols()) throw Error(ErrorKind::DimensionMismatch, "form and map dimensions differ");
  if (f.rows() >= f.cols()) throw Error(ErrorKind::DegenerateRestriction, "kernel is trivial");
  Eigen::MatrixXd b = kernel_basis(f);
  Eigen::MatrixXd a = b.transpose() * q.matrix() * b;
  a = 0.5 * (a + a.transpose());
  try {
    return QuadForm(std::move(a));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NearSingular)
      throw Error(ErrorKind::DegenerateRestriction, "restriction of the form to ker(F) is singular");
    throw;
  }
}

bool restriction_is_indefinite(const QuadForm& q, const LinearMap& f) {
  try {
    Signature s = signature(restrict_form(q, f));
    return s.positive > 0 && s.negative > 0;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DegenerateRestriction) return false;
    throw;
  }
}

}  // namespace polydens
