#include "dfrep/linalg.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include "dfrep/kernels.hpp"

namespace dfrep {

namespace {

double frobenius_scale(const Matrix& m) { return std::max(1.0, m.norm()); }

}  // namespace

Projection Projection::from_matrix(Matrix m, double tol) {
  linalg::require_square(m, "projection");
  linalg::require_finite(m, "projection");
  const double scale = frobenius_scale(m);
  if ((m * m - m).norm() > tol * scale) throw ValidationError("projection: not idempotent");
  if ((m - m.adjoint()).norm() > tol * scale) throw ValidationError("projection: not self-adjoint");
  const cplx tr = m.trace();
  const double rank = std::round(tr.real());
  if (std::abs(tr - cplx(rank)) > tol * scale) throw ValidationError("projection: non-integral trace");
  return Projection(std::move(m), static_cast<Index>(rank));
}

Projection Projection::from_orthonormal_columns(const Matrix& columns) {
  return Projection(columns * columns.adjoint(), columns.cols());
}

Projection Projection::zero(Index dim) { return Projection(Matrix::Zero(dim, dim), 0); }

Projection Projection::identity(Index dim) { return Projection(Matrix::Identity(dim, dim), dim); }

Index ElementaryTensorSum::dim() const { return terms.empty() ? 0 : terms.front().first.rows(); }

void ElementaryTensorSum::validate() const {
  if (terms.empty()) throw ValidationError("tensor sum: no terms");
  const Index n = dim();
  for (const auto& [left, right] : terms) {
    if (left.rows() != n || left.cols() != n || right.rows() != n || right.cols() != n)
      throw ValidationError("tensor sum: non-uniform term dimensions");
  }
}

Matrix ElementaryTensorSum::materialize() const {
  validate();
  const Index n = dim();
  Matrix out = Matrix::Zero(n * n, n * n);
  for (const auto& [left, right] : terms) out += linalg::kron(left, right);
  return out;
}

namespace linalg {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix");
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw ValidationError(std::string(what) + ": non-finite entries");
}

Matrix kron(const Matrix& a, const Matrix& b) {
  require_finite(a, "kron");
  require_finite(b, "kron");
  if (a.rows() * b.rows() > kMaxProductDim || a.cols() * b.cols() > kMaxProductDim)
    throw DimensionError("kron: product dimension exceeds " + std::to_string(kMaxProductDim));
  return Eigen::kroneckerProduct(a, b).eval();
}

cplx trace_pair(const Matrix& a, const Matrix& x) {
  if (a.rows() != x.cols() || a.cols() != x.rows()) throw DimensionError("trace_pair: dimension mismatch");
  // sum_ij a_ij x_ji without forming the product.
  return a.cwiseProduct(x.transpose()).sum();
}

cplx kron_trace(const Matrix& p, const Matrix& q, const Matrix& x) {
  return kernels::parallel::kron_trace(p, q, x);
}

double hermitian_residual(const Matrix& h) { return (h - h.adjoint()).norm(); }

std::vector<SpectralTerm> spectral_projections(const Matrix& h) {
  require_square(h, "spectral_projections");
  require_finite(h, "spectral_projections");
  if (hermitian_residual(h) > kProjectionTol * frobenius_scale(h))
    throw ValidationError("spectral_projections: input is not Hermitian");

  const Matrix sym = (h + h.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  const Eigen::VectorXd& evals = solver.eigenvalues();
  const Matrix& evecs = solver.eigenvectors();
  const Index n = evals.size();
  const double norm = evals.cwiseAbs().maxCoeff();
  const double gap = 1e-8 * norm;

  std::vector<SpectralTerm> out;
  Index start = 0;
  while (start < n) {
    Index stop = start + 1;
    while (stop < n && (norm == 0.0 || evals(stop) - evals(stop - 1) < gap)) ++stop;
    const double mean = evals.segment(start, stop - start).mean();
    out.push_back({mean, Projection::from_orthonormal_columns(evecs.middleCols(start, stop - start))});
    start = stop;
  }
  return out;
}

std::pair<Matrix, Matrix> hermitian_parts(const Matrix& x) {
  Matrix re = (x + x.adjoint()) * 0.5;
  Matrix im = (x - x.adjoint()) * cplx(0.0, -0.5);
  return {std::move(re), std::move(im)};
}

double trace_norm(const Matrix& a) {
  require_finite(a, "trace_norm");
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

double operator_norm(const Matrix& a) {
  require_finite(a, "operator_norm");
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

Projection rank_one_proj(const Vector& xi) {
  if (!xi.allFinite()) throw ValidationError("rank_one_proj: non-finite entries");
  if (std::abs(xi.norm() - 1.0) > kProjectionTol) throw ValidationError("rank_one_proj: vector is not a unit vector");
  return Projection::from_orthonormal_columns(xi);
}

Matrix swap_operator(Index d) {
  if (d < 1) throw DimensionError("swap_operator: dimension must be positive");
  if (d * d > kMaxProductDim) throw DimensionError("swap_operator: dimension too large");
  Matrix u = Matrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) u(j * d + i, i * d + j) = 1.0;
  return u;
}

Matrix resize_block(const Matrix& m, Index rows, Index cols) {
  Matrix out = Matrix::Zero(rows, cols);
  const Index r = std::min(rows, m.rows());
  const Index c = std::min(cols, m.cols());
  out.topLeftCorner(r, c) = m.topLeftCorner(r, c);
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

Vector random_unit_vector(Index dim, Rng& rng) {
  Vector v = gaussian_matrix(dim, 1, rng).col(0);
  return v / v.norm();
}

Matrix random_unitary(Index dim, Rng& rng) {
  const Matrix g = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < dim; ++k) {
    const cplx diag = r(k, k);
    if (std::abs(diag) > 0.0) q.col(k) *= diag / std::abs(diag);
  }
  return q;
}

Matrix random_hermitian(Index dim, Rng& rng) {
  const Matrix g = gaussian_matrix(dim, dim, rng);
  return (g + g.adjoint()) * 0.5;
}

Matrix random_density_matrix(Index dim, Rng& rng) {
  const Matrix g = gaussian_matrix(dim, dim, rng);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

Projection random_projection(Index dim, Index rank, Rng& rng) {
  if (dim < 1) throw DimensionError("random_projection: dimension must be positive");
  if (rank < 0 || rank > dim) throw ValidationError("random_projection: rank must lie in [0, dim]");
  if (rank == 0) return Projection::zero(dim);
  if (rank == dim) return Projection::identity(dim);
  const Matrix g = gaussian_matrix(dim, rank, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ() * Matrix::Identity(dim, rank);
  return Projection::from_orthonormal_columns(q);
}

Projection random_projection(Index dim, Index rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_projection(dim, rank, rng);
}

}  // namespace linalg
}  // namespace dfrep
