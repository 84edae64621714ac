#pragma once

// Dense complex linear algebra on a truncated Hilbert space H and on H (x) H.
//
// Conventions: inner products are linear in the first slot, <u, v> = v^dagger u.
// On H (x) H the composite index of e_a (x) e_b is a * dim + b, so kron(a, b)
// matches Eigen's KroneckerProduct layout.

#include <complex>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dfrep/errors.hpp"

namespace dfrep {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;
using Rng = std::mt19937_64;

inline constexpr Index kMaxHilbertDim = 64;
inline constexpr Index kMaxProductDim = 4096;
inline constexpr double kProjectionTol = 1e-8;

// An orthogonal projection together with its integer rank.
class Projection {
 public:
  // Validates idempotence, self-adjointness and integral trace against tol
  // (relative to max(1, ||m||_F)).
  static Projection from_matrix(Matrix m, double tol = kProjectionTol);
  // V V^dagger for a matrix with orthonormal columns. Not re-validated.
  static Projection from_orthonormal_columns(const Matrix& columns);
  static Projection zero(Index dim);
  static Projection identity(Index dim);

  const Matrix& matrix() const { return matrix_; }
  Index rank() const { return rank_; }
  Index dim() const { return matrix_.rows(); }

 private:
  Projection(Matrix m, Index rank) : matrix_(std::move(m)), rank_(rank) {}

  Matrix matrix_;
  Index rank_ = 0;
};

// Finite sum of elementary tensors x_i (x) y_i, kept unmaterialized.
struct ElementaryTensorSum {
  std::vector<std::pair<Matrix, Matrix>> terms;

  Index dim() const;
  // Throws ValidationError on an empty list or non-uniform dimensions.
  void validate() const;
  Matrix materialize() const;
};

struct SpectralTerm {
  double eigenvalue = 0.0;
  Projection projection;
};

namespace linalg {

void require_square(const Matrix& m, const char* what);
void require_finite(const Matrix& m, const char* what);

Matrix kron(const Matrix& a, const Matrix& b);

// tr(a x).
cplx trace_pair(const Matrix& a, const Matrix& x);

// tr((p (x) q) x) as a 4-index contraction; p (x) q is never formed.
cplx kron_trace(const Matrix& p, const Matrix& q, const Matrix& x);

// Ascending eigenvalues with their eigenprojections. Eigenvalues closer than
// 1e-8 * ||h|| are merged into one projection.
std::vector<SpectralTerm> spectral_projections(const Matrix& h);

// x = re + i * im with re, im Hermitian.
std::pair<Matrix, Matrix> hermitian_parts(const Matrix& x);

double hermitian_residual(const Matrix& h);

// Schatten-1 norm.
double trace_norm(const Matrix& a);
double operator_norm(const Matrix& a);

Projection rank_one_proj(const Vector& xi);

// U (e_i (x) e_j) = e_j (x) e_i.
Matrix swap_operator(Index d);

// Embeds m into the top-left block of a larger matrix (or truncates it).
Matrix resize_block(const Matrix& m, Index rows, Index cols);

// --- seeded sampling ------------------------------------------------------

// splitmix64 finalizer; used to derive independent per-item streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng);
Vector random_unit_vector(Index dim, Rng& rng);
// Haar unitary via QR of a Ginibre matrix with phase correction.
Matrix random_unitary(Index dim, Rng& rng);
Matrix random_hermitian(Index dim, Rng& rng);
// rho = G G^dagger / tr(G G^dagger).
Matrix random_density_matrix(Index dim, Rng& rng);
Projection random_projection(Index dim, Index rank, Rng& rng);
Projection random_projection(Index dim, Index rank, std::uint64_t seed);

}  // namespace linalg
}  // namespace dfrep
