#pragma once

// Tracially bounded representations: beta written as
//   beta(S) = sum_i tr(S (X_i (x) X_i^dagger - Y_i (x) Y_i^dagger)),
// the bounded operator M = sum_i (X_i (x) X_i^dagger - Y_i (x) Y_i^dagger)
// with d(p, q) = tr(M (p (x) q)) on finite-rank projections, the PU operator of
// a pure-state functional, and recovery of an operator on H (x) H from its
// product-vector diagonal.

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "dfrep/decoherence.hpp"
#include "dfrep/probes.hpp"

namespace dfrep::tracial {

struct Decomposition {
  Index dim = 0;
  std::vector<Matrix> x_family;
  std::vector<Matrix> y_family;
  // Retained eigenvalues of the Gram matrix: positives first (one per
  // x_family member), then negatives (one per y_family member).
  std::vector<double> signature;

  // sum_i tr(S (X_i (x) X_i^dagger - Y_i (x) Y_i^dagger)) without forming S.
  cplx apply(const ElementaryTensorSum& s) const;
  Matrix operator_sum() const;
};

// Gram matrix of Q over the matrix units, eigendecomposed. Eigenvalues with
// |lambda| < 1e-12 ||G|| are dropped. Throws DimensionExclusionError for
// dim < 3 and AxiomViolation when the Gram matrix is not Hermitian.
Decomposition hermitian_form_decomposition(const DecoherenceFunctional& d, Index dim);

struct TracialOptions {
  Index samples = 1000;
  std::uint64_t seed = 0;
  // The probe passes when the sampled sup is finite and does not exceed this.
  double bound = std::numeric_limits<double>::infinity();
};

class NotTraciallyBounded : public AxiomViolation {
 public:
  explicit NotTraciallyBounded(probes::TracialEstimate evidence);
  const probes::TracialEstimate& evidence() const { return evidence_; }

 private:
  probes::TracialEstimate evidence_;
};

struct TracialOperator {
  Matrix m_op;
  double operator_norm = 0.0;
  Decomposition source;
  probes::TracialEstimate probe;
};

TracialOperator build_tracial_operator(const DecoherenceFunctional& d, Index dim, const TracialOptions& options = {});

struct PureStateOperator {
  Matrix pu;
  // P: projection onto span{psi (x) psi_i}.
  Matrix range_projection;
  // Columns psi_1 = psi, psi_2, ... (Householder completion).
  Matrix basis;
  // sum_ij <PU (psi_i (x) psi_j), psi_i (x) psi_j>.
  cplx double_sum = 0.0;
  // ||(PU)(PU)^dagger - P||_F.
  double isometry_residual = 0.0;
};

// psi is zero-padded (or truncated) to `dim` and must remain a unit vector.
PureStateOperator pure_state_m(const Vector& psi, Index dim);

// Orthonormal basis whose first column is psi.
Matrix householder_completion(const Vector& psi);

// sum_i <S (psi (x) psi_i), psi_i (x) psi>.
cplx pure_state_series(const PureStateOperator& pure, const Matrix& s);

// f(alpha, beta) = <L (alpha (x) beta), alpha (x) beta>.
using ProductDiagonal = std::function<cplx(const Vector&, const Vector&)>;

// Every matrix element via
// <L(a (x) b), a' (x) b'> = 1/16 sum_{k,l=0..3} i^{k+l} f(a + i^k a', b + i^l b').
Matrix reconstruct_from_product_diagonal(const ProductDiagonal& f, Index dim);

// sum_ij tr((p_i (x) q_j) M) over orthogonal blocks of rank <= block_rank.
cplx evaluate_double_sum(const TracialOperator& m, const Projection& p, const Projection& q, Index block_rank);

}  // namespace dfrep::tracial
