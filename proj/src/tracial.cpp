#include "dfrep/tracial.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "dfrep/ils.hpp"

namespace dfrep::tracial {

cplx Decomposition::apply(const ElementaryTensorSum& s) const {
  s.validate();
  if (s.dim() != dim) throw DimensionError("decomposition: tensor sum dimension mismatch");
  cplx total = 0.0;
  for (const auto& [x, y] : s.terms) {
    for (const Matrix& xi : x_family) total += linalg::trace_pair(x, xi) * linalg::trace_pair(y, xi.adjoint());
    for (const Matrix& yi : y_family) total -= linalg::trace_pair(x, yi) * linalg::trace_pair(y, yi.adjoint());
  }
  return total;
}

Matrix Decomposition::operator_sum() const {
  Matrix m = Matrix::Zero(dim * dim, dim * dim);
  for (const Matrix& xi : x_family) m += linalg::kron(xi, xi.adjoint());
  for (const Matrix& yi : y_family) m -= linalg::kron(yi, yi.adjoint());
  return m;
}

Decomposition hermitian_form_decomposition(const DecoherenceFunctional& d, Index dim) {
  if (dim != d.dim()) throw DimensionError("hermitian_form_decomposition: dimension differs from the functional's");
  if (dim < 3) throw DimensionExclusionError("hermitian_form_decomposition");

  // G(k, l) = Q(E_k, E_l) = D(E_ab, E_dc) for k = (a, b), l = (c, d).
  const Matrix table = ils::matrix_unit_table(d);
  const Index n = dim;
  Matrix gram(n * n, n * n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c)
        for (Index e = 0; e < n; ++e) gram(a * n + b, c * n + e) = table(a * n + b, e * n + c);

  if (linalg::hermitian_residual(gram) > 1e-8 * std::max(1.0, gram.norm()))
    throw AxiomViolation("hermitian_form_decomposition: Gram matrix is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Matrix> solver((gram + gram.adjoint()) * 0.5);
  const Eigen::VectorXd& evals = solver.eigenvalues();
  const double norm = evals.size() ? evals.cwiseAbs().maxCoeff() : 0.0;
  const double cutoff = 1e-12 * norm;

  Decomposition out;
  out.dim = n;
  std::vector<double> negatives;
  // Eigenvector g over matrix units: (A)_ab = g(a * n + b); X = sqrt|lambda| A^T.
  const auto member = [&](Index k, double weight) {
    Matrix a(n, n);
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c) a(r, c) = solver.eigenvectors()(r * n + c, k);
    return Matrix(std::sqrt(weight) * a.transpose());
  };
  for (Index k = evals.size() - 1; k >= 0; --k) {
    if (evals(k) > cutoff && norm > 0.0) {
      out.x_family.push_back(member(k, evals(k)));
      out.signature.push_back(evals(k));
    }
  }
  for (Index k = 0; k < evals.size(); ++k) {
    if (evals(k) < -cutoff && norm > 0.0) {
      out.y_family.push_back(member(k, -evals(k)));
      negatives.push_back(evals(k));
    }
  }
  out.signature.insert(out.signature.end(), negatives.begin(), negatives.end());
  return out;
}

NotTraciallyBounded::NotTraciallyBounded(probes::TracialEstimate evidence)
    : AxiomViolation("build_tracial_operator: tracial probe failed (sup estimate " + std::to_string(evidence.sup) +
                     " over " + std::to_string(evidence.samples) + " samples)"),
      evidence_(evidence) {}

TracialOperator build_tracial_operator(const DecoherenceFunctional& d, Index dim, const TracialOptions& options) {
  if (dim != d.dim()) throw DimensionError("build_tracial_operator: dimension differs from the functional's");
  if (dim < 3) throw DimensionExclusionError("build_tracial_operator");

  const probes::TracialEstimate estimate = probes::tracial_bound_probe(d, {options.samples, options.seed});
  if (!std::isfinite(estimate.sup) || estimate.sup > options.bound) throw NotTraciallyBounded(estimate);

  TracialOperator out;
  out.source = hermitian_form_decomposition(d, dim);
  out.m_op = out.source.operator_sum();
  out.operator_norm = linalg::operator_norm(out.m_op);
  out.probe = estimate;
  return out;
}

Matrix householder_completion(const Vector& psi) {
  const Index n = psi.size();
  const double mag = std::abs(psi(0));
  const cplx phase = mag > 0.0 ? psi(0) / mag : cplx(1.0);
  // Reflect phase * e_1 onto psi; <phase e_1, psi> is real so one reflector suffices.
  Vector w = psi;
  w(0) -= phase;
  Matrix h = Matrix::Identity(n, n);
  const double wn = w.squaredNorm();
  if (wn > 1e-30) h -= 2.0 * (w * w.adjoint()) / wn;
  Matrix q = h;
  q.col(0) *= phase;
  return q;
}

PureStateOperator pure_state_m(const Vector& psi_in, Index dim) {
  if (dim < 1 || dim > kMaxHilbertDim) throw DimensionError("pure_state_m: dimension must lie in [1, 64]");
  Vector psi = Vector::Zero(dim);
  const Index keep = std::min(dim, psi_in.size());
  psi.head(keep) = psi_in.head(keep);
  if (!psi.allFinite() || std::abs(psi.norm() - 1.0) > kProjectionTol)
    throw ValidationError("pure_state_m: psi is not a unit vector");

  PureStateOperator out;
  out.basis = householder_completion(psi);
  Matrix range(dim * dim, dim);
  for (Index i = 0; i < dim; ++i) {
    Vector v(dim * dim);
    for (Index a = 0; a < dim; ++a) v.segment(a * dim, dim) = psi(a) * out.basis.col(i);
    range.col(i) = v;
  }
  out.range_projection = range * range.adjoint();
  out.pu = out.range_projection * linalg::swap_operator(dim);
  out.isometry_residual = (out.pu * out.pu.adjoint() - out.range_projection).norm();

  const Matrix basis2 = linalg::kron(out.basis, out.basis);
  out.double_sum = 0.0;
  for (Index k = 0; k < dim * dim; ++k) out.double_sum += basis2.col(k).dot(out.pu * basis2.col(k));
  return out;
}

cplx pure_state_series(const PureStateOperator& pure, const Matrix& s) {
  const Index n = pure.basis.rows();
  if (s.rows() != n * n || s.cols() != n * n) throw DimensionError("pure_state_series: dimension mismatch");
  const Vector psi = pure.basis.col(0);
  cplx total = 0.0;
  for (Index i = 0; i < n; ++i) {
    const Vector psi_i = pure.basis.col(i);
    Vector left(n * n), right(n * n);
    for (Index a = 0; a < n; ++a) {
      left.segment(a * n, n) = psi(a) * psi_i;
      right.segment(a * n, n) = psi_i(a) * psi;
    }
    total += right.dot(s * left);
  }
  return total;
}

Matrix reconstruct_from_product_diagonal(const ProductDiagonal& f, Index dim) {
  if (dim < 1 || dim * dim > kMaxProductDim) throw DimensionError("reconstruct_from_product_diagonal: bad dimension");
  const cplx powers[4] = {1.0, cplx(0.0, 1.0), -1.0, cplx(0.0, -1.0)};
  const auto unit = [dim](Index i) {
    Vector e = Vector::Zero(dim);
    e(i) = 1.0;
    return e;
  };
  Matrix l(dim * dim, dim * dim);
  for (Index a = 0; a < dim; ++a)
    for (Index b = 0; b < dim; ++b)
      for (Index c = 0; c < dim; ++c)
        for (Index e = 0; e < dim; ++e) {
          // <L(e_a (x) e_b), e_c (x) e_e> = L(c*dim + e, a*dim + b).
          cplx total = 0.0;
          for (int k = 0; k < 4; ++k)
            for (int m = 0; m < 4; ++m)
              total += powers[(k + m) % 4] * f(unit(a) + powers[k] * unit(c), unit(b) + powers[m] * unit(e));
          l(c * dim + e, a * dim + b) = total / 16.0;
        }
  return l;
}

cplx evaluate_double_sum(const TracialOperator& m, const Projection& p, const Projection& q, Index block_rank) {
  const auto ps = histories::orthogonal_decompose(p, block_rank);
  const auto qs = histories::orthogonal_decompose(q, block_rank);
  cplx total = 0.0;
  for (const Projection& pi : ps)
    for (const Projection& qj : qs) total += linalg::kron_trace(pi.matrix(), qj.matrix(), m.m_op);
  return total;
}

}  // namespace dfrep::tracial
