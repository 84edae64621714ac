#include "dfrep/kernels.hpp"

#include <algorithm>
#include <vector>

#include <omp.h>

namespace dfrep::kernels {
namespace {

// Sum over b, c, d of p(a,b) q(c,d) x(b*nq + d, a*nq + c) for one fixed a.
cplx kron_trace_row(const Matrix& p, const Matrix& q, const Matrix& x, Index a) {
  const Index np = p.rows();
  const Index nq = q.rows();
  cplx row_sum = 0.0;
  for (Index b = 0; b < np; ++b) {
    const cplx pab = p(a, b);
    if (pab == cplx(0.0)) continue;
    cplx inner = 0.0;
    for (Index c = 0; c < nq; ++c) {
      const cplx* col = x.data() + (a * nq + c) * x.rows() + b * nq;
      for (Index d = 0; d < nq; ++d) inner += q(c, d) * col[d];
    }
    row_sum += pab * inner;
  }
  return row_sum;
}

void check_kron_trace(const Matrix& p, const Matrix& q, const Matrix& x) {
  if (p.rows() != p.cols() || q.rows() != q.cols() || x.rows() != x.cols() ||
      x.rows() != p.rows() * q.rows()) {
    throw DimensionError("kron_trace: dim(x) must equal dim(p) * dim(q)");
  }
}

}  // namespace

namespace serial {

cplx kron_trace(const Matrix& p, const Matrix& q, const Matrix& x) {
  check_kron_trace(p, q, x);
  cplx total = 0.0;
  for (Index a = 0; a < p.rows(); ++a) total += kron_trace_row(p, q, x, a);
  return total;
}

Matrix tabulate(Index rows, Index cols, const EntryFn& entry) {
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) out(i, j) = entry(i, j);
  return out;
}

double max_over(Index count, const SampleFn& sample) {
  double best = 0.0;
  for (Index i = 0; i < count; ++i) best = std::max(best, sample(i));
  return best;
}

}  // namespace serial

namespace parallel {

cplx kron_trace(const Matrix& p, const Matrix& q, const Matrix& x) {
  check_kron_trace(p, q, x);
  const Index np = p.rows();
  std::vector<cplx> partial(static_cast<std::size_t>(np));
#pragma omp parallel for schedule(static) if (x.size() > 4096)
  for (Index a = 0; a < np; ++a) partial[static_cast<std::size_t>(a)] = kron_trace_row(p, q, x, a);
  cplx total = 0.0;
  for (const cplx& v : partial) total += v;
  return total;
}

Matrix tabulate(Index rows, Index cols, const EntryFn& entry) {
  Matrix out(rows, cols);
  const Index n = rows * cols;
#pragma omp parallel for schedule(dynamic, 16)
  for (Index k = 0; k < n; ++k) {
    const Index j = k / rows;
    const Index i = k % rows;
    out(i, j) = entry(i, j);
  }
  return out;
}

double max_over(Index count, const SampleFn& sample) {
  double best = 0.0;
#pragma omp parallel for schedule(dynamic, 64) reduction(max : best)
  for (Index i = 0; i < count; ++i) best = std::max(best, sample(i));
  return best;
}

}  // namespace parallel

int max_threads() { return omp_get_max_threads(); }

}  // namespace dfrep::kernels
