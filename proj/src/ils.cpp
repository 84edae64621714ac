#include "dfrep/ils.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dfrep/kernels.hpp"

namespace dfrep::ils {

namespace {

Index factor_dim(const Matrix& x_op) {
  const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(x_op.rows()))));
  if (x_op.rows() != x_op.cols() || n * n != x_op.rows() || n < 1)
    throw DimensionError("ILS operator: expected a square operator on H (x) H");
  return n;
}

}  // namespace

PolarizationBasis polarization_basis(Index dim) {
  if (dim < 1 || dim > kMaxHilbertDim) throw DimensionError("polarization_basis: dimension must lie in [1, 64]");
  PolarizationBasis basis;
  basis.dim = dim;
  basis.unit_terms.resize(static_cast<std::size_t>(dim * dim));
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);

  const auto add = [&](Vector v) {
    basis.projections.push_back(Projection::from_orthonormal_columns(v));
    return static_cast<Index>(basis.projections.size() - 1);
  };
  for (Index a = 0; a < dim; ++a) {
    Vector e = Vector::Zero(dim);
    e(a) = 1.0;
    basis.unit_terms[static_cast<std::size_t>(a * dim + a)].push_back({add(e), 1.0});
  }
  for (Index a = 0; a < dim; ++a) {
    for (Index b = a + 1; b < dim; ++b) {
      const auto vec = [&](cplx phase) {
        Vector v = Vector::Zero(dim);
        v(a) = r;
        v(b) = phase * r;
        return v;
      };
      const Index plus = add(vec(1.0));
      const Index minus = add(vec(-1.0));
      const Index plus_i = add(vec(i));
      const Index minus_i = add(vec(-i));
      basis.unit_terms[static_cast<std::size_t>(a * dim + b)] = {
          {plus, 0.5}, {minus, -0.5}, {plus_i, 0.5 * i}, {minus_i, -0.5 * i}};
      basis.unit_terms[static_cast<std::size_t>(b * dim + a)] = {
          {plus, 0.5}, {minus, -0.5}, {plus_i, -0.5 * i}, {minus_i, 0.5 * i}};
    }
  }
  return basis;
}

Matrix matrix_unit_table(const DecoherenceFunctional& d, bool parallel) {
  const PolarizationBasis basis = polarization_basis(d.dim());
  const auto count = static_cast<Index>(basis.projections.size());
  const kernels::EntryFn values = [&](Index r, Index s) {
    return d.evaluate(basis.projections[static_cast<std::size_t>(r)], basis.projections[static_cast<std::size_t>(s)]);
  };
  const Matrix pair_values =
      parallel ? kernels::parallel::tabulate(count, count, values) : kernels::serial::tabulate(count, count, values);

  const Index units = d.dim() * d.dim();
  const kernels::EntryFn combine = [&](Index k, Index l) {
    cplx total = 0.0;
    for (const auto& [r, cr] : basis.unit_terms[static_cast<std::size_t>(k)])
      for (const auto& [s, cs] : basis.unit_terms[static_cast<std::size_t>(l)]) total += cr * cs * pair_values(r, s);
    return total;
  };
  return parallel ? kernels::parallel::tabulate(units, units, combine)
                  : kernels::serial::tabulate(units, units, combine);
}

Matrix assemble_representer(const DecoherenceFunctional& d, bool parallel) {
  const Index n = d.dim();
  const Matrix table = matrix_unit_table(d, parallel);
  Matrix x(n * n, n * n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c)
        for (Index e = 0; e < n; ++e) x(b * n + e, a * n + c) = table(a * n + b, c * n + e);
  return x;
}

Index ILSOperator::dim() const { return factor_dim(x_op); }

double swap_adjoint_residual(const Matrix& x_op) {
  const Matrix w = linalg::swap_operator(factor_dim(x_op));
  return (x_op - w * x_op.adjoint() * w).norm();
}

double sampled_positivity_min(const Matrix& x_op, Index samples, std::uint64_t seed) {
  const Index n = factor_dim(x_op);
  double best = std::numeric_limits<double>::infinity();
  for (Index a = 0; a < n; ++a) {
    Vector e = Vector::Zero(n);
    e(a) = 1.0;
    const Matrix p = e * e.adjoint();
    best = std::min(best, linalg::kron_trace(p, p, x_op).real());
  }
  for (Index s = 0; s < samples; ++s) {
    Rng rng(linalg::derive_seed(seed, static_cast<std::uint64_t>(s)));
    std::uniform_int_distribution<Index> rank(1, n);
    const Projection p = linalg::random_projection(n, rank(rng), rng);
    best = std::min(best, linalg::kron_trace(p.matrix(), p.matrix(), x_op).real());
  }
  return best;
}

ILSOperator describe_operator(Matrix x_op, const ExtractOptions& options) {
  linalg::require_finite(x_op, "ILS operator");
  (void)factor_dim(x_op);
  ILSOperator out;
  out.trace = x_op.trace();
  out.trace_norm = linalg::trace_norm(x_op);
  out.swap_adjoint_residual = swap_adjoint_residual(x_op);
  if (options.positivity_samples > 0) {
    out.positivity_min_sampled = sampled_positivity_min(x_op, options.positivity_samples, options.seed);
    out.positivity_samples = options.positivity_samples;
    out.positivity_seed = options.seed;
  }
  out.x_op = std::move(x_op);
  return out;
}

ILSOperator extract_ils(const DecoherenceFunctional& d, Index dim, const ExtractOptions& options) {
  if (dim != d.dim()) throw DimensionError("extract_ils: requested dimension differs from the functional's");
  if (dim < 3) throw DimensionExclusionError("extract_ils");
  return describe_operator(assemble_representer(d), options);
}

cplx evaluate_ils(const ILSOperator& x, const Projection& p, const Projection& q) {
  return linalg::kron_trace(p.matrix(), q.matrix(), x.x_op);
}

std::string ConditionReport::failures() const {
  std::string out;
  const auto add = [&](bool ok, const char* name) {
    if (ok) return;
    if (!out.empty()) out += ", ";
    out += name;
  };
  add(swap_adjoint_ok, "(i) swap-adjoint");
  add(positivity_ok, "(ii) positivity");
  add(normalization_ok, "(iii) normalization");
  return out;
}

ConditionReport verify_ils_conditions(const ILSOperator& x, Index samples, std::uint64_t seed, double tol) {
  ConditionReport report;
  report.samples = samples;
  report.seed = seed;
  report.tolerance = tol;
  report.swap_adjoint_residual = swap_adjoint_residual(x.x_op);
  report.positivity_min = sampled_positivity_min(x.x_op, samples, seed);
  report.normalization_residual = std::abs(x.x_op.trace() - cplx(1.0));
  report.swap_adjoint_ok = report.swap_adjoint_residual <= tol;
  report.positivity_ok = report.positivity_min >= -tol;
  report.normalization_ok = report.normalization_residual <= tol;
  return report;
}

DecoherenceFunctional df_from_operator(Matrix x_op, Index samples, std::uint64_t seed, double tol) {
  const ILSOperator described = describe_operator(x_op, {0, seed});
  const ConditionReport report = verify_ils_conditions(described, samples, seed, tol);
  if (!report.all_ok()) throw AxiomViolation("df_from_operator: operator violates " + report.failures());
  return DecoherenceFunctional::operator_backed(std::move(x_op));
}

Matrix functional_to_operator(std::span<const cplx> coefficients, Index dim) {
  if (dim < 1 || static_cast<Index>(coefficients.size()) != dim * dim)
    throw DimensionError("functional_to_operator: expected dim * dim coefficients");
  // tr(E_kl T) = T_lk.
  Matrix t(dim, dim);
  for (Index k = 0; k < dim; ++k)
    for (Index l = 0; l < dim; ++l) {
      const cplx c = coefficients[static_cast<std::size_t>(k * dim + l)];
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw ValidationError("functional_to_operator: non-finite coefficient");
      t(l, k) = c;
    }
  return t;
}

}  // namespace dfrep::ils
