#pragma once

// Trace-class (ILS) representation d(p, q) = tr((p (x) q) X) at finite
// truncation: extraction of X from d, the three operator conditions, the
// inverse map X -> d, and the trace-pairing duality phi(z) = tr(z T).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dfrep/decoherence.hpp"

namespace dfrep::ils {

// Rank-one projections onto e_a, (e_a +- e_b)/sqrt2 and (e_a +- i e_b)/sqrt2,
// together with the coefficients expressing each matrix unit E_ab through them:
// E_ab = 1/2 [(p+ - p-) + i (p+i - p-i)] for a < b,
// E_ba = 1/2 [(p+ - p-) - i (p+i - p-i)],  E_aa = p_{e_a}.
struct PolarizationBasis {
  struct Term {
    Index projection;
    cplx coefficient;
  };

  Index dim = 0;
  std::vector<Projection> projections;
  // unit_terms[a * dim + b] expands E_ab.
  std::vector<std::vector<Term>> unit_terms;
};

PolarizationBasis polarization_basis(Index dim);

// T(a * n + b, c * n + d) = D(E_ab, E_cd), assembled in closed form from d on
// pairs of polarization projections. No dimension gate.
Matrix matrix_unit_table(const DecoherenceFunctional& d, bool parallel = true);

// X with tr((x (x) y) X) = D(x, y): X(b * n + d, a * n + c) = D(E_ab, E_cd).
// No dimension gate; extract_ils is the checked entry point.
Matrix assemble_representer(const DecoherenceFunctional& d, bool parallel = true);

struct ILSOperator {
  Matrix x_op;
  cplx trace = 0.0;
  double trace_norm = 0.0;
  // ||X - W X^dagger W||_F with W the swap operator.
  double swap_adjoint_residual = 0.0;
  std::optional<double> positivity_min_sampled;
  Index positivity_samples = 0;
  std::uint64_t positivity_seed = 0;

  Index dim() const;
};

struct ExtractOptions {
  Index positivity_samples = 64;
  std::uint64_t seed = 0;
};

// Diagnostics for an arbitrary operator on H (x) H.
ILSOperator describe_operator(Matrix x_op, const ExtractOptions& options = {});

// Throws DimensionExclusionError for dim < 3 and DimensionError when dim
// differs from d.dim().
ILSOperator extract_ils(const DecoherenceFunctional& d, Index dim, const ExtractOptions& options = {});

cplx evaluate_ils(const ILSOperator& x, const Projection& p, const Projection& q);

double swap_adjoint_residual(const Matrix& x_op);

// min Re tr((p (x) p) X) over basis rank-one projections and `samples` seeded
// random projections of ranks 1..dim.
double sampled_positivity_min(const Matrix& x_op, Index samples, std::uint64_t seed);

struct ConditionReport {
  double swap_adjoint_residual = 0.0;
  double positivity_min = 0.0;
  double normalization_residual = 0.0;
  Index samples = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  bool swap_adjoint_ok = false;
  bool positivity_ok = false;
  bool normalization_ok = false;

  bool all_ok() const { return swap_adjoint_ok && positivity_ok && normalization_ok; }
  // e.g. "(i) swap-adjoint, (iii) normalization"; empty when all pass.
  std::string failures() const;
};

ConditionReport verify_ils_conditions(const ILSOperator& x, Index samples, std::uint64_t seed, double tol = 1e-8);

// Operator-backed functional for X; throws AxiomViolation naming the failed
// conditions.
DecoherenceFunctional df_from_operator(Matrix x_op, Index samples = 200, std::uint64_t seed = 0, double tol = 1e-8);

// T with phi(z) = tr(z T), given phi(E_kl) as coefficients[k * dim + l].
Matrix functional_to_operator(std::span<const cplx> coefficients, Index dim);

}  // namespace dfrep::ils
