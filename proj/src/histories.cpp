#include "dfrep/histories.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "dfrep/decoherence.hpp"

namespace dfrep::histories {

namespace {

constexpr double kModelTol = 1e-9;

double scale_of(const Matrix& m) { return std::max(1.0, m.norm()); }

void require_shape(const Matrix& m, Index dim, const std::string& field) {
  if (m.rows() != dim || m.cols() != dim)
    throw ValidationError(field + ": expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  if (!m.allFinite()) throw ValidationError(field + ": non-finite entries");
}

// Mixed-radix digits of a history-space index, first factor most significant.
void digits_of(Index index, Index base, std::vector<Index>& out) {
  for (auto it = out.rbegin(); it != out.rend(); ++it) {
    *it = index % base;
    index /= base;
  }
}

}  // namespace

void ClassOperatorModel::validate() const {
  if (dim < 1 || dim > kMaxHilbertDim) throw ValidationError("dimension: must lie in [1, 64]");
  require_shape(rho, dim, "rho");
  if (linalg::hermitian_residual(rho) > kModelTol * scale_of(rho)) throw ValidationError("rho: not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0)) > kModelTol) throw ValidationError("rho: trace must equal 1");
  Eigen::SelfAdjointEigenSolver<Matrix> rho_spec((rho + rho.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  if (rho_spec.eigenvalues().minCoeff() < -kModelTol) throw ValidationError("rho: not positive semidefinite");

  require_shape(hamiltonian, dim, "hamiltonian");
  if (linalg::hermitian_residual(hamiltonian) > kModelTol * scale_of(hamiltonian))
    throw ValidationError("hamiltonian: not Hermitian");

  if (times.empty()) throw ValidationError("times: at least one time is required");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k])) throw ValidationError("times[" + std::to_string(k) + "]: not finite");
    if (k > 0 && times[k] < times[k - 1]) throw ValidationError("times: not ascending");
  }
  if (schedules.size() != times.size()) throw ValidationError("schedules: need one decomposition per time");

  for (std::size_t k = 0; k < schedules.size(); ++k) {
    const std::string field = "schedules[" + std::to_string(k) + "]";
    const auto& schedule = schedules[k];
    if (schedule.empty()) throw ValidationError(field + ": empty decomposition");
    Matrix total = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      if (schedule[i].dim() != dim) throw ValidationError(field + ": projection dimension mismatch");
      for (std::size_t j = 0; j < i; ++j) {
        if ((schedule[i].matrix() * schedule[j].matrix()).norm() > kModelTol)
          throw ValidationError(field + ": projections not pairwise orthogonal");
      }
      total += schedule[i].matrix();
    }
    if ((total - Matrix::Identity(dim, dim)).norm() > kModelTol)
      throw ValidationError(field + ": projections do not sum to the identity");
  }
  (void)history_space_dim();
}

Index ClassOperatorModel::history_space_dim() const {
  Index n = 1;
  for (std::size_t k = 0; k < times.size(); ++k) {
    n *= dim;
    if (n > kMaxHilbertDim) throw DimensionError("history space dimension exceeds 64");
  }
  return n;
}

Matrix propagator(const Matrix& hamiltonian, double t) {
  const Matrix generator = cplx(0.0, -t) * hamiltonian;
  return generator.exp();
}

Matrix class_operator(const ClassOperatorModel& model, const HomogeneousHistory& h) {
  if (h.choices.size() != model.times.size()) throw ValidationError("history: one choice per time is required");
  Matrix c = Matrix::Identity(model.dim, model.dim);
  for (std::size_t k = 0; k < h.choices.size(); ++k) {
    if (h.choices[k] >= model.schedules[k].size())
      throw ValidationError("history: choice " + std::to_string(k) + " out of range");
    const Projection& p = model.schedules[k][h.choices[k]];
    if (p.rank() == model.dim) continue;  // U^dagger 1 U = 1, kept exact
    const Matrix u = propagator(model.hamiltonian, model.times[k]);
    c = u.adjoint() * p.matrix() * u * c;
  }
  return c;
}

cplx history_value(const ClassOperatorModel& model, const HomogeneousHistory& h, const HomogeneousHistory& k) {
  const Matrix ch = class_operator(model, h);
  const Matrix ck = class_operator(model, k);
  return (ch * model.rho * ck.adjoint()).trace();
}

Projection history_projection(const ClassOperatorModel& model, const HomogeneousHistory& h) {
  if (h.choices.size() != model.times.size()) throw ValidationError("history: one choice per time is required");
  Matrix m = Matrix::Identity(1, 1);
  for (std::size_t k = 0; k < h.choices.size(); ++k) {
    if (h.choices[k] >= model.schedules[k].size())
      throw ValidationError("history: choice " + std::to_string(k) + " out of range");
    const Projection& p = model.schedules[k][h.choices[k]];
    m = linalg::kron(m, p.matrix());
  }
  return Projection::from_matrix(std::move(m));
}

std::vector<HomogeneousHistory> all_histories(const ClassOperatorModel& model) {
  std::vector<HomogeneousHistory> out;
  HomogeneousHistory current{std::vector<std::size_t>(model.schedules.size(), 0)};
  if (model.schedules.empty()) return out;
  while (true) {
    out.push_back(current);
    std::size_t k = current.choices.size();
    while (k > 0) {
      --k;
      if (++current.choices[k] < model.schedules[k].size()) break;
      current.choices[k] = 0;
      if (k == 0) return out;
    }
  }
}

ClassOperatorMap::ClassOperatorMap(ClassOperatorModel model) : model_(std::move(model)) {
  model_.validate();
  history_dim_ = model_.history_space_dim();
  for (double t : model_.times) propagators_.push_back(propagator(model_.hamiltonian, t));
  for (std::size_t k = 0; k + 1 < propagators_.size(); ++k)
    transfers_.push_back(propagators_[k + 1] * propagators_[k].adjoint());
}

Matrix ClassOperatorMap::apply(const Matrix& x) const {
  if (x.rows() != history_dim_ || x.cols() != history_dim_)
    throw DimensionError("class operator map: operand does not act on the history space");
  const Index d = model_.dim;
  const std::size_t n = model_.times.size();
  std::vector<Index> row(n), col(n);
  // Y(i_last, j_first) collects x(I, J) times the transfer overlaps.
  Matrix y = Matrix::Zero(d, d);
  for (Index jj = 0; jj < history_dim_; ++jj) {
    digits_of(jj, d, col);
    for (Index ii = 0; ii < history_dim_; ++ii) {
      const cplx entry = x(ii, jj);
      if (entry == cplx(0.0)) continue;
      digits_of(ii, d, row);
      cplx coef = entry;
      for (std::size_t k = 0; k + 1 < n; ++k) coef *= transfers_[k](col[k + 1], row[k]);
      y(row[n - 1], col[0]) += coef;
    }
  }
  return propagators_.back().adjoint() * y * propagators_.front();
}

cplx ClassOperatorMap::pairing(const Matrix& x, const Matrix& y) const {
  const Matrix cx = apply(x);
  const Matrix cy = apply(y.adjoint());
  return (cx * model_.rho * cy.adjoint()).trace();
}

DecoherenceFunctional standard_df(ClassOperatorModel model) {
  return DecoherenceFunctional::class_operator_backed(std::move(model));
}

namespace {

Matrix range_basis(const Projection& p) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(p.matrix());
  return solver.eigenvectors().rightCols(p.rank());
}

std::vector<Projection> chunk(const Matrix& basis, Index max_rank) {
  std::vector<Projection> out;
  for (Index start = 0; start < basis.cols(); start += max_rank) {
    const Index width = std::min(max_rank, basis.cols() - start);
    out.push_back(Projection::from_orthonormal_columns(basis.middleCols(start, width)));
  }
  return out;
}

}  // namespace

std::vector<Projection> orthogonal_decompose(const Projection& p, Index max_rank) {
  if (max_rank < 1) throw ValidationError("orthogonal_decompose: max_rank must be >= 1");
  if (p.rank() == 0) return {};
  return chunk(range_basis(p), max_rank);
}

std::vector<Projection> orthogonal_decompose(const Projection& p, Index max_rank, Rng& rng) {
  if (max_rank < 1) throw ValidationError("orthogonal_decompose: max_rank must be >= 1");
  if (p.rank() == 0) return {};
  const Matrix basis = range_basis(p) * linalg::random_unitary(p.rank(), rng);
  return chunk(basis, max_rank);
}

ConsistencyReport consistency_report(const DecoherenceFunctional& d, const std::vector<Projection>& set,
                                     double tolerance, ConsistencyCriterion criterion) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i].dim() != d.dim()) throw DimensionError("consistency_report: projection dimension mismatch");
    for (std::size_t j = 0; j < i; ++j) {
      if ((set[i].matrix() * set[j].matrix()).norm() > kProjectionTol)
        throw ValidationError("consistency_report: histories are not pairwise orthogonal");
    }
  }
  ConsistencyReport report;
  report.tolerance = tolerance;
  report.criterion = criterion;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = 0; j < set.size(); ++j) {
      const cplx v = d.evaluate(set[i], set[j]);
      if (i == j) {
        report.probabilities.push_back(v.real());
        report.probability_sum += v.real();
      } else {
        const double off = criterion == ConsistencyCriterion::weak ? std::abs(v.real()) : std::abs(v);
        report.max_off_diagonal = std::max(report.max_off_diagonal, off);
      }
    }
  }
  report.consistent = report.max_off_diagonal <= tolerance;
  return report;
}

}  // namespace dfrep::histories
