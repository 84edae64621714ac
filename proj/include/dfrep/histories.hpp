#pragma once

// Standard-quantum-mechanics histories: time-ordered products of
// Heisenberg-picture projectors and the decoherence functional they generate.
//
// A model with n scheduled times lives on the history space H^{(x)n}. A
// homogeneous history (p_1, ..., p_n) is the projection p_1 (x) ... (x) p_n,
// and its class operator is C_h = p_n(t_n) ... p_1(t_1) with
// p(t) = U(t)^dagger p U(t), U(t) = exp(-i t H).

#include <cstddef>
#include <memory>
#include <vector>

#include "dfrep/linalg.hpp"

namespace dfrep {

class DecoherenceFunctional;

namespace histories {

struct ClassOperatorModel {
  Index dim = 0;
  Matrix rho;
  Matrix hamiltonian;
  std::vector<double> times;
  // One projective decomposition of the identity per time.
  std::vector<std::vector<Projection>> schedules;

  // Throws ValidationError naming the offending field ("rho: trace", ...).
  void validate() const;
  // dim^n; throws DimensionError above kMaxHilbertDim.
  Index history_space_dim() const;
};

struct HomogeneousHistory {
  std::vector<std::size_t> choices;
};

// exp(-i t H) by scaling and squaring.
Matrix propagator(const Matrix& hamiltonian, double t);

Matrix class_operator(const ClassOperatorModel& model, const HomogeneousHistory& h);

// tr(C_h rho C_k^dagger).
cplx history_value(const ClassOperatorModel& model, const HomogeneousHistory& h, const HomogeneousHistory& k);

// p_1 (x) ... (x) p_n on the history space.
Projection history_projection(const ClassOperatorModel& model, const HomogeneousHistory& h);

// Every homogeneous history, first time varying slowest.
std::vector<HomogeneousHistory> all_histories(const ClassOperatorModel& model);

// Linear extension of h -> C_h to all operators on H^{(x)n}:
// C(a_1 (x) ... (x) a_n) = a_n(t_n) ... a_1(t_1).
class ClassOperatorMap {
 public:
  explicit ClassOperatorMap(ClassOperatorModel model);

  const ClassOperatorModel& model() const { return model_; }
  Index history_dim() const { return history_dim_; }

  Matrix apply(const Matrix& x) const;
  // tr(C(x) rho C(y^dagger)^dagger); bilinear, equals tr(C_h rho C_k^dagger) on histories.
  cplx pairing(const Matrix& x, const Matrix& y) const;

 private:
  ClassOperatorModel model_;
  Index history_dim_ = 0;
  std::vector<Matrix> propagators_;
  // Transfer matrices U_{k+1} U_k^dagger between consecutive times.
  std::vector<Matrix> transfers_;
};

DecoherenceFunctional standard_df(ClassOperatorModel model);

// Orthogonal family of projections of rank <= max_rank summing to p.
std::vector<Projection> orthogonal_decompose(const Projection& p, Index max_rank);
// Same, after a random unitary rotation inside the range of p.
std::vector<Projection> orthogonal_decompose(const Projection& p, Index max_rank, Rng& rng);

enum class ConsistencyCriterion {
  weak,    // Re d(h_i, h_j) = 0
  medium,  // |d(h_i, h_j)| = 0
};

struct ConsistencyReport {
  double max_off_diagonal = 0.0;
  std::vector<double> probabilities;
  double probability_sum = 0.0;
  double tolerance = 0.0;
  ConsistencyCriterion criterion = ConsistencyCriterion::weak;
  bool consistent = false;
};

// Throws ValidationError if the set is not pairwise orthogonal.
ConsistencyReport consistency_report(const DecoherenceFunctional& d, const std::vector<Projection>& set,
                                     double tolerance = 1e-9,
                                     ConsistencyCriterion criterion = ConsistencyCriterion::weak);

}  // namespace histories
}  // namespace dfrep
