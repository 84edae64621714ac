#pragma once

// Decoherence functionals d(p, q) on pairs of projections, their axiom
// checker, the bilinear extension D obtained from spectral decompositions,
// the sesquilinear form Q(x, y) = D(x, y^dagger) and the tensor functional
// beta(sum x_i (x) y_i) = sum D(x_i, y_i).

#include <cstdint>
#include <memory>
#include <string_view>
#include <variant>
#include <vector>

#include "dfrep/histories.hpp"
#include "dfrep/linalg.hpp"

namespace dfrep {

// d(p, q) = tr((p (x) q) X).
struct OperatorBacked {
  Matrix x_op;
};

// d(p, q) = <p psi, q psi>.
struct PureState {
  Vector psi;
};

// d(p, q) = Q(p, q) with Q(x, y) = sum_kl x_k G_kl conj(y_l), where x_k are the
// coefficients of x over the matrix units E_ab, k = a * dim + b.
struct FormBacked {
  Matrix gram;
};

struct ClassOperatorBacked {
  std::shared_ptr<const histories::ClassOperatorMap> map;
};

class DecoherenceFunctional {
 public:
  using Backend = std::variant<OperatorBacked, PureState, FormBacked, ClassOperatorBacked>;

  static DecoherenceFunctional operator_backed(Matrix x_op);
  static DecoherenceFunctional pure_state(Vector psi);
  static DecoherenceFunctional form_backed(Matrix gram);
  static DecoherenceFunctional class_operator_backed(histories::ClassOperatorModel model);

  Index dim() const { return dim_; }
  const Backend& backend() const { return backend_; }
  std::string_view kind() const;

  // Throws DimensionError on mismatched projections.
  cplx evaluate(const Projection& p, const Projection& q) const;

 private:
  DecoherenceFunctional(Backend backend, Index dim) : backend_(std::move(backend)), dim_(dim) {}

  Backend backend_;
  Index dim_ = 0;
};

// Matrix-unit Gram matrix of Q for the operator X, and back.
Matrix gram_from_operator(const Matrix& x_op);
Matrix operator_from_gram(const Matrix& gram);

// Re-express d on a space of dimension `dim` through the coordinate
// isometry (zero padding, or truncation). Pure-state truncation must keep
// psi a unit vector. Not defined for class-operator functionals.
DecoherenceFunctional embed(const DecoherenceFunctional& d, Index dim);

struct AxiomReport {
  double hermiticity_residual = 0.0;
  double positivity_min = 0.0;
  double normalization_residual = 0.0;
  double orthoadditivity_residual = 0.0;
  Index samples = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  bool hermiticity_ok = false;
  bool positivity_ok = false;
  bool normalization_ok = false;
  bool orthoadditivity_ok = false;

  bool all_ok() const { return hermiticity_ok && positivity_ok && normalization_ok && orthoadditivity_ok; }
};

// Sampled check of Hermiticity, positivity, normalization and (finite)
// orthoadditivity. Positivity is probed on random projections of every rank
// plus all basis rank-one projections; |Im d(p, p)| counts against
// Hermiticity. Orthoadditivity uses orthogonal families of size 2..dim.
AxiomReport check_axioms(const DecoherenceFunctional& d, Index samples, std::uint64_t seed, double tol = 1e-9);

// Hermitian x split into weighted spectral projections.
struct HermitianSplit {
  std::vector<SpectralTerm> re;
  std::vector<SpectralTerm> im;
};

HermitianSplit spectral_split(const Matrix& x);

class BilinearForm {
 public:
  explicit BilinearForm(DecoherenceFunctional source);

  const DecoherenceFunctional& source() const { return *source_; }
  Index dim() const { return source_->dim(); }

  // D(x, y) = sum_jk lambda_j mu_k d(p_j, q_k) over the Hermitian parts.
  cplx operator()(const Matrix& x, const Matrix& y) const;
  // Same expansion over caller-supplied decompositions (which need not be the
  // canonical spectral ones).
  cplx evaluate(const HermitianSplit& x, const HermitianSplit& y) const;

 private:
  std::shared_ptr<const DecoherenceFunctional> source_;
};

// Throws DimensionExclusionError for dim < 3.
BilinearForm extend_to_bilinear(const DecoherenceFunctional& d);

// Q(x, y) = D(x, y^dagger).
cplx sesquilinear_q(const BilinearForm& form, const Matrix& x, const Matrix& y);

cplx beta(const BilinearForm& form, const ElementaryTensorSum& s);
cplx beta(const DecoherenceFunctional& d, const ElementaryTensorSum& s);

}  // namespace dfrep
