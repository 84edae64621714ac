#include "dfrep/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dfrep/kernels.hpp"

namespace dfrep {

namespace {

Index exact_sqrt(Index n, const char* what) {
  const auto r = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (r * r != n || r < 1) throw DimensionError(std::string(what) + ": dimension is not a perfect square");
  return r;
}

// Row-major coefficient vector of x over the matrix units.
Vector unit_coefficients(const Matrix& x) {
  const Matrix xt = x.transpose();
  return Eigen::Map<const Vector>(xt.data(), xt.size());
}

struct Evaluator {
  const Matrix& p;
  const Matrix& q;

  cplx operator()(const OperatorBacked& b) const { return linalg::kron_trace(p, q, b.x_op); }
  cplx operator()(const PureState& b) const { return (q * b.psi).dot(p * b.psi); }
  cplx operator()(const FormBacked& b) const {
    const Vector vp = unit_coefficients(p);
    const Vector vq = unit_coefficients(q.adjoint());
    return (vp.transpose() * b.gram * vq.conjugate())(0, 0);
  }
  cplx operator()(const ClassOperatorBacked& b) const { return b.map->pairing(p, q); }
};

}  // namespace

DecoherenceFunctional DecoherenceFunctional::operator_backed(Matrix x_op) {
  linalg::require_square(x_op, "operator-backed functional");
  linalg::require_finite(x_op, "operator-backed functional");
  const Index n = exact_sqrt(x_op.rows(), "operator-backed functional");
  if (n > kMaxHilbertDim) throw DimensionError("operator-backed functional: dimension exceeds 64");
  return DecoherenceFunctional(OperatorBacked{std::move(x_op)}, n);
}

DecoherenceFunctional DecoherenceFunctional::pure_state(Vector psi) {
  if (psi.size() < 1 || psi.size() > kMaxHilbertDim) throw DimensionError("pure-state functional: bad dimension");
  if (!psi.allFinite()) throw ValidationError("psi: non-finite entries");
  if (std::abs(psi.norm() - 1.0) > kProjectionTol) throw ValidationError("psi: not a unit vector");
  const Index n = psi.size();
  return DecoherenceFunctional(PureState{std::move(psi)}, n);
}

DecoherenceFunctional DecoherenceFunctional::form_backed(Matrix gram) {
  linalg::require_square(gram, "form-backed functional");
  linalg::require_finite(gram, "form-backed functional");
  const Index n = exact_sqrt(gram.rows(), "form-backed functional");
  if (n > kMaxHilbertDim) throw DimensionError("form-backed functional: dimension exceeds 64");
  return DecoherenceFunctional(FormBacked{std::move(gram)}, n);
}

DecoherenceFunctional DecoherenceFunctional::class_operator_backed(histories::ClassOperatorModel model) {
  auto map = std::make_shared<const histories::ClassOperatorMap>(std::move(model));
  const Index n = map->history_dim();
  return DecoherenceFunctional(ClassOperatorBacked{std::move(map)}, n);
}

std::string_view DecoherenceFunctional::kind() const {
  switch (backend_.index()) {
    case 0: return "operator";
    case 1: return "pure_state";
    case 2: return "form";
    default: return "class_operator";
  }
}

cplx DecoherenceFunctional::evaluate(const Projection& p, const Projection& q) const {
  if (p.dim() != dim_ || q.dim() != dim_) throw DimensionError("evaluate: projection dimension mismatch");
  return std::visit(Evaluator{p.matrix(), q.matrix()}, backend_);
}

Matrix gram_from_operator(const Matrix& x_op) {
  const Index n = exact_sqrt(x_op.rows(), "gram_from_operator");
  Matrix g(n * n, n * n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c)
        for (Index d = 0; d < n; ++d) g(a * n + b, c * n + d) = x_op(b * n + c, a * n + d);
  return g;
}

Matrix operator_from_gram(const Matrix& gram) {
  const Index n = exact_sqrt(gram.rows(), "operator_from_gram");
  Matrix x(n * n, n * n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c)
        for (Index d = 0; d < n; ++d) x(b * n + c, a * n + d) = gram(a * n + b, c * n + d);
  return x;
}

DecoherenceFunctional embed(const DecoherenceFunctional& d, Index dim) {
  if (dim < 1 || dim > kMaxHilbertDim) throw DimensionError("embed: dimension must lie in [1, 64]");
  const Index n = d.dim();
  const Matrix iso = linalg::resize_block(Matrix::Identity(n, n), dim, n);
  const auto embed_operator = [&](const Matrix& x) {
    const Matrix jj = linalg::kron(iso, iso);
    return Matrix(jj * x * jj.adjoint());
  };
  struct Visitor {
    Index dim;
    const Matrix& iso;
    decltype(embed_operator)& embed_op;
    DecoherenceFunctional operator()(const OperatorBacked& b) const {
      return DecoherenceFunctional::operator_backed(embed_op(b.x_op));
    }
    DecoherenceFunctional operator()(const PureState& b) const {
      Vector psi = iso * b.psi;
      if (std::abs(psi.norm() - 1.0) > kProjectionTol)
        throw ValidationError("embed: truncation removes weight from psi");
      return DecoherenceFunctional::pure_state(std::move(psi));
    }
    DecoherenceFunctional operator()(const FormBacked& b) const {
      return DecoherenceFunctional::form_backed(gram_from_operator(embed_op(operator_from_gram(b.gram))));
    }
    DecoherenceFunctional operator()(const ClassOperatorBacked&) const {
      throw ValidationError("embed: not defined for class-operator functionals");
    }
  };
  return std::visit(Visitor{dim, iso, embed_operator}, d.backend());
}

AxiomReport check_axioms(const DecoherenceFunctional& d, Index samples, std::uint64_t seed, double tol) {
  if (samples < 1) throw ValidationError("check_axioms: samples must be >= 1");
  const Index n = d.dim();
  AxiomReport report;
  report.samples = samples;
  report.seed = seed;
  report.tolerance = tol;
  report.positivity_min = std::numeric_limits<double>::infinity();

  const auto diagonal = [&](const Projection& p) {
    const cplx v = d.evaluate(p, p);
    report.positivity_min = std::min(report.positivity_min, v.real());
    report.hermiticity_residual = std::max(report.hermiticity_residual, std::abs(v.imag()));
  };

  for (Index i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e(i) = 1.0;
    diagonal(linalg::rank_one_proj(e));
  }

  for (Index s = 0; s < samples; ++s) {
    Rng rng(linalg::derive_seed(seed, static_cast<std::uint64_t>(s)));
    std::uniform_int_distribution<Index> rank(0, n);
    const Projection p = linalg::random_projection(n, rank(rng), rng);
    const Projection q = linalg::random_projection(n, rank(rng), rng);
    report.hermiticity_residual =
        std::max(report.hermiticity_residual, std::abs(d.evaluate(p, q) - std::conj(d.evaluate(q, p))));
    diagonal(p);

    if (n < 2) continue;
    std::uniform_int_distribution<Index> family_size(2, n);
    const Index m = family_size(rng);
    std::uniform_int_distribution<Index> used_cols(m, n);
    const Index total = used_cols(rng);
    std::vector<Index> sizes(static_cast<std::size_t>(m), 1);
    std::uniform_int_distribution<std::size_t> pick(0, sizes.size() - 1);
    for (Index extra = total - m; extra > 0; --extra) ++sizes[pick(rng)];

    const Matrix v = linalg::random_unitary(n, rng);
    const Projection whole = Projection::from_orthonormal_columns(v.leftCols(total));
    const Projection other = linalg::random_projection(n, rank(rng), rng);
    cplx left_sum = 0.0;
    cplx right_sum = 0.0;
    Index start = 0;
    for (Index size : sizes) {
      const Projection part = Projection::from_orthonormal_columns(v.middleCols(start, size));
      left_sum += d.evaluate(part, other);
      right_sum += d.evaluate(other, part);
      start += size;
    }
    report.orthoadditivity_residual =
        std::max({report.orthoadditivity_residual, std::abs(d.evaluate(whole, other) - left_sum),
                  std::abs(d.evaluate(other, whole) - right_sum)});
  }

  const Projection one = Projection::identity(n);
  report.normalization_residual = std::abs(d.evaluate(one, one) - cplx(1.0));
  diagonal(one);

  report.hermiticity_ok = report.hermiticity_residual <= tol;
  report.positivity_ok = report.positivity_min >= -tol;
  report.normalization_ok = report.normalization_residual <= tol;
  report.orthoadditivity_ok = report.orthoadditivity_residual <= tol;
  return report;
}

HermitianSplit spectral_split(const Matrix& x) {
  const auto [re, im] = linalg::hermitian_parts(x);
  return {linalg::spectral_projections(re), linalg::spectral_projections(im)};
}

BilinearForm::BilinearForm(DecoherenceFunctional source)
    : source_(std::make_shared<const DecoherenceFunctional>(std::move(source))) {}

cplx BilinearForm::operator()(const Matrix& x, const Matrix& y) const {
  if (x.rows() != dim() || x.cols() != dim() || y.rows() != dim() || y.cols() != dim())
    throw DimensionError("bilinear form: operand dimension mismatch");
  return evaluate(spectral_split(x), spectral_split(y));
}

cplx BilinearForm::evaluate(const HermitianSplit& x, const HermitianSplit& y) const {
  const auto part = [&](const std::vector<SpectralTerm>& xs, const std::vector<SpectralTerm>& ys) {
    cplx total = 0.0;
    for (const auto& [lambda, p] : xs) {
      if (lambda == 0.0) continue;
      for (const auto& [mu, q] : ys) {
        if (mu == 0.0) continue;
        total += lambda * mu * source_->evaluate(p, q);
      }
    }
    return total;
  };
  const cplx i(0.0, 1.0);
  return part(x.re, y.re) + i * part(x.re, y.im) + i * part(x.im, y.re) - part(x.im, y.im);
}

BilinearForm extend_to_bilinear(const DecoherenceFunctional& d) {
  if (d.dim() < 3) throw DimensionExclusionError("extend_to_bilinear");
  return BilinearForm(d);
}

cplx sesquilinear_q(const BilinearForm& form, const Matrix& x, const Matrix& y) { return form(x, y.adjoint()); }

cplx beta(const BilinearForm& form, const ElementaryTensorSum& s) {
  s.validate();
  if (s.dim() != form.dim()) throw DimensionError("beta: tensor sum dimension mismatch");
  cplx total = 0.0;
  for (const auto& [x, y] : s.terms) total += form(x, y);
  return total;
}

cplx beta(const DecoherenceFunctional& d, const ElementaryTensorSum& s) { return beta(extend_to_bilinear(d), s); }

}  // namespace dfrep
