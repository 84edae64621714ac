#pragma once

// Generators for valid and deliberately broken operators on H (x) H, plus a
// few small independent oracles shared by the test binaries.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "dfrep/decoherence.hpp"
#include "dfrep/histories.hpp"
#include "dfrep/linalg.hpp"

namespace fx {

using dfrep::cplx;
using dfrep::Index;
using dfrep::Matrix;
using dfrep::Projection;
using dfrep::Rng;
using dfrep::Vector;

inline Matrix unit(Index dim, Index a, Index b) {
  Matrix e = Matrix::Zero(dim, dim);
  e(a, b) = 1.0;
  return e;
}

inline Vector basis(Index dim, Index a) {
  Vector v = Vector::Zero(dim);
  v(a) = 1.0;
  return v;
}

// Explicit permutation matrix, built without linalg::swap_operator.
inline Matrix swap_matrix(Index n) {
  Matrix w = Matrix::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) w(j * n + i, i * n + j) = 1.0;
  return w;
}

inline Matrix naive_kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline cplx naive_kron_trace(const Matrix& p, const Matrix& q, const Matrix& x) {
  return (naive_kron(p, q) * x).trace();
}

inline Matrix density(Index dim, Rng& rng) { return dfrep::linalg::random_density_matrix(dim, rng); }

inline Matrix rho_tensor_rho(const Matrix& rho) { return naive_kron(rho, rho); }

// sum_k w_k rho_k (x) rho_k with convex weights.
inline Matrix product_mixture(Index dim, Rng& rng, int terms = 3) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> w(terms);
  double total = 0.0;
  for (auto& v : w) total += (v = u(rng));
  Matrix x = Matrix::Zero(dim * dim, dim * dim);
  for (int k = 0; k < terms; ++k) x += (w[k] / total) * rho_tensor_rho(density(dim, rng));
  return x;
}

// (R + W R W) / 2 for a random density matrix R on H (x) H.
inline Matrix symmetrized_state(Index dim, Rng& rng) {
  const Matrix r = density(dim * dim, rng);
  const Matrix w = swap_matrix(dim);
  return 0.5 * (r + w * r * w);
}

// sum_i |psi (x) e_i><e_i (x) psi|.
inline Matrix pu_operator(const Vector& psi) {
  const Index n = psi.size();
  Matrix x = Matrix::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i) {
    Vector left = Vector::Zero(n * n), right = Vector::Zero(n * n);
    for (Index a = 0; a < n; ++a) {
      left(a * n + i) = psi(a);
      right(i * n + a) = psi(a);
    }
    x += left * right.adjoint();
  }
  return x;
}

struct NamedOperator {
  std::string name;
  Matrix x;
};

// Valid ILS operators of every flavour at one dimension.
inline std::vector<NamedOperator> valid_operators(Index dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<NamedOperator> out;
  out.push_back({"rho_tensor_rho", rho_tensor_rho(density(dim, rng))});
  out.push_back({"product_mixture", product_mixture(dim, rng)});
  out.push_back({"symmetrized_state", symmetrized_state(dim, rng)});
  out.push_back({"pure_state_pu", pu_operator(dfrep::linalg::random_unit_vector(dim, rng))});
  return out;
}

// 2X: only normalization fails.
inline Matrix corrupt_trace(const Matrix& x) { return 2.0 * x; }

// X + i A (x) A with A Hermitian traceless: breaks swap-adjointness only.
inline Matrix corrupt_swap(const Matrix& x, Index dim, Rng& rng) {
  Matrix a = dfrep::linalg::random_hermitian(dim, rng);
  a -= (a.trace() / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
  a /= a.norm();
  return x + cplx(0.0, 1.0) * naive_kron(a, a);
}

// X + 2 (E11 (x) E11 - E22 (x) E22): negative at p = E22, everything else intact.
inline Matrix corrupt_positivity(const Matrix& x, Index dim) {
  return x + 2.0 * (naive_kron(unit(dim, 0, 0), unit(dim, 0, 0)) - naive_kron(unit(dim, 1, 1), unit(dim, 1, 1)));
}

// exp(-i t H) through the eigendecomposition of H.
inline Matrix spectral_exp(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector phases(h.rows());
  for (Index k = 0; k < h.rows(); ++k) phases(k) = std::exp(cplx(0.0, -t * es.eigenvalues()(k)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Two-time model on C^dim with a basis-projection schedule at both times.
inline dfrep::histories::ClassOperatorModel basis_model(Index dim, const Matrix& rho, const Matrix& hamiltonian,
                                                        std::vector<double> times) {
  dfrep::histories::ClassOperatorModel m;
  m.dim = dim;
  m.rho = rho;
  m.hamiltonian = hamiltonian;
  m.times = std::move(times);
  for (std::size_t k = 0; k < m.times.size(); ++k) {
    std::vector<Projection> schedule;
    for (Index a = 0; a < dim; ++a) schedule.push_back(dfrep::linalg::rank_one_proj(basis(dim, a)));
    m.schedules.push_back(std::move(schedule));
  }
  return m;
}

// Trace norm from the spectrum +-sigma_i of the dilation [[0, a], [a^dagger, 0]];
// independent of any SVD.
inline double gram_trace_norm(const Matrix& a) {
  const Index r = a.rows(), c = a.cols();
  Matrix h = Matrix::Zero(r + c, r + c);
  h.topRightCorner(r, c) = a;
  h.bottomLeftCorner(c, r) = a.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace fx
