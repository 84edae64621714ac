#include <doctest.h>

#include "dfrep/linalg.hpp"
#include "support/fixtures.hpp"

using namespace dfrep;
using fx::unit;

TEST_CASE("kron of identities and matrix units") {
  CHECK(linalg::kron(Matrix::Identity(2, 2), Matrix::Identity(2, 2)).isApprox(Matrix::Identity(4, 4)));
  const Matrix e = linalg::kron(unit(2, 0, 0), unit(2, 0, 0));
  CHECK(e(0, 0) == cplx(1.0));
  CHECK(e.cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("kron acts factorwise on product vectors") {
  Rng rng(3);
  const Matrix a = linalg::gaussian_matrix(3, 3, rng), b = linalg::gaussian_matrix(2, 2, rng);
  const Matrix ab = linalg::kron(a, b);
  for (Index h = 0; h < 3; ++h)
    for (Index f = 0; f < 2; ++f) {
      const Vector lhs = ab * fx::naive_kron(fx::basis(3, h), fx::basis(2, f));
      const Vector rhs = fx::naive_kron(a * fx::basis(3, h), b * fx::basis(2, f));
      CHECK((lhs - rhs).norm() < 1e-13);
    }
}

TEST_CASE("kron rejects products above the dimension limit") {
  CHECK_THROWS_AS(linalg::kron(Matrix::Identity(65, 65), Matrix::Identity(64, 64)), DimensionError);
}

TEST_CASE("trace_pair") {
  CHECK(linalg::trace_pair(Matrix::Identity(5, 5), Matrix::Identity(5, 5)) == cplx(5.0));
  CHECK(linalg::trace_pair(unit(3, 0, 1), unit(3, 1, 0)) == cplx(1.0));
}

TEST_CASE("kron_trace special cases") {
  Rng rng(11);
  const Matrix x = linalg::gaussian_matrix(9, 9, rng);
  CHECK(std::abs(linalg::kron_trace(Matrix::Identity(3, 3), Matrix::Identity(3, 3), x) - x.trace()) < 1e-12);
  CHECK(linalg::kron_trace(unit(2, 0, 0), unit(2, 0, 0), Matrix::Identity(4, 4)) == cplx(1.0));
}

TEST_CASE("kron_trace matches materialized kron for sampled inputs") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng(seed);
    const Index n = 2 + static_cast<Index>(seed % 6);
    const Matrix p = linalg::gaussian_matrix(n, n, rng), q = linalg::gaussian_matrix(n, n, rng);
    const Matrix x = linalg::gaussian_matrix(n * n, n * n, rng);
    const cplx oracle = fx::naive_kron_trace(p, q, x);
    CHECK(std::abs(linalg::kron_trace(p, q, x) - oracle) <= 1e-10 * std::max(1.0, std::abs(oracle)));
  }
}

TEST_CASE("spectral_projections") {
  SUBCASE("diag(1,1,0)") {
    Matrix h = Matrix::Zero(3, 3);
    h(0, 0) = h(1, 1) = 1.0;
    const auto terms = linalg::spectral_projections(h);
    REQUIRE(terms.size() == 2);
    CHECK(terms[0].eigenvalue == doctest::Approx(0.0));
    CHECK(fx::max_abs(terms[0].projection.matrix() - unit(3, 2, 2)) < 1e-12);
    CHECK(terms[1].eigenvalue == doctest::Approx(1.0));
    CHECK(fx::max_abs(terms[1].projection.matrix() - (unit(3, 0, 0) + unit(3, 1, 1))) < 1e-12);
  }
  SUBCASE("identity") {
    const auto terms = linalg::spectral_projections(Matrix::Identity(4, 4));
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].eigenvalue == doctest::Approx(1.0));
    CHECK(terms[0].projection.rank() == 4);
  }
  SUBCASE("non-Hermitian input") {
    CHECK_THROWS_AS(linalg::spectral_projections(unit(3, 0, 1)), ValidationError);
  }
}

TEST_CASE("spectral_projections resolve sampled Hermitian matrices") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const Index n = 2 + static_cast<Index>(seed % 5);
    const Matrix h = linalg::random_hermitian(n, rng);
    const auto terms = linalg::spectral_projections(h);
    Matrix sum = Matrix::Zero(n, n), rebuilt = Matrix::Zero(n, n);
    for (std::size_t j = 0; j < terms.size(); ++j) {
      const Matrix& pj = terms[j].projection.matrix();
      sum += pj;
      rebuilt += terms[j].eigenvalue * pj;
      for (std::size_t k = 0; k < terms.size(); ++k) {
        const Matrix expect = j == k ? pj : Matrix::Zero(n, n);
        CHECK(fx::max_abs(pj * terms[k].projection.matrix() - expect) < 1e-9);
      }
    }
    CHECK(fx::max_abs(sum - Matrix::Identity(n, n)) < 1e-9);
    CHECK(fx::max_abs(rebuilt - h) < 1e-9);
  }
}

TEST_CASE("spectral_projections merges degenerate eigenvalues") {
  Rng rng(5);
  const Matrix u = linalg::random_unitary(5, rng);
  Vector ev(5);
  ev << 2.0, 2.0, 2.0 + 1e-12, -1.0, -1.0;
  const Matrix h = u * ev.asDiagonal() * u.adjoint();
  const auto terms = linalg::spectral_projections(0.5 * (h + h.adjoint()));
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].projection.rank() == 2);
  CHECK(terms[1].projection.rank() == 3);
}

TEST_CASE("trace_norm") {
  Rng rng(17);
  CHECK(linalg::trace_norm(Matrix::Zero(4, 4)) == 0.0);
  for (Index r = 0; r <= 4; ++r)
    CHECK(linalg::trace_norm(linalg::random_projection(4, r, rng).matrix()) == doctest::Approx(static_cast<double>(r)));
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = linalg::gaussian_matrix(4, 4, rng);
    const double oracle = fx::gram_trace_norm(a);
    CHECK(std::abs(linalg::trace_norm(a) - oracle) < 1e-9);
    const Matrix u = linalg::random_unitary(4, rng), v = linalg::random_unitary(4, rng);
    CHECK(std::abs(linalg::trace_norm(u * a * v) - linalg::trace_norm(a)) < 1e-8);
  }
}

TEST_CASE("rank_one_proj") {
  CHECK(fx::max_abs(linalg::rank_one_proj(fx::basis(3, 0)).matrix() - unit(3, 0, 0)) == 0.0);
  const Vector xi = (fx::basis(3, 0) + fx::basis(3, 1)) / std::sqrt(2.0);
  const Matrix p = linalg::rank_one_proj(xi).matrix();
  CHECK(fx::max_abs(p - xi * xi.adjoint()) < 1e-15);
  for (Index a = 0; a < 2; ++a)
    for (Index b = 0; b < 2; ++b) CHECK(std::abs(p(a, b) - 0.5) < 1e-15);
  CHECK(std::abs(p.trace() - 1.0) < 1e-15);
  CHECK_THROWS_AS(linalg::rank_one_proj(2.0 * xi), ValidationError);
}

TEST_CASE("swap_operator") {
  CHECK(linalg::swap_operator(1) == Matrix::Identity(1, 1));
  Matrix w2 = Matrix::Identity(4, 4);
  w2.row(1).swap(w2.row(2));
  CHECK(linalg::swap_operator(2) == w2);
  CHECK(linalg::swap_operator(4) == fx::swap_matrix(4));

  Rng rng(23);
  const Vector alpha = linalg::random_unit_vector(3, rng), beta = linalg::random_unit_vector(3, rng);
  const Matrix w = linalg::swap_operator(3);
  CHECK((w * fx::naive_kron(alpha, beta) - fx::naive_kron(beta, alpha)).norm() < 1e-12);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = linalg::gaussian_matrix(3, 3, rng), b = linalg::gaussian_matrix(3, 3, rng);
    CHECK(fx::max_abs(w * linalg::kron(a, b) * w - linalg::kron(b, a)) < 1e-10);
  }
}

TEST_CASE("random_projection") {
  CHECK(linalg::random_projection(4, 0, std::uint64_t{1}).matrix() == Matrix::Zero(4, 4));
  CHECK(linalg::random_projection(4, 4, std::uint64_t{1}).matrix() == Matrix::Identity(4, 4));
  const Projection p = linalg::random_projection(4, 2, std::uint64_t{7});
  CHECK(fx::max_abs(p.matrix() * p.matrix() - p.matrix()) < 1e-10);
  CHECK(std::abs(p.matrix().trace() - 2.0) < 1e-10);
  CHECK(p.rank() == 2);
  const Projection again = linalg::random_projection(4, 2, std::uint64_t{7});
  CHECK(again.matrix() == p.matrix());
  CHECK_THROWS(linalg::random_projection(4, 5, std::uint64_t{7}));
}

TEST_CASE("Projection::from_matrix validates") {
  CHECK(Projection::from_matrix(unit(3, 0, 0) + unit(3, 2, 2)).rank() == 2);
  CHECK_THROWS_AS(Projection::from_matrix(2.0 * unit(3, 0, 0)), ValidationError);
  CHECK_THROWS_AS(Projection::from_matrix(unit(3, 0, 1)), ValidationError);
}

TEST_CASE("random_unitary is unitary and density matrices are states") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const Matrix u = linalg::random_unitary(5, rng);
    CHECK(fx::max_abs(u.adjoint() * u - Matrix::Identity(5, 5)) < 1e-12);
    const Matrix rho = linalg::random_density_matrix(5, rng);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(rho).eigenvalues().minCoeff() > -1e-12);
  }
}

TEST_CASE("ElementaryTensorSum") {
  ElementaryTensorSum empty;
  CHECK_THROWS_AS(empty.validate(), ValidationError);
  Rng rng(2);
  ElementaryTensorSum s;
  s.terms.emplace_back(linalg::gaussian_matrix(3, 3, rng), linalg::gaussian_matrix(3, 3, rng));
  s.terms.emplace_back(linalg::gaussian_matrix(3, 3, rng), linalg::gaussian_matrix(3, 3, rng));
  const Matrix dense = s.materialize();
  const Matrix oracle = fx::naive_kron(s.terms[0].first, s.terms[0].second) +
                        fx::naive_kron(s.terms[1].first, s.terms[1].second);
  CHECK(fx::max_abs(dense - oracle) < 1e-13);
  s.terms.emplace_back(Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  CHECK_THROWS_AS(s.validate(), ValidationError);
}
