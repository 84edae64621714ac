#include <doctest.h>

#include "dfrep/ils.hpp"
#include "dfrep/kernels.hpp"
#include "dfrep/probes.hpp"
#include "support/fixtures.hpp"

using namespace dfrep;

TEST_CASE("serial and parallel kron_trace agree bitwise") {
  for (Index n : {2, 5, 9, 12}) {
    Rng rng(static_cast<std::uint64_t>(n));
    const Matrix p = linalg::gaussian_matrix(n, n, rng), q = linalg::gaussian_matrix(n, n, rng);
    const Matrix x = linalg::gaussian_matrix(n * n, n * n, rng);
    const cplx s = kernels::serial::kron_trace(p, q, x);
    CHECK(s == kernels::parallel::kron_trace(p, q, x));
    CHECK(std::abs(s - fx::naive_kron_trace(p, q, x)) <= 1e-10 * std::max(1.0, std::abs(s)));
  }
}

TEST_CASE("serial and parallel tabulate agree") {
  const auto entry = [](Index r, Index c) { return cplx(std::sin(0.1 * r + c), std::cos(r * 0.3 - c)); };
  const Matrix s = kernels::serial::tabulate(17, 23, entry);
  CHECK(s == kernels::parallel::tabulate(17, 23, entry));
  CHECK(s(4, 5) == entry(4, 5));
}

TEST_CASE("serial and parallel max_over agree") {
  const auto sample = [](Index i) { return std::abs(std::sin(0.7 * static_cast<double>(i))); };
  CHECK(kernels::serial::max_over(0, sample) == 0.0);
  CHECK(kernels::serial::max_over(5000, sample) == kernels::parallel::max_over(5000, sample));
}

TEST_CASE("matrix_unit_table and representer agree across execution modes") {
  Rng rng(4);
  const auto d = DecoherenceFunctional::operator_backed(fx::product_mixture(4, rng));
  CHECK(ils::matrix_unit_table(d, false) == ils::matrix_unit_table(d, true));
  CHECK(ils::assemble_representer(d, false) == ils::assemble_representer(d, true));
}

TEST_CASE("tracial probe is identical serial vs parallel") {
  Rng rng(8);
  const Matrix x = fx::symmetrized_state(4, rng);
  const auto s = probes::tracial_bound_from_representer(x, 500, 99, false);
  const auto p = probes::tracial_bound_from_representer(x, 500, 99, true);
  CHECK(s.sup == p.sup);
  CHECK(s.length_counts == p.length_counts);
}

TEST_CASE("max_threads is positive") { CHECK(kernels::max_threads() >= 1); }
