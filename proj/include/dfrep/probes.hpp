#pragma once

// Boundedness diagnostics. Verdicts are finite-sample evidence, never proofs.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "dfrep/decoherence.hpp"

namespace dfrep::probes {

// max |d(p, q)| over seeded random projection pairs of every rank.
double boundedness_probe(const DecoherenceFunctional& d, Index samples, std::uint64_t seed);

// Unit vector sum_{k < length} alpha_k (x) gamma_k / norm with a random
// length in 1..4; `length` receives the number of elementary terms.
Vector sample_algebraic_tensor(Index dim, Rng& rng, int& length);

struct TracialProbeOptions {
  Index samples = 1000;
  std::uint64_t seed = 0;
  // Theorems exclude dim 2; the truncation sweep still records it.
  bool allow_dimension_two = false;
  bool parallel = true;
};

struct TracialEstimate {
  double sup = 0.0;
  Index samples = 0;
  std::uint64_t seed = 0;
  // Number of samples with 1, 2, 3 and 4 elementary terms.
  std::array<Index, 4> length_counts{};
};

// sup |beta(p_xi)| = sup |<X xi, xi>| over sampled unit xi in the algebraic
// tensor subspace, X the matrix-unit representer of beta.
TracialEstimate tracial_bound_from_representer(const Matrix& x_op, Index samples, std::uint64_t seed,
                                               bool parallel = true);

TracialEstimate tracial_bound_probe(const DecoherenceFunctional& d, const TracialProbeOptions& options);

enum class SweepVerdict { tensor_bounded_evidence, divergence_evidence, inconclusive };

std::string_view to_string(SweepVerdict v);

struct SweepRow {
  Index dim = 0;
  double trace_norm = 0.0;
  double sup_beta_rank_one = 0.0;
  double elapsed_ms = 0.0;
  std::uint64_t seed = 0;
  bool below_theorem_dimension = false;
  double normalization_residual = 0.0;
  double swap_adjoint_residual = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  double growth_slope = 0.0;
  SweepVerdict verdict = SweepVerdict::inconclusive;
  Index samples = 0;
  std::uint64_t seed = 0;
  std::array<Index, 4> length_counts{};

  std::vector<Index> dims() const;
  std::vector<double> trace_norms() const;
  std::vector<double> sup_beta_rank_one() const;
};

using FunctionalFamily = std::function<DecoherenceFunctional(Index dim)>;

struct SweepOptions {
  Index samples = 1000;
  std::uint64_t seed = 0;
  bool allow_dimension_two = false;
  bool record_timings = true;
};

// Least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

// slope >= 0.5 over >= 4 dims: divergence; relative spread < 1% over the top
// three dims: tensor bounded; otherwise inconclusive.
SweepVerdict classify_sweep(std::span<const Index> dims, std::span<const double> trace_norms);

SweepReport tensor_bound_probe(const FunctionalFamily& family, std::span<const Index> dims,
                               const SweepOptions& options);

}  // namespace dfrep::probes
