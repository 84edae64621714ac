#include "dfrep/probes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "dfrep/ils.hpp"
#include "dfrep/kernels.hpp"

namespace dfrep::probes {

double boundedness_probe(const DecoherenceFunctional& d, Index samples, std::uint64_t seed) {
  if (samples < 1) throw ValidationError("boundedness_probe: samples must be >= 1");
  const Index n = d.dim();
  return kernels::parallel::max_over(samples, [&](Index s) {
    Rng rng(linalg::derive_seed(seed, static_cast<std::uint64_t>(s)));
    std::uniform_int_distribution<Index> rank(0, n);
    const Projection p = linalg::random_projection(n, rank(rng), rng);
    const Projection q = linalg::random_projection(n, rank(rng), rng);
    return std::abs(d.evaluate(p, q));
  });
}

Vector sample_algebraic_tensor(Index dim, Rng& rng, int& length) {
  std::uniform_int_distribution<int> terms(1, 4);
  length = terms(rng);
  Vector xi = Vector::Zero(dim * dim);
  for (int k = 0; k < length; ++k) {
    const Vector alpha = linalg::gaussian_matrix(dim, 1, rng).col(0);
    const Vector gamma = linalg::gaussian_matrix(dim, 1, rng).col(0);
    for (Index a = 0; a < dim; ++a) xi.segment(a * dim, dim) += alpha(a) * gamma;
  }
  return xi / xi.norm();
}

TracialEstimate tracial_bound_from_representer(const Matrix& x_op, Index samples, std::uint64_t seed,
                                               bool parallel) {
  if (samples < 1) throw ValidationError("tracial_bound_probe: samples must be >= 1");
  const auto dim = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(x_op.rows()))));
  TracialEstimate out;
  out.samples = samples;
  out.seed = seed;
  const kernels::SampleFn sample = [&](Index s) {
    Rng rng(linalg::derive_seed(seed, static_cast<std::uint64_t>(s)));
    int length = 0;
    const Vector xi = sample_algebraic_tensor(dim, rng, length);
    return std::abs(xi.dot(x_op * xi));
  };
  out.sup = parallel ? kernels::parallel::max_over(samples, sample) : kernels::serial::max_over(samples, sample);
  for (Index s = 0; s < samples; ++s) {
    Rng rng(linalg::derive_seed(seed, static_cast<std::uint64_t>(s)));
    std::uniform_int_distribution<int> terms(1, 4);
    ++out.length_counts[static_cast<std::size_t>(terms(rng) - 1)];
  }
  return out;
}

TracialEstimate tracial_bound_probe(const DecoherenceFunctional& d, const TracialProbeOptions& options) {
  if (d.dim() < 3 && !(options.allow_dimension_two && d.dim() == 2))
    throw DimensionExclusionError("tracial_bound_probe");
  return tracial_bound_from_representer(ils::assemble_representer(d, options.parallel), options.samples,
                                        options.seed, options.parallel);
}

std::string_view to_string(SweepVerdict v) {
  switch (v) {
    case SweepVerdict::tensor_bounded_evidence: return "tensor_bounded_evidence";
    case SweepVerdict::divergence_evidence: return "divergence_evidence";
    default: return "inconclusive";
  }
}

std::vector<Index> SweepReport::dims() const {
  std::vector<Index> out;
  for (const auto& r : rows) out.push_back(r.dim);
  return out;
}

std::vector<double> SweepReport::trace_norms() const {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.trace_norm);
  return out;
}

std::vector<double> SweepReport::sup_beta_rank_one() const {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.sup_beta_rank_one);
  return out;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return 0.0;
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx == 0.0 ? 0.0 : sxy / sxx;
}

SweepVerdict classify_sweep(std::span<const Index> dims, std::span<const double> trace_norms) {
  std::vector<double> x(dims.begin(), dims.end());
  const double slope = least_squares_slope(x, trace_norms);
  if (dims.size() >= 4 && slope >= 0.5) return SweepVerdict::divergence_evidence;
  if (trace_norms.size() >= 3) {
    const auto top = trace_norms.last(3);
    const double hi = *std::max_element(top.begin(), top.end());
    const double lo = *std::min_element(top.begin(), top.end());
    const double spread = hi == 0.0 ? 0.0 : (hi - lo) / hi;
    if (spread < 0.01) return SweepVerdict::tensor_bounded_evidence;
  }
  return SweepVerdict::inconclusive;
}

SweepReport tensor_bound_probe(const FunctionalFamily& family, std::span<const Index> dims,
                               const SweepOptions& options) {
  if (dims.empty()) throw ValidationError("tensor_bound_probe: no dimensions given");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const Index minimum = options.allow_dimension_two ? 2 : 3;
    if (dims[i] < minimum) throw DimensionExclusionError("tensor_bound_probe");
    if (i > 0 && dims[i] <= dims[i - 1]) throw ValidationError("tensor_bound_probe: dims must be ascending");
  }

  SweepReport report;
  report.samples = options.samples;
  report.seed = options.seed;
  for (Index dim : dims) {
    const auto start = std::chrono::steady_clock::now();
    const DecoherenceFunctional d = family(dim);
    if (d.dim() != dim) throw DimensionError("tensor_bound_probe: family returned the wrong dimension");
    const Matrix x_op = ils::assemble_representer(d);

    SweepRow row;
    row.dim = dim;
    row.below_theorem_dimension = dim < 3;
    row.seed = linalg::derive_seed(options.seed, static_cast<std::uint64_t>(dim));
    row.trace_norm = linalg::trace_norm(x_op);
    row.normalization_residual = std::abs(x_op.trace() - cplx(1.0));
    row.swap_adjoint_residual = ils::swap_adjoint_residual(x_op);
    const TracialEstimate estimate = tracial_bound_from_representer(x_op, options.samples, row.seed);
    row.sup_beta_rank_one = estimate.sup;
    for (std::size_t k = 0; k < 4; ++k) report.length_counts[k] += estimate.length_counts[k];
    if (options.record_timings) {
      row.elapsed_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    report.rows.push_back(row);
  }
  const std::vector<Index> ds = report.dims();
  const std::vector<double> norms = report.trace_norms();
  std::vector<double> x(ds.begin(), ds.end());
  report.growth_slope = least_squares_slope(x, norms);
  report.verdict = classify_sweep(ds, norms);
  return report;
}

}  // namespace dfrep::probes
