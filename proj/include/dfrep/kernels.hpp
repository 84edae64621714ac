#pragma once

// Hot loops, each in a serial reference form and an OpenMP form. Both forms
// produce bitwise-identical results: every output element (or partial sum) is
// computed by exactly one thread in a fixed order, and reductions are either
// ordered or order-independent (max).

#include <functional>

#include "dfrep/linalg.hpp"

namespace dfrep::kernels {

using EntryFn = std::function<cplx(Index, Index)>;
using SampleFn = std::function<double(Index)>;

namespace serial {

cplx kron_trace(const Matrix& p, const Matrix& q, const Matrix& x);
Matrix tabulate(Index rows, Index cols, const EntryFn& entry);
// max_{i < count} sample(i); 0 for count == 0.
double max_over(Index count, const SampleFn& sample);

}  // namespace serial

namespace parallel {

cplx kron_trace(const Matrix& p, const Matrix& q, const Matrix& x);
Matrix tabulate(Index rows, Index cols, const EntryFn& entry);
double max_over(Index count, const SampleFn& sample);

}  // namespace parallel

int max_threads();

}  // namespace dfrep::kernels
