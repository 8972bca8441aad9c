// kernels.hpp - the three hot loops, each in a serial reference form and a
// parallel form
//
// The reference versions are written for clarity (direct exponentials, one
// accumulator) and are what the tests compare against.  The parallel versions
// use phasor recurrences and OpenMP; their reductions go through a fixed
// number of blocks summed in order, so results do not depend on the thread
// count.  Without OpenMP the parallel versions still run, serially.

#pragma once

#include <cstddef>
#include <vector>

#include "nmcorr/numerics.hpp"

namespace nmcorr::kernels {

/// out[k] = sum_j coef[j] * exp(-i omega[j] k dt), k = 0 .. n-1.
std::vector<cplx> spectral_sum_reference(const std::vector<double>& omega, const std::vector<cplx>& coef,
                                         double dt, std::size_t n);
std::vector<cplx> spectral_sum(const std::vector<double>& omega, const std::vector<cplx>& coef, double dt,
                               std::size_t n);

/// sum_{k=1}^{n} g[n+1-k] u[k]: the history part of the discretised memory
/// integral at step n+1.
cplx history_sum_reference(const cplx* g, const cplx* u, std::size_t n);
cplx history_sum(const cplx* g, const cplx* u, std::size_t n);

/// Input of the noise-function stream.  F_j(t) = int_0^t u e^{i w_j s} ds is
/// advanced step by step with a cubic Hermite (u, u') Filon rule, and every
/// quantity below is accumulated on the fly.
struct StreamInput {
    const std::vector<double>* omega{nullptr};
    const std::vector<std::vector<double>>* weights{nullptr};  // per bath: node weight * J n / 2 pi
    const std::vector<cplx>* u{nullptr};
    const std::vector<cplx>* u_dot{nullptr};
    double dt{0.0};
    std::vector<std::size_t> anchors;  // grid indices, ascending
};

struct StreamOutput {
    std::vector<std::vector<double>> v_diag;             // [bath][k]  v(t_k, t_k)
    std::vector<std::vector<double>> v_dot;              // [bath][k]  d/dt v(t, t) at t_k
    std::vector<std::vector<std::vector<cplx>>> rows;    // [bath][a][k - anchor_a]  v(t_a, t_k)
    std::vector<std::vector<cplx>> transform;            // [a][j]  F_j(t_a)
};

StreamOutput fluctuation_stream_reference(const StreamInput& in);
StreamOutput fluctuation_stream(const StreamInput& in);

/// Weights (a, b, c, d) of  int_0^1 p(x) e^{i theta x} dx = a p(0) + b p(1) + c p'(0) + d p'(1)
/// for the cubic Hermite interpolant p.
struct FilonWeights {
    cplx a, b, c, d;
};
FilonWeights hermite_filon(double theta);

/// Threads the parallel kernels will use (1 without OpenMP).
int max_threads();

}  // namespace nmcorr::kernels
