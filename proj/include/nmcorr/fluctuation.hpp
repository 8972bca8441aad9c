// fluctuation.hpp - thermal noise function v(t, s)
//
// With F(t, w) = int_0^t u(x) e^{i w x} dx the double time integral of the
// noise function collapses to one frequency integral,
//   v(t, s) = int dw/2pi J(w) n(w) e^{-i w (t - s)} F(t, w) conj(F(s, w)),
// so a single forward pass over the time grid, carrying F on a fixed set of
// frequency nodes, yields v(t, t) everywhere and v(t_a, t) for chosen anchors.

#pragma once

#include <cstddef>
#include <vector>

#include "nmcorr/frequency_grid.hpp"
#include "nmcorr/propagator.hpp"
#include "nmcorr/spectral.hpp"

namespace nmcorr {

struct FluctuationOptions {
    bool parallel{true};
};

struct FluctuationTable {
    TimeGrid grid;
    BathSpec bath;
    FrequencyGrid freq;                     // nodes carrying the transforms
    std::vector<double> v_diag;             // v(t_k, t_k)
    std::vector<double> v_dot;              // d/dt v(t, t) at t_k, from d/dt F = u e^{i w t}
    std::vector<std::size_t> anchors;       // grid indices with a stored row
    std::vector<std::vector<cplx>> rows;    // rows[a][m] = v(t_{anchors[a]}, t_{anchors[a] + m})
    std::vector<std::vector<cplx>> F;       // F[a][j] = F(t_{anchors[a]}, omega_j)

    bool has_anchor(std::size_t k) const;
    /// v(t_i, t_k).  Needs min(i, k) to be an anchor; the other ordering comes
    /// from v(t, s) = conj(v(s, t)).
    cplx two_time(std::size_t i, std::size_t k) const;
};

/// Nodes for the noise integral: the spectral propagator's refined grid for
/// the same reservoir and horizon.
FrequencyGrid noise_grid(const SpectralDensity& sd, double t_max);

/// F(t, w) by stepping the cubic Hermite Filon rule over the table's grid.
cplx compute_transform(const PropagatorTable& table, double omega, double t);

/// One pass, several temperatures: u and F are shared, only the weights differ.
std::vector<FluctuationTable> build_fluctuation_tables(const SpectralDensity& sd, const std::vector<BathSpec>& baths,
                                                       const PropagatorTable& table, const FrequencyGrid& freq,
                                                       const std::vector<double>& anchor_times = {},
                                                       const FluctuationOptions& opts = {});
FluctuationTable build_fluctuation_table(const SpectralDensity& sd, const BathSpec& bath,
                                         const PropagatorTable& table, const FrequencyGrid& freq,
                                         const std::vector<double>& anchor_times = {},
                                         const FluctuationOptions& opts = {});

/// Thermal kernel gt(d) = int dw/2pi J(w) n(w) e^{-i w d}, by quadrature.
cplx thermal_kernel(const SpectralDensity& sd, const BathSpec& bath, double d);

/// v(t, s) straight from the double time integral
///   int_0^t dx int_0^s dy u(t - x) gt(x - y) conj(u(s - y))
/// with composite Simpson weights on the table's grid.  Slow; kept as the
/// reference the frequency form is checked against.
cplx v_two_time_direct(const SpectralDensity& sd, const BathSpec& bath, const PropagatorTable& table, double t,
                       double s);

/// Convenience forms that build the frequency grid themselves.
cplx v_two_time(const SpectralDensity& sd, const BathSpec& bath, const PropagatorTable& table, double t, double s);
/// Throws ImaginaryLeak if the computed v(t, t) has |Im| > 1e-9.
double v_equal_time(const SpectralDensity& sd, const BathSpec& bath, const PropagatorTable& table, double t);

/// lim v(t, t) as t -> infinity, summed on the spectral frequency grid for
/// `grid.t_max`.  Next to the band edge it falls back to the table check below
/// on a Volterra table over `grid`.
double v_steady(const SpectralDensity& sd, const BathSpec& bath, const TimeGrid& grid = {});
/// v(t, t) at the end of the table, after checking that it drifts by less than
/// 1% (relative) over the last 10% of the grid; throws NotConverged otherwise.
double v_steady(const FluctuationTable& fluct);

}  // namespace nmcorr
