// propagator.hpp - the retarded propagator u(t) computed two independent ways
//
// u solves  u' + i w0 u + int_0^t g(t - s) u(s) ds = 0,  u(0) = 1,
// with the stationary memory kernel g(d) = int dw/2pi J(w) e^{-i w d}.
// solve_u_volterra integrates that equation directly; SpectralPropagator uses
//   u(t) = Z e^{-i w_b t} + int_0^inf dw A(w) e^{-i w t},
//   A(w) = J / (2 pi [(w - w0 - Delta(w))^2 + (J/2)^2]).

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nmcorr/frequency_grid.hpp"
#include "nmcorr/numerics.hpp"
#include "nmcorr/spectral.hpp"

namespace nmcorr {

struct TimeGrid {
    double t0{0.0};
    double t_max{200.0};
    std::size_t n_steps{4000};

    void validate() const;
    double dt() const { return t_max / static_cast<double>(n_steps); }
    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt(); }
    std::size_t size() const { return n_steps + 1; }
    /// Index of the grid point at time t; throws std::invalid_argument if t is
    /// not on the grid (within 1e-6 dt).
    std::size_t index_of(double t) const;
};

enum class PropagatorRoute { volterra, spectral };

std::string to_string(PropagatorRoute r);

struct PropagatorTable {
    TimeGrid grid;
    std::vector<cplx> u;
    std::vector<cplx> u_dot;
    std::optional<LocalizedMode> localized;
    std::vector<cplx> kernel_cache;  // g(k dt), k >= 0; g(-d) = conj(g(d))
    PropagatorRoute route{PropagatorRoute::volterra};

    cplx kernel(std::ptrdiff_t offset) const;
};

/// g(d) by quadrature over the truncated band.
cplx memory_kernel(const SpectralDensity& sd, double d);
/// g(d) = eta w_c^2 Gamma(s+1) / (1 + i w_c d)^{s+1}, the same integral taken to infinity.
cplx memory_kernel_closed_form(const SpectralDensity& sd, double d);

struct VolterraOptions {
    bool richardson{true};     // combine dt and dt/2 solutions as (4 u_{dt/2} - u_dt) / 3
    bool self_check{true};     // StepTooCoarse unless the result at dt and at dt/2 agree on the first 10% of the grid
    double self_check_tol{1e-4};
    bool parallel{true};       // use the parallel history sum
};

/// Linearly implicit trapezoid step in the frame rotating at w0, with the
/// memory integral done by product integration (kernel integrated by Gauss
/// rule against piecewise-linear u).  u_dot is the right-hand side at
/// each grid point.
PropagatorTable solve_u_volterra(const SpectralDensity& sd, const TimeGrid& grid,
                                 const VolterraOptions& opts = {});

class SpectralPropagator {
public:
    /// Nodes are laid out for t in [0, t_max]; evaluating beyond t_max works but
    /// loses accuracy as the phase per panel grows.
    explicit SpectralPropagator(const SpectralDensity& sd, double t_max = 200.0, const GridOptions& opts = {});

    cplx at(double t) const;
    cplx derivative_at(double t) const;
    /// u and u_dot on every grid point (phasor recurrence, parallel over time blocks).
    PropagatorTable tabulate(const TimeGrid& grid) const;

    /// Z + int A dw; equals u(0) and should be 1.
    double sum_rule() const;
    const std::optional<LocalizedMode>& localized() const { return mode_; }
    const FrequencyGrid& grid() const { return grid_; }
    const SpectralDensity& density() const { return sd_; }
    double t_max() const { return t_max_; }
    /// A(w) with the tabulated Lamb shift.
    double spectral_weight(double omega) const;

private:
    SpectralDensity sd_;
    double t_max_;
    std::optional<LocalizedMode> mode_;
    std::shared_ptr<const LambShiftTable> lamb_;
    FrequencyGrid grid_;
    std::vector<cplx> coef_;  // weight * A at each node
};

/// One-off evaluation of the spectral representation; builds a propagator
/// sized for t.  For eta = 0 returns e^{-i w0 t} directly.
cplx eval_u_spectral(const SpectralDensity& sd, double t);

/// Near the band edge (|eta/eta_c - 1| < band_edge_margin) the background
/// weight A is too singular at w -> 0 for a fixed grid, so tables are built
/// by the Volterra route there.
inline constexpr double kBandEdgeMargin = 0.02;
PropagatorRoute preferred_route(const SpectralDensity& sd);

/// Table by the preferred route.  `spectral` may be passed to reuse an
/// existing propagator (its t_max must cover the grid).
PropagatorTable build_propagator_table(const SpectralDensity& sd, const TimeGrid& grid,
                                       const SpectralPropagator* spectral = nullptr);

}  // namespace nmcorr
