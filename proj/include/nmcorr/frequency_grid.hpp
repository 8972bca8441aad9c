// frequency_grid.hpp - fixed quadrature nodes on (0, w_max) for time-dependent integrands
//
// The spectral propagator and the noise function are both frequency integrals
// whose integrands oscillate like exp(-i w t) for t up to some t_max.  One node
// set built for t_max serves every t <= t_max, which is what makes the O(n_w)
// per-time-point cost possible.

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace nmcorr {

struct FrequencyGrid {
    std::vector<double> omega;
    std::vector<double> weight;  // plain quadrature weights (integrand not included)

    std::size_t size() const { return omega.size(); }
};

struct GridOptions {
    double omega_max{199.0};    // upper end; keep below the quadrature cutoff 40 w_c
    double head{1e-6};          // first panel [0, head]
    double max_width{0.5};      // widest panel anywhere
    double phase_span{18.84955592153876};  // 6 pi: max w-width times t_max per panel
    std::size_t order{20};      // Gauss-Legendre points per panel
    double refine_tol{1e-12};   // absolute tolerance for density-driven bisection
    int max_depth{18};
};

/// Panels: [0, head] (mapped through w = head * y^{1/s} when s < 1), then
/// geometrically doubling panels up to the width cap, then uniform panels.
/// The cap is min(max_width, phase_span / t_max).
FrequencyGrid oscillatory_grid(double s, double t_max, const GridOptions& opts = {});

/// As oscillatory_grid, but every panel outside the head is bisected until the
/// order-n Gauss rule for `density` agrees with the two-half estimate to
/// `refine_tol`.  Use it with the spectral weight so resonances get resolved.
FrequencyGrid refined_grid(double s, double t_max, const std::function<double(double)>& density,
                           const GridOptions& opts = {});

}  // namespace nmcorr
