// oracles.hpp - independent reference computations used only by the tests
//
// Nothing here calls into the production quadrature, grid or kernel code;
// each oracle goes through a closed form, a brute-force sweep or a separate
// discretisation so that agreement means something.

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "nmcorr/spectral.hpp"

namespace oracle {

using cplx = std::complex<double>;

/// Composite Gauss-Legendre on [a, b] with `panels` equal panels of order `order`.
double composite_gl(const std::function<double(double)>& f, double a, double b, int panels, int order = 16);
cplx composite_gl_c(const std::function<cplx(double)>& f, double a, double b, int panels, int order = 16);

/// Principal value P int_a^b f(w)/(pole - w) dw by symmetric excision of
/// [pole - eps, pole + eps] for a decreasing sequence of eps followed by
/// Richardson extrapolation in eps^2.
double pv_excision(const std::function<double(double)>& f, double a, double b, double pole);

/// Delta(w) for integer s through the exponential integral Ei (untruncated).
double lamb_shift_integer_s(const nmcorr::SpectralDensity& sd, double omega);

/// Localized-mode frequency for s = 1 by scanning the pole condition on a
/// uniform grid of `points` nodes in (lo, 0) and refining the sign change.
double pole_grid_scan(const nmcorr::SpectralDensity& sd, double lo, int points);

/// g(dt) = eta w_c^2 Gamma(s+1) / (1 + i w_c dt)^{s+1}.
cplx memory_kernel_closed(const nmcorr::SpectralDensity& sd, double dt);

/// Thermal kernel gt(d) = int dw/2pi J(w) n(w) e^{-i w d} through the Bose
/// series n = sum_k e^{-k w / theta} with an Euler-Maclaurin tail.
cplx thermal_kernel_series(const nmcorr::SpectralDensity& sd, double theta, double d);

/// v(t_i, t_k) as the double time integral of u(t - x) gt(x - y) conj(u(s - y))
/// over the grid u[0..] with spacing h: Simpson in each direction (an odd
/// panel count ends with a 3/8 panel), gt from thermal_kernel_series on every
/// difference.
cplx v_double_integral(const nmcorr::SpectralDensity& sd, double theta, const std::vector<cplx>& u, double h,
                       std::size_t i, std::size_t k);

/// Free propagation with a fixed frequency.
cplx free_u(double omega0, double t);

}  // namespace oracle
