// numerics.hpp - quadrature, principal values and bracketed root finding
//
// Everything here is a pure function of its arguments; nothing is cached
// between calls, so concurrent use from any number of threads is safe.

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace nmcorr {

using cplx = std::complex<double>;
using RealFn = std::function<double(double)>;
using ComplexFn = std::function<cplx(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

/// Tolerances and truncation policy shared by every quadrature in the library.
///
/// Semi-infinite integrals are cut at `tail_cutoff_multiplier * tail_scale`.
/// All integrands in this library carry a factor exp(-w / w_c) times a power
/// w^p with p <= s + 1, so with tail_scale = w_c and multiplier M the dropped
/// piece is bounded by w_c^{p+1} Gamma(p + 1, M) ~ w_c^{p+1} M^p e^{-M}; for
/// M = 40 and p <= 4 that is below 1e-10 relative to the retained integral.
struct QuadSpec {
    double rel_tol{1e-8};
    double abs_tol{1e-12};
    std::size_t max_subdivisions{4000};
    double tail_cutoff_multiplier{40.0};
    double tail_scale{1.0};

    /// Throws std::invalid_argument if any invariant is violated.
    void validate() const;
    /// Upper limit used in place of +infinity.
    double truncation(double lower) const { return lower + tail_cutoff_multiplier * tail_scale; }
};

/// Adaptive Gauss-Kronrod (10/21) quadrature of f over [a, b].  b may be
/// +infinity, in which case the range is truncated per `spec`.  Integrable
/// endpoint singularities are tolerated because no node touches an endpoint.
/// Throws NonConvergence when `spec.max_subdivisions` is exhausted.
cplx integrate(const ComplexFn& f, double a, double b, const QuadSpec& spec = {});
double integrate_real(const RealFn& f, double a, double b, const QuadSpec& spec = {});

/// Same as integrate() but seeded with the given ordered breakpoints; useful
/// for oscillatory integrands where a single initial panel could alias.
cplx integrate_panels(const ComplexFn& f, const std::vector<double>& breakpoints,
                      const QuadSpec& spec = {});

/// Integral over [0, b] of an integrand that behaves like w^{s-1} near 0.
/// For s < 1 the substitution w = x^{1/s} removes the endpoint singularity.
cplx integrate_from_zero(const ComplexFn& f, double b, double s, const QuadSpec& spec = {});
double integrate_from_zero_real(const RealFn& f, double b, double s, const QuadSpec& spec = {});

/// Cauchy principal value of  P int_a^b f(w) / (pole - w) dw.
///
/// The window [pole - eps, pole + eps] is folded onto itself, giving the
/// regular integrand (f(pole - h) - f(pole + h)) / h on (0, eps); the two
/// outer pieces are ordinary integrals.  `s_lower` enables the small-w
/// substitution of integrate_from_zero on the left piece when a == 0.
/// Throws PoleOutOfRange unless a < pole < b.
double principal_value(const RealFn& f, double a, double b, double pole,
                       const QuadSpec& spec = {}, double s_lower = 1.0);

/// Root of g in [lo, hi] by bisection with secant acceleration.  Stops when
/// the bracket is narrower than `tol` (or g vanishes exactly).
/// Throws NoBracket unless g(lo) and g(hi) have opposite signs.
double find_root(const RealFn& g, double lo, double hi, double tol);

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_legendre(std::size_t n);

}  // namespace nmcorr
