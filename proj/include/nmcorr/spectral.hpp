// spectral.hpp - Ohmic-family reservoir, self-energy and the localized mode
//
// Internal units: the bare mode frequency omega0 is the unit of frequency and
// 1/omega0 the unit of time.  Temperatures enter as theta = k_B T / (hbar omega0).

#pragma once

#include <optional>
#include <vector>

#include "nmcorr/numerics.hpp"

namespace nmcorr {

/// J(w) = 2 pi eta w (w / w_c)^{s-1} exp(-w / w_c), plus the system frequency.
struct SpectralDensity {
    double s{1.0};        // exponent: s < 1 sub-Ohmic, s = 1 Ohmic, s > 1 super-Ohmic
    double eta{0.0};      // dimensionless coupling
    double omega_c{5.0};  // cutoff, in units of omega0
    double omega0{1.0};   // system frequency (the unit)

    void validate() const;

    /// Coupling given as a multiple of the critical coupling eta_c.
    static SpectralDensity with_relative_coupling(double s, double eta_rel, double omega_c = 5.0,
                                                  double omega0 = 1.0);
};

struct BathSpec {
    double theta{0.0};  // k_B T / (hbar omega0)

    void validate() const;
};

/// Dissipationless pole of the propagator below the band edge.
struct LocalizedMode {
    double omega_b{0.0};        // < 0
    double residue_z{0.0};      // in (0, 1)
    double pole_residual{0.0};  // |omega_b - omega0 - Delta(omega_b)|
};

/// Kelvin <-> theta conversion.  omega0 is an angular frequency in units of
/// 1e9 rad/s; k_B / hbar defaults to the CODATA 2018 value.
struct UnitConversion {
    static constexpr double kCodataKbOverHbar = 1.380649e-23 / 1.054571817e-34;  // rad s^-1 K^-1

    double omega0_ghz{10.0};
    double kb_over_hbar{kCodataKbOverHbar};

    double theta_from_kelvin(double kelvin) const;
    double kelvin_from_theta(double theta) const;
};

/// Quadrature settings scaled to the cutoff of `sd` (tail_scale = omega_c).
QuadSpec default_quad(const SpectralDensity& sd);
/// Tighter settings used for the pole search and sum rules.
QuadSpec precise_quad(const SpectralDensity& sd);

double j_omega(const SpectralDensity& sd, double omega);
double bose_occupation(const BathSpec& bath, double omega);
double damping_rate(const SpectralDensity& sd, double omega);
double critical_coupling(const SpectralDensity& sd);

/// Delta(w) = P int_0^inf dw'/2pi J(w') / (w - w').
double lamb_shift(const SpectralDensity& sd, double omega, const QuadSpec& spec);
inline double lamb_shift(const SpectralDensity& sd, double omega) {
    return lamb_shift(sd, omega, default_quad(sd));
}
/// Mutation hook for the validation suite: negates every Delta(w).
namespace fault {
void set_lamb_shift_sign_flip(bool on);
bool lamb_shift_sign_flipped();
}  // namespace fault

/// Delta'(w) for w < 0, by quadrature of -J(w') / (2 pi (w - w')^2).
double lamb_shift_derivative(const SpectralDensity& sd, double omega, const QuadSpec& spec);

/// Present iff eta > eta_c (strictly); the band-edge case eta == eta_c is
/// reported as absent because the residue vanishes there.
std::optional<LocalizedMode> localized_mode(const SpectralDensity& sd, const QuadSpec& spec);
inline std::optional<LocalizedMode> localized_mode(const SpectralDensity& sd) {
    return localized_mode(sd, precise_quad(sd));
}

/// Piecewise-Chebyshev interpolant of Delta(w) on (0, w_max].  Panels grow
/// geometrically away from w = 0 so the w^s log w behaviour at the band edge is
/// resolved; below the first panel the exact principal value is evaluated.
class LambShiftTable {
public:
    LambShiftTable(const SpectralDensity& sd, double omega_max, const QuadSpec& spec);

    double operator()(double omega) const;
    double omega_min() const { return lo_; }
    double omega_max() const { return hi_; }

private:
    SpectralDensity sd_;
    QuadSpec spec_;
    double lo_{0.0};
    double hi_{0.0};
    std::vector<double> edges_;
    std::vector<std::vector<double>> values_;  // samples at Chebyshev points per panel
};

}  // namespace nmcorr
