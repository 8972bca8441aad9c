// spectral.cpp - Ohmic-family reservoir, self-energy and the localized mode

#include "nmcorr/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nmcorr/errors.hpp"

namespace nmcorr {

void SpectralDensity::validate() const {
    if (!(s > 0.0)) throw std::invalid_argument("SpectralDensity: s must be > 0");
    if (!(eta >= 0.0)) throw std::invalid_argument("SpectralDensity: eta must be >= 0");
    if (!(omega_c > 0.0)) throw std::invalid_argument("SpectralDensity: omega_c must be > 0");
    if (!(omega0 > 0.0)) throw std::invalid_argument("SpectralDensity: omega0 must be > 0");
}

SpectralDensity SpectralDensity::with_relative_coupling(double s, double eta_rel, double omega_c,
                                                        double omega0) {
    SpectralDensity sd{s, 0.0, omega_c, omega0};
    sd.validate();
    if (!(eta_rel >= 0.0)) throw std::invalid_argument("SpectralDensity: eta_rel must be >= 0");
    sd.eta = eta_rel * critical_coupling(sd);
    return sd;
}

void BathSpec::validate() const {
    if (!(theta >= 0.0)) throw std::invalid_argument("BathSpec: theta must be >= 0");
}

double UnitConversion::theta_from_kelvin(double kelvin) const {
    return kb_over_hbar * kelvin / (omega0_ghz * 1e9);
}

double UnitConversion::kelvin_from_theta(double theta) const {
    return theta * omega0_ghz * 1e9 / kb_over_hbar;
}

QuadSpec default_quad(const SpectralDensity& sd) {
    QuadSpec q;
    q.tail_scale = sd.omega_c;
    return q;
}

QuadSpec precise_quad(const SpectralDensity& sd) {
    QuadSpec q = default_quad(sd);
    q.rel_tol = 1e-12;
    q.abs_tol = 1e-15;
    return q;
}

double j_omega(const SpectralDensity& sd, double omega) {
    if (!(omega > 0.0) || sd.eta == 0.0) return 0.0;
    const double x = omega / sd.omega_c;
    // 2 pi eta w_c x^s e^{-x}, written through the log to stay finite for huge x.
    return 2.0 * kPi * sd.eta * sd.omega_c * std::exp(sd.s * std::log(x) - x);
}

double bose_occupation(const BathSpec& bath, double omega) {
    if (!(omega > 0.0))
        throw DegenerateArgument("bose_occupation: omega must be > 0, got " + std::to_string(omega));
    if (bath.theta == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / bath.theta);
}

double damping_rate(const SpectralDensity& sd, double omega) { return 0.5 * j_omega(sd, omega); }

double critical_coupling(const SpectralDensity& sd) {
    return sd.omega0 / (sd.omega_c * std::tgamma(sd.s));
}

namespace {

std::atomic<bool> g_flip_lamb_sign{false};

double lamb_shift_unsigned(const SpectralDensity& sd, double omega, const QuadSpec& spec) {
    sd.validate();
    if (sd.eta == 0.0) return 0.0;
    const double upper = spec.truncation(0.0);
    auto weight = [&](double w) { return j_omega(sd, w) / (2.0 * kPi); };

    if (omega > 0.0 && omega < upper) return principal_value(weight, 0.0, upper, omega, spec, sd.s);

    if (omega == 0.0) {
        // -int J/(2 pi w) dw; the integrand goes like w^{s-1}.
        auto f = [&](double w) { return -weight(w) / w; };
        return integrate_from_zero_real(f, upper, sd.s, spec);
    }
    auto f = [&](double w) { return weight(w) / (omega - w); };
    return integrate_from_zero_real(f, upper, sd.s, spec);
}

}  // namespace

namespace fault {
void set_lamb_shift_sign_flip(bool on) { g_flip_lamb_sign.store(on); }
bool lamb_shift_sign_flipped() { return g_flip_lamb_sign.load(); }
}  // namespace fault

double lamb_shift(const SpectralDensity& sd, double omega, const QuadSpec& spec) {
    const double d = lamb_shift_unsigned(sd, omega, spec);
    return g_flip_lamb_sign.load(std::memory_order_relaxed) ? -d : d;
}

double lamb_shift_derivative(const SpectralDensity& sd, double omega, const QuadSpec& spec) {
    if (!(omega < 0.0)) throw std::invalid_argument("lamb_shift_derivative: requires omega < 0");
    if (sd.eta == 0.0) return 0.0;
    auto f = [&](double w) {
        const double d = omega - w;
        return -j_omega(sd, w) / (2.0 * kPi * d * d);
    };
    return integrate_from_zero_real(f, spec.truncation(0.0), sd.s, spec);
}

std::optional<LocalizedMode> localized_mode(const SpectralDensity& sd, const QuadSpec& spec) {
    sd.validate();
    if (sd.eta == 0.0) return std::nullopt;

    auto pole = [&](double w) { return w - sd.omega0 - lamb_shift(sd, w, spec); };

    // pole(0-) = -(omega0 + Delta(0)) is positive exactly when eta > eta_c.
    const double edge = pole(0.0);
    if (!(edge > 1e-13 * sd.omega0)) return std::nullopt;

    const double search = sd.omega0 + sd.eta * sd.omega_c * std::tgamma(sd.s) + 1.0;
    const double wb = find_root(pole, -search, 0.0, 1e-14 * search);
    if (!(wb < 0.0)) return std::nullopt;

    LocalizedMode mode;
    mode.omega_b = wb;
    mode.residue_z = 1.0 / (1.0 - lamb_shift_derivative(sd, wb, spec));
    mode.pole_residual = std::abs(pole(wb));
    return mode;
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kChebOrder = 24;

double cheb_node(int k) { return std::cos(kPi * k / kChebOrder); }

}  // namespace

LambShiftTable::LambShiftTable(const SpectralDensity& sd, double omega_max, const QuadSpec& spec)
    : sd_(sd), spec_(spec), lo_(1e-4 * sd.omega_c), hi_(omega_max) {
    sd_.validate();
    if (!(omega_max > lo_)) throw std::invalid_argument("LambShiftTable: omega_max too small");
    if (!(omega_max < spec.truncation(0.0)))
        throw std::invalid_argument("LambShiftTable: omega_max must lie below the quadrature cutoff");

    edges_.push_back(lo_);
    while (edges_.back() * 2.0 < hi_) edges_.push_back(edges_.back() * 2.0);
    edges_.push_back(hi_);

    values_.resize(edges_.size() - 1);
    for (std::size_t p = 0; p + 1 < edges_.size(); ++p) {
        const double a = edges_[p];
        const double b = edges_[p + 1];
        auto& vals = values_[p];
        vals.resize(kChebOrder + 1);
        for (int k = 0; k <= kChebOrder; ++k) {
            const double w = 0.5 * (a + b) + 0.5 * (b - a) * cheb_node(k);
            vals[k] = lamb_shift(sd_, w, spec_);
        }
    }
}

double LambShiftTable::operator()(double omega) const {
    if (omega < lo_ || omega > hi_) return lamb_shift(sd_, omega, spec_);
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), omega);
    std::size_t p = static_cast<std::size_t>(std::distance(edges_.begin(), it));
    p = std::clamp<std::size_t>(p, 1, edges_.size() - 1) - 1;
    const double a = edges_[p];
    const double b = edges_[p + 1];
    const double x = (2.0 * omega - a - b) / (b - a);
    const auto& vals = values_[p];

    // Barycentric formula for second-kind Chebyshev points.
    double num = 0.0;
    double den = 0.0;
    for (int k = 0; k <= kChebOrder; ++k) {
        const double diff = x - cheb_node(k);
        if (diff == 0.0) return vals[k];
        double w = (k % 2 == 0) ? 1.0 : -1.0;
        if (k == 0 || k == kChebOrder) w *= 0.5;
        w /= diff;
        num += w * vals[k];
        den += w;
    }
    return num / den;
}

}  // namespace nmcorr
