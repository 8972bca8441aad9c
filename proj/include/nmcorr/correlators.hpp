// correlators.hpp - exact, Markov and naive-regression two-time correlators
//
// All exact quantities are read off a PropagatorTable and a FluctuationTable
// built on the same time grid; t and t + tau must be grid points and the
// fluctuation table needs an anchor at t.

#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "nmcorr/fluctuation.hpp"
#include "nmcorr/propagator.hpp"
#include "nmcorr/spectral.hpp"

namespace nmcorr {

struct InitialState {
    double n0{1.0};  // n(t0)

    void validate() const;
};

/// Everything needed to reproduce a run, in internal units plus the user's
/// temperature when it was given in kelvin.
struct ParameterRecord {
    double s{1.0};
    double eta_rel{0.0};   // eta / eta_c
    double omega_c{5.0};   // units of omega0
    double theta{0.0};     // k_B T / (hbar omega0)
    double kelvin{std::numeric_limits<double>::quiet_NaN()};
    double n0{1.0};
    double t{0.0};

    SpectralDensity density() const { return SpectralDensity::with_relative_coupling(s, eta_rel, omega_c); }
    BathSpec bath() const { return BathSpec{theta}; }
    InitialState state() const { return InitialState{n0}; }
};

struct MarkovCoefficients {
    double gamma{0.0};        // J(w0)/2
    double gamma_tilde{0.0};  // J(w0) n(w0)
    double omega_prime{1.0};  // w0 + Delta(w0)
    double nbar{0.0};         // n(w0, T)
};

struct ExactCoefficients {
    double omega_prime_t{0.0};
    double gamma_t{0.0};
    double gamma_tilde_t{0.0};
};

struct CorrelationCurve {
    double t{0.0};
    std::vector<double> tau;
    std::vector<cplx> exact;
    std::vector<cplx> markov;
    std::vector<cplx> qrt_naive;
    std::vector<cplx> g_exact;
    std::vector<cplx> g_markov;
    ParameterRecord params;
};

/// conj(u(t)) n0 u(t + tau) + conj(v(t, t + tau)).
cplx exact_correlation(const InitialState& state, const PropagatorTable& table, const FluctuationTable& fluct,
                       double t, double tau);
/// v(t, t) + n0 |u(t)|^2.
double exact_population(const InitialState& state, const PropagatorTable& table, const FluctuationTable& fluct,
                        double t);
/// From u_dot / u and v, v_dot; throws UZero when |u(t)| < 1e-12.
ExactCoefficients exact_coefficients(const PropagatorTable& table, const FluctuationTable& fluct, double t);

MarkovCoefficients markov_coefficients(const SpectralDensity& sd, const BathSpec& bath);
/// [n0 e^{-2 gamma t} + nbar (1 - e^{-2 gamma t})] e^{-(gamma + i w0') tau}.
cplx markov_correlation(const InitialState& state, const MarkovCoefficients& mc, double t, double tau);
double markov_population(const InitialState& state, const MarkovCoefficients& mc, double t);

/// n(t) u(tau): the regression theorem applied naively to the exact master equation.
cplx naive_qrt_correlation(const InitialState& state, const PropagatorTable& table, const FluctuationTable& fluct,
                           double t, double tau);

/// Correlators normalised by the populations at t and t + tau; both throw
/// DegenerateState if either population is below 1e-14.
cplx coherence_exact(const InitialState& state, const PropagatorTable& table, const FluctuationTable& fluct,
                     double t, double tau);
cplx coherence_markov(const InitialState& state, const MarkovCoefficients& mc, double t, double tau);

/// All correlators on tau = k * tau_step, k = 0 .. n_tau.  tau_step must be a
/// multiple of the grid spacing.
CorrelationCurve correlation_curve(const ParameterRecord& params, const PropagatorTable& table,
                                   const FluctuationTable& fluct, const MarkovCoefficients& mc, double tau_step,
                                   std::size_t n_tau);

}  // namespace nmcorr
