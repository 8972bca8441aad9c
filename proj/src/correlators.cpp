// correlators.cpp - two-time correlators, populations and coherences

#include "nmcorr/correlators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nmcorr/errors.hpp"

namespace nmcorr {

namespace {

constexpr double kDegenerate = 1e-14;

void check_tables(const PropagatorTable& table, const FluctuationTable& fluct) {
    if (table.grid.t_max != fluct.grid.t_max || table.grid.n_steps != fluct.grid.n_steps)
        throw std::invalid_argument("correlators: propagator and fluctuation tables use different grids");
}

std::size_t tau_index(const TimeGrid& grid, double tau) {
    if (tau < 0.0) throw std::invalid_argument("correlators: tau must be >= 0");
    return grid.index_of(tau);
}

// Index-level forms shared by the public functions and the curve builder.
double population_at(double n0, const PropagatorTable& table, const FluctuationTable& fluct, std::size_t k) {
    return fluct.v_diag[k] + n0 * std::norm(table.u[k]);
}

cplx exact_at(double n0, const PropagatorTable& table, const FluctuationTable& fluct, std::size_t i, std::size_t k) {
    // tau = 0 is the population itself, real and identical to n(t).
    if (i == k) return {population_at(n0, table, fluct, i), 0.0};
    return std::conj(table.u[i]) * n0 * table.u[k] + std::conj(fluct.two_time(i, k));
}

cplx normalise(cplx c, double n_t, double n_tt, const char* who) {
    if (n_t < kDegenerate || n_tt < kDegenerate)
        throw DegenerateState(std::string(who) + ": population below 1e-14 (n(t) = " + std::to_string(n_t) +
                              ", n(t+tau) = " + std::to_string(n_tt) + ")");
    if (n_t == n_tt) return c / n_t;
    return c / std::sqrt(n_t * n_tt);
}

}  // namespace

void InitialState::validate() const {
    if (!(n0 >= 0.0)) throw std::invalid_argument("InitialState: n0 must be >= 0");
}

cplx exact_correlation(const InitialState& state, const PropagatorTable& table, const FluctuationTable& fluct,
                       double t, double tau) {
    state.validate();
    check_tables(table, fluct);
    const std::size_t i = table.grid.index_of(t);
    const std::size_t k = i + tau_index(table.grid, tau);
    if (k > table.grid.n_steps) throw std::invalid_argument("exact_correlation: t + tau beyond the grid");
    return exact_at(state.n0, table, fluct, i, k);
}

double exact_population(const InitialState& state, const PropagatorTable& table, const FluctuationTable& fluct,
                        double t) {
    state.validate();
    check_tables(table, fluct);
    return population_at(state.n0, table, fluct, table.grid.index_of(t));
}

ExactCoefficients exact_coefficients(const PropagatorTable& table, const FluctuationTable& fluct, double t) {
    check_tables(table, fluct);
    const std::size_t k = table.grid.index_of(t);
    const cplx u = table.u[k];
    if (std::abs(u) < 1e-12)
        throw UZero("exact_coefficients: |u(t)| = " + std::to_string(std::abs(u)) + " at t = " + std::to_string(t));
    const cplx r = table.u_dot[k] / u;
    ExactCoefficients ec;
    ec.omega_prime_t = -r.imag();
    ec.gamma_t = -r.real();
    ec.gamma_tilde_t = fluct.v_dot[k] + 2.0 * fluct.v_diag[k] * ec.gamma_t;
    return ec;
}

MarkovCoefficients markov_coefficients(const SpectralDensity& sd, const BathSpec& bath) {
    sd.validate();
    bath.validate();
    MarkovCoefficients mc;
    const double J = j_omega(sd, sd.omega0);
    mc.nbar = bose_occupation(bath, sd.omega0);
    mc.gamma = 0.5 * J;
    mc.gamma_tilde = J * mc.nbar;
    mc.omega_prime = sd.omega0 + lamb_shift(sd, sd.omega0, precise_quad(sd));
    return mc;
}

double markov_population(const InitialState& state, const MarkovCoefficients& mc, double t) {
    state.validate();
    const double decay = std::exp(-2.0 * mc.gamma * t);
    return state.n0 * decay - mc.nbar * std::expm1(-2.0 * mc.gamma * t);
}

cplx markov_correlation(const InitialState& state, const MarkovCoefficients& mc, double t, double tau) {
    if (t < 0.0 || tau < 0.0) throw std::invalid_argument("markov_correlation: t and tau must be >= 0");
    return markov_population(state, mc, t) * std::exp(cplx(-mc.gamma * tau, -mc.omega_prime * tau));
}

cplx naive_qrt_correlation(const InitialState& state, const PropagatorTable& table, const FluctuationTable& fluct,
                           double t, double tau) {
    state.validate();
    check_tables(table, fluct);
    const std::size_t i = table.grid.index_of(t);
    const std::size_t m = tau_index(table.grid, tau);
    return population_at(state.n0, table, fluct, i) * table.u[m];
}

cplx coherence_exact(const InitialState& state, const PropagatorTable& table, const FluctuationTable& fluct,
                     double t, double tau) {
    state.validate();
    check_tables(table, fluct);
    const std::size_t i = table.grid.index_of(t);
    const std::size_t k = i + tau_index(table.grid, tau);
    if (k > table.grid.n_steps) throw std::invalid_argument("coherence_exact: t + tau beyond the grid");
    return normalise(exact_at(state.n0, table, fluct, i, k), population_at(state.n0, table, fluct, i),
                     population_at(state.n0, table, fluct, k), "coherence_exact");
}

cplx coherence_markov(const InitialState& state, const MarkovCoefficients& mc, double t, double tau) {
    return normalise(markov_correlation(state, mc, t, tau), markov_population(state, mc, t),
                     markov_population(state, mc, t + tau), "coherence_markov");
}

CorrelationCurve correlation_curve(const ParameterRecord& params, const PropagatorTable& table,
                                   const FluctuationTable& fluct, const MarkovCoefficients& mc, double tau_step,
                                   std::size_t n_tau) {
    const InitialState state = params.state();
    state.validate();
    check_tables(table, fluct);
    const TimeGrid& g = table.grid;
    const std::size_t i = g.index_of(params.t);
    const std::size_t stride = g.index_of(tau_step);
    if (stride == 0) throw std::invalid_argument("correlation_curve: tau_step must be positive");
    if (i + stride * n_tau > g.n_steps) throw std::invalid_argument("correlation_curve: tau range beyond the grid");

    CorrelationCurve c;
    c.t = params.t;
    c.params = params;
    const std::size_t n = n_tau + 1;
    c.tau.resize(n);
    c.exact.resize(n);
    c.markov.resize(n);
    c.qrt_naive.resize(n);
    c.g_exact.resize(n);
    c.g_markov.resize(n);
    const double n_t = population_at(state.n0, table, fluct, i);
    const double nm_t = markov_population(state, mc, params.t);
    for (std::size_t m = 0; m < n; ++m) {
        const std::size_t k = i + m * stride;
        const double tau = static_cast<double>(m) * tau_step;
        c.tau[m] = tau;
        c.exact[m] = exact_at(state.n0, table, fluct, i, k);
        c.markov[m] = markov_correlation(state, mc, params.t, tau);
        c.qrt_naive[m] = n_t * table.u[m * stride];
        c.g_exact[m] = normalise(c.exact[m], n_t, population_at(state.n0, table, fluct, k), "coherence_exact");
        c.g_markov[m] = normalise(c.markov[m], nm_t, markov_population(state, mc, params.t + tau), "coherence_markov");
    }
    return c;
}

}  // namespace nmcorr
