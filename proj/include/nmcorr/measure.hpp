// measure.hpp - non-Markovianity N(t, tau) = |g_E(t, tau) - g_M(t, tau)| and sweeps

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nmcorr/correlators.hpp"

namespace nmcorr {

struct MeasureCurve {
    double t{0.0};
    std::vector<double> tau;
    std::vector<double> n_value;
    std::optional<std::vector<double>> n_prime;
    std::vector<cplx> g_exact;
    std::vector<cplx> g_markov;
    ParameterRecord params;
    PropagatorRoute route{PropagatorRoute::spectral};
};

enum class SweepAxis { coupling, temperature, initial_occupation };

std::string to_string(SweepAxis a);

struct SweepConfig {
    SweepAxis axis{SweepAxis::coupling};
    std::vector<double> values;  // eta/eta_c, kelvin, or n0
    ParameterRecord base;
    UnitConversion units;        // for the temperature axis
    double tau_max{200.0};
    std::size_t n_tau{2000};
    bool with_nprime{false};
    double max_dt{0.05};         // integration step is tau_max / n_tau split down to at most this

    void validate() const;
    /// The parameter record for values[i].
    ParameterRecord record(std::size_t i) const;
};

struct SweepOptions {
    unsigned jobs{0};  // worker threads for independent sweep values; 0 = hardware concurrency
};

/// |g_E - g_M| at (t, tau) from prepared tables.
double non_markovianity(const InitialState& state, const PropagatorTable& table, const FluctuationTable& fluct,
                        const MarkovCoefficients& mc, double t, double tau);

/// Long-time limit of N(0, tau) when the Markov coherence decays:
/// Z sqrt(n0) / sqrt(n0 Z^2 + v_ss).  Throws NoDecay if J(w0) = 0.
double asymptotic_measure(const InitialState& state, const SpectralDensity& sd, const BathSpec& bath,
                          const TimeGrid& grid = {});

/// |1 - C_qrt / C_exact|; throws ExactZero if |C_exact| < 1e-14.
double guarnieri_measure(const InitialState& state, const PropagatorTable& table, const FluctuationTable& fluct,
                         double t, double tau);

/// Time grid covering [0, t + tau_max] with t and every tau sample on it.
TimeGrid measure_grid(double t, double tau_max, std::size_t n_tau, double max_dt = 0.05);

/// One curve for a single parameter record.
MeasureCurve compute_curve(const ParameterRecord& params, double tau_max = 200.0, std::size_t n_tau = 2000,
                           bool with_nprime = false, double max_dt = 0.05);

/// One curve per sweep value, in order.  Temperature and occupation sweeps
/// share a single propagator and fluctuation pass.
std::vector<MeasureCurve> run_sweep(const SweepConfig& cfg, const SweepOptions& opts = {});

struct FigurePanel {
    int figure{1};
    char panel{'a'};
    SweepConfig sweep;
    std::vector<std::string> labels;  // one per sweep value, used in file names
};

/// Parameter grids of the three figures: 4 coupling panels for figure 1,
/// 8 temperature panels for figure 2, 8 occupation panels for figure 3.
std::vector<FigurePanel> figure_preset(int figure, const UnitConversion& units = {}, double tau_max = 200.0,
                                       std::size_t n_tau = 2000);

}  // namespace nmcorr
