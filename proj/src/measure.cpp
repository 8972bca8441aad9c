// measure.cpp - non-Markovianity curves, long-time limit, sweeps and figure presets

#include "nmcorr/measure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "nmcorr/errors.hpp"

namespace nmcorr {

namespace {

std::string fmt_value(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

// Curves for several records that share s, eta and t: one propagator, one
// fluctuation pass over all distinct temperatures.
std::vector<MeasureCurve> curves_for_shared_table(const std::vector<ParameterRecord>& recs, double tau_max,
                                                  std::size_t n_tau, bool with_nprime, double max_dt) {
    const ParameterRecord& p0 = recs.front();
    const SpectralDensity sd = p0.density();
    const TimeGrid grid = measure_grid(p0.t, tau_max, n_tau, max_dt);
    const double tau_step = tau_max / static_cast<double>(n_tau);

    PropagatorTable table;
    FrequencyGrid freq;
    if (sd.eta == 0.0) {
        table = build_propagator_table(sd, grid);
    } else {
        const SpectralPropagator sp(sd, grid.t_max);
        table = build_propagator_table(sd, grid, &sp);
        freq = sp.grid();
    }

    std::vector<double> thetas;
    for (const auto& r : recs) thetas.push_back(r.theta);
    std::sort(thetas.begin(), thetas.end());
    thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
    std::vector<BathSpec> baths;
    for (double th : thetas) baths.push_back(BathSpec{th});
    const auto flucts = build_fluctuation_tables(sd, baths, table, freq, {p0.t});

    std::vector<MeasureCurve> out;
    out.reserve(recs.size());
    for (const auto& r : recs) {
        const std::size_t b =
            static_cast<std::size_t>(std::lower_bound(thetas.begin(), thetas.end(), r.theta) - thetas.begin());
        const FluctuationTable& fluct = flucts[b];
        const MarkovCoefficients mc = markov_coefficients(sd, baths[b]);
        CorrelationCurve cc = correlation_curve(r, table, fluct, mc, tau_step, n_tau);

        MeasureCurve mcurve;
        mcurve.t = r.t;
        mcurve.params = r;
        mcurve.route = table.route;
        mcurve.tau = std::move(cc.tau);
        mcurve.n_value.resize(mcurve.tau.size());
        for (std::size_t m = 0; m < mcurve.tau.size(); ++m)
            mcurve.n_value[m] = std::abs(cc.g_exact[m] - cc.g_markov[m]);
        if (with_nprime) {
            std::vector<double> np(mcurve.tau.size());
            for (std::size_t m = 0; m < np.size(); ++m) {
                if (std::abs(cc.exact[m]) < 1e-14)
                    throw ExactZero("guarnieri_measure: |C_exact| < 1e-14 at tau = " + std::to_string(mcurve.tau[m]));
                np[m] = std::abs(1.0 - cc.qrt_naive[m] / cc.exact[m]);
            }
            mcurve.n_prime = std::move(np);
        }
        mcurve.g_exact = std::move(cc.g_exact);
        mcurve.g_markov = std::move(cc.g_markov);
        out.push_back(std::move(mcurve));
    }
    return out;
}

}  // namespace

std::string to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::coupling: return "coupling";
        case SweepAxis::temperature: return "temperature";
        case SweepAxis::initial_occupation: return "initial_occupation";
    }
    return "unknown";
}

void SweepConfig::validate() const {
    if (values.empty()) throw std::invalid_argument("SweepConfig: values must be non-empty");
    bool up = true, down = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
        up = up && values[i - 1] < values[i];
        down = down && values[i - 1] > values[i];
    }
    if (!up && !down) throw std::invalid_argument("SweepConfig: values must be strictly ordered");
    for (double v : values)
        if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("SweepConfig: values must be finite and >= 0");
    if (!(tau_max > 0.0) || n_tau == 0) throw std::invalid_argument("SweepConfig: need tau_max > 0 and n_tau > 0");
    if (!(max_dt > 0.0)) throw std::invalid_argument("SweepConfig: max_dt must be > 0");
    for (std::size_t i = 0; i < values.size(); ++i) {
        const ParameterRecord r = record(i);
        r.density().validate();
        r.bath().validate();
        r.state().validate();
    }
}

ParameterRecord SweepConfig::record(std::size_t i) const {
    ParameterRecord r = base;
    const double v = values.at(i);
    switch (axis) {
        case SweepAxis::coupling: r.eta_rel = v; break;
        case SweepAxis::temperature:
            r.kelvin = v;
            r.theta = units.theta_from_kelvin(v);
            break;
        case SweepAxis::initial_occupation: r.n0 = v; break;
    }
    return r;
}

double non_markovianity(const InitialState& state, const PropagatorTable& table, const FluctuationTable& fluct,
                        const MarkovCoefficients& mc, double t, double tau) {
    return std::abs(coherence_exact(state, table, fluct, t, tau) - coherence_markov(state, mc, t, tau));
}

double asymptotic_measure(const InitialState& state, const SpectralDensity& sd, const BathSpec& bath,
                          const TimeGrid& grid) {
    state.validate();
    sd.validate();
    bath.validate();
    if (j_omega(sd, sd.omega0) == 0.0)
        throw NoDecay("asymptotic_measure: J(w0) = 0, the Markov coherence does not decay");
    const auto mode = localized_mode(sd);
    const double z = mode ? mode->residue_z : 0.0;
    if (z == 0.0) return 0.0;
    const double v_ss = v_steady(sd, bath, grid);
    const double den = state.n0 * z * z + v_ss;
    if (den < 1e-14) throw DegenerateState("asymptotic_measure: steady population below 1e-14");
    return z * std::sqrt(state.n0) / std::sqrt(den);
}

double guarnieri_measure(const InitialState& state, const PropagatorTable& table, const FluctuationTable& fluct,
                         double t, double tau) {
    const cplx exact = exact_correlation(state, table, fluct, t, tau);
    if (std::abs(exact) < 1e-14)
        throw ExactZero("guarnieri_measure: |C_exact| < 1e-14 at t = " + std::to_string(t) +
                        ", tau = " + std::to_string(tau));
    return std::abs(1.0 - naive_qrt_correlation(state, table, fluct, t, tau) / exact);
}

TimeGrid measure_grid(double t, double tau_max, std::size_t n_tau, double max_dt) {
    if (!(t >= 0.0) || !(tau_max > 0.0) || n_tau == 0 || !(max_dt > 0.0))
        throw std::invalid_argument("measure_grid: need t >= 0, tau_max > 0, n_tau > 0, max_dt > 0");
    const double tau_step = tau_max / static_cast<double>(n_tau);
    const double sub = std::max(1.0, std::ceil(tau_step / max_dt - 1e-9));
    const double dt = tau_step / sub;
    const double kt = t / dt;
    if (std::abs(kt - std::round(kt)) > 1e-6)
        throw std::invalid_argument("measure_grid: t = " + std::to_string(t) + " is not a multiple of the step " +
                                    std::to_string(dt));
    const auto n = static_cast<std::size_t>(std::llround(kt)) + n_tau * static_cast<std::size_t>(sub);
    return TimeGrid{0.0, static_cast<double>(n) * dt, n};
}

MeasureCurve compute_curve(const ParameterRecord& params, double tau_max, std::size_t n_tau, bool with_nprime,
                           double max_dt) {
    return std::move(curves_for_shared_table({params}, tau_max, n_tau, with_nprime, max_dt).front());
}

std::vector<MeasureCurve> run_sweep(const SweepConfig& cfg, const SweepOptions& opts) {
    cfg.validate();
    std::vector<ParameterRecord> recs;
    for (std::size_t i = 0; i < cfg.values.size(); ++i) recs.push_back(cfg.record(i));

    if (cfg.axis != SweepAxis::coupling)
        return curves_for_shared_table(recs, cfg.tau_max, cfg.n_tau, cfg.with_nprime, cfg.max_dt);

    std::vector<MeasureCurve> out(recs.size());
    unsigned jobs = opts.jobs ? opts.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(recs.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
        for (std::size_t i = next++; i < recs.size(); i = next++) {
            try {
                out[i] = compute_curve(recs[i], cfg.tau_max, cfg.n_tau, cfg.with_nprime, cfg.max_dt);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<FigurePanel> figure_preset(int figure, const UnitConversion& units, double tau_max, std::size_t n_tau) {
    static constexpr double kS[] = {0.5, 1.0, 2.0, 3.0};
    std::vector<FigurePanel> panels;
    auto base_sweep = [&](double s) {
        SweepConfig c;
        c.units = units;
        c.tau_max = tau_max;
        c.n_tau = n_tau;
        c.base.s = s;
        c.base.omega_c = 5.0;
        c.base.kelvin = 0.5;
        c.base.theta = units.theta_from_kelvin(0.5);
        c.base.n0 = 1.0;
        c.base.t = 0.0;
        return c;
    };
    switch (figure) {
        case 1:
            for (int p = 0; p < 4; ++p) {
                FigurePanel fp{1, static_cast<char>('a' + p), base_sweep(kS[p]), {}};
                fp.sweep.axis = SweepAxis::coupling;
                fp.sweep.values = {0.1, 0.5, 1.0, 1.2, 1.5};
                for (double v : fp.sweep.values) fp.labels.push_back("eta" + fmt_value(v));
                panels.push_back(std::move(fp));
            }
            break;
        case 2:
        case 3:
            // a,c,e,g weak coupling; b,d,f,h strong; s rises every two panels.
            for (int p = 0; p < 8; ++p) {
                FigurePanel fp{figure, static_cast<char>('a' + p), base_sweep(kS[p / 2]), {}};
                fp.sweep.base.eta_rel = (p % 2 == 0) ? 0.5 : 1.5;
                if (figure == 2) {
                    fp.sweep.axis = SweepAxis::temperature;
                    fp.sweep.values = {0.05, 0.5, 5.0};
                    for (double v : fp.sweep.values) fp.labels.push_back("T" + fmt_value(v) + "K");
                } else {
                    fp.sweep.axis = SweepAxis::initial_occupation;
                    fp.sweep.values = {1.0, 10.0, 50.0};
                    for (double v : fp.sweep.values) fp.labels.push_back("n0_" + fmt_value(v));
                }
                panels.push_back(std::move(fp));
            }
            break;
        default: throw std::invalid_argument("figure_preset: figure must be 1, 2 or 3");
    }
    return panels;
}

}  // namespace nmcorr
