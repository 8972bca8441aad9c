// validate.cpp - cross-oracle self test run by `nmcorr validate`

#include "validate.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>

#include "nmcorr/measure.hpp"

namespace nmcorr::cli {

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

const double kS[] = {0.5, 1.0, 2.0, 3.0};

Outcome sum_rule() {
    double worst = 0.0;
    for (double s : kS)
        for (double er : {0.5, 1.5}) {
            const auto sd = SpectralDensity::with_relative_coupling(s, er);
            worst = std::max(worst, std::abs(eval_u_spectral(sd, 0.0) - 1.0));
        }
    return {worst < 1e-6, "max |u(0) - 1| = " + sci(worst) + " (limit 1e-6)"};
}

Outcome critical_threshold(bool quick) {
    double worst = 0.0;
    for (double s : kS) {
        if (quick && s != 1.0) continue;
        auto present = [&](double eta) {
            SpectralDensity sd = SpectralDensity::with_relative_coupling(s, 0.0);
            sd.eta = eta;
            return localized_mode(sd).has_value();
        };
        const double ec = critical_coupling(SpectralDensity::with_relative_coupling(s, 1.0));
        double lo = 0.5 * ec, hi = 1.5 * ec;
        while (hi - lo > 1e-5 * ec) {
            const double mid = 0.5 * (lo + hi);
            (present(mid) ? hi : lo) = mid;
        }
        worst = std::max(worst, std::abs(0.5 * (lo + hi) / ec - 1.0));
    }
    return {worst < 1e-4, "max relative offset of the switch = " + sci(worst) + " (limit 1e-4)"};
}

Outcome propagator_routes(bool quick) {
    double worst = 0.0;
    const TimeGrid grid{0.0, 50.0, quick ? 2500u : 5000u};
    for (double s : kS)
        for (double er : {0.5, 1.5}) {
            if (quick && s != 1.0) continue;
            const auto sd = SpectralDensity::with_relative_coupling(s, er);
            const auto vt = solve_u_volterra(sd, grid);
            const auto st = SpectralPropagator(sd, grid.t_max).tabulate(grid);
            for (std::size_t k = 0; k < grid.size(); ++k) worst = std::max(worst, std::abs(vt.u[k] - st.u[k]));
        }
    return {worst < 1e-4, "max |u_volterra - u_spectral| on [0, 50] = " + sci(worst) + " (limit 1e-4)"};
}

Outcome noise_forms(bool quick) {
    const auto sd = SpectralDensity::with_relative_coupling(1.0, 0.5);
    const BathSpec bath{UnitConversion{}.theta_from_kelvin(0.5)};
    const TimeGrid grid{0.0, 5.0, 500};
    const SpectralPropagator sp(sd, grid.t_max);
    const auto table = sp.tabulate(grid);
    std::vector<double> pts = quick ? std::vector<double>{2.0, 5.0} : std::vector<double>{1.0, 2.0, 3.0, 4.0, 5.0};
    const auto fluct = build_fluctuation_table(sd, bath, table, sp.grid(), pts);
    double worst = 0.0;
    for (double t : pts)
        for (double s : pts) {
            const cplx vf = fluct.two_time(grid.index_of(t), grid.index_of(s));
            worst = std::max(worst, std::abs(vf - v_two_time_direct(sd, bath, table, t, s)));
        }
    return {worst < 1e-5, "max |v_frequency - v_direct| = " + sci(worst) + " (limit 1e-5)"};
}

Outcome zero_coupling() {
    double worst = 0.0;
    for (double t : {0.0, 3.0, 10.0}) {
        ParameterRecord p;
        p.eta_rel = 0.0;
        p.theta = 6.5;
        p.t = t;
        const auto c = compute_curve(p, 20.0, 40);
        for (double n : c.n_value) worst = std::max(worst, n);
    }
    return {worst < 1e-12, "max N at eta = 0: " + sci(worst) + " (limit 1e-12)"};
}

Outcome markov_ode() {
    const auto sd = SpectralDensity::with_relative_coupling(1.0, 0.5);
    const MarkovCoefficients mc = markov_coefficients(sd, BathSpec{6.5});
    const InitialState st{1.0};
    std::mt19937_64 rng(20260);
    std::uniform_real_distribution<double> ut(0.0, 20.0), utau(0.1, 50.0);
    const double h = 1e-3;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double t = ut(rng), tau = utau(rng);
        auto c = [&](double x) { return markov_correlation(st, mc, t, x); };
        const cplx d = (-c(tau + 2 * h) + 8.0 * c(tau + h) - 8.0 * c(tau - h) + c(tau - 2 * h)) / (12.0 * h);
        const cplx r = d + cplx(mc.gamma, mc.omega_prime) * c(tau);
        worst = std::max(worst, std::abs(r) / std::max(1.0, std::abs(c(tau))));
    }
    return {worst < 1e-10, "max ODE residual (4th-order difference) = " + sci(worst) + " (limit 1e-10)"};
}

Outcome plateau_and_temperature() {
    SweepConfig cfg;
    cfg.axis = SweepAxis::temperature;
    cfg.values = {0.05, 0.5, 5.0};
    cfg.base.s = 1.0;
    cfg.base.eta_rel = 1.5;
    const auto curves = run_sweep(cfg);
    std::vector<double> plateau;
    double spread05 = 0.0;
    for (const auto& c : curves) {
        double lo = 1e300, hi = -1e300, sum = 0.0;
        int n = 0;
        for (std::size_t m = 0; m < c.tau.size(); ++m)
            if (c.tau[m] >= 150.0 - 1e-9) {
                lo = std::min(lo, c.n_value[m]);
                hi = std::max(hi, c.n_value[m]);
                sum += c.n_value[m];
                ++n;
            }
        plateau.push_back(sum / n);
        if (c.params.kelvin == 0.5) spread05 = (hi - lo) / (sum / n);
    }
    const double asym = asymptotic_measure(InitialState{1.0}, curves[1].params.density(), curves[1].params.bath());
    const double rel = std::abs(plateau[1] / asym - 1.0);
    const bool mono = plateau[0] - plateau[1] > 1e-3 && plateau[1] - plateau[2] > 1e-3;
    return {rel < 0.02 && spread05 < 0.05 && mono,
            "plateau(0.05, 0.5, 5 K) = " + sci(plateau[0]) + ", " + sci(plateau[1]) + ", " + sci(plateau[2]) +
                "; spread at 0.5 K " + sci(spread05) + " (< 5e-2); vs long-time limit " + sci(rel) + " (< 2e-2)"};
}

Outcome weak_transience() {
    ParameterRecord p;
    p.s = 1.0;
    p.eta_rel = 0.1;
    p.theta = UnitConversion{}.theta_from_kelvin(0.5);
    p.kelvin = 0.5;
    const auto c = compute_curve(p);
    return {c.n_value.back() < 0.05, "N(0, 200) = " + sci(c.n_value.back()) + " (limit 5e-2)"};
}

}  // namespace

std::vector<CheckResult> run_validation(bool quick, std::ostream& out) {
    struct Check {
        const char* name;
        bool in_quick;
        std::function<Outcome()> run;
    };
    const std::vector<Check> checks = {
        {"spectral sum rule", true, sum_rule},
        {"critical coupling threshold", true, [quick] { return critical_threshold(quick); }},
        {"propagator: volterra vs spectral", true, [quick] { return propagator_routes(quick); }},
        {"noise: frequency form vs double integral", true, [quick] { return noise_forms(quick); }},
        {"zero coupling gives N = 0", true, zero_coupling},
        {"markov correlator solves its equation", true, markov_ode},
        {"strong coupling plateau and temperature order", false, plateau_and_temperature},
        {"weak coupling transience", false, weak_transience},
    };
    std::vector<CheckResult> results;
    for (const auto& c : checks) {
        if (quick && !c.in_quick) continue;
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult r;
        r.name = c.name;
        try {
            const Outcome o = c.run();
            r.pass = o.pass;
            r.detail = o.detail;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.1fs", r.seconds);
        out << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << " [" << secs << "]" << std::endl;
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace nmcorr::cli
