#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nmcorr/errors.hpp"
#include "nmcorr/measure.hpp"

using namespace nmcorr;

namespace {

const UnitConversion kUnits{};
const double kTheta05 = kUnits.theta_from_kelvin(0.5);

ParameterRecord record(double s, double er, double kelvin, double n0, double t = 0.0) {
    ParameterRecord r;
    r.s = s;
    r.eta_rel = er;
    r.kelvin = kelvin;
    r.theta = kUnits.theta_from_kelvin(kelvin);
    r.n0 = n0;
    r.t = t;
    return r;
}

}  // namespace

TEST_CASE("measure_grid") {
    const TimeGrid g = measure_grid(0.0, 200.0, 2000);
    CHECK(g.n_steps == 4000);
    CHECK(g.dt() == doctest::Approx(0.05));
    const TimeGrid h = measure_grid(5.0, 50.0, 100, 0.1);
    CHECK(h.dt() == doctest::Approx(0.1));
    CHECK(h.t_max == doctest::Approx(55.0));
    CHECK(h.index_of(5.0) == 50);
    CHECK(measure_grid(0.0, 10.0, 1000, 0.05).n_steps == 1000);
    CHECK_THROWS_AS(measure_grid(0.03, 200.0, 2000), std::invalid_argument);
    CHECK_THROWS_AS(measure_grid(0.0, 0.0, 2000), std::invalid_argument);
}

TEST_CASE("N: zero at tau = 0, bounded, vanishes without coupling") {
    for (double er : {0.5, 1.5}) {
        const auto c = compute_curve(record(1.0, er, 0.5, 1.0, 2.0), 40.0, 400);
        CHECK(c.n_value[0] == 0.0);
        CHECK(c.tau.size() == 401);
        for (double x : c.n_value) {
            REQUIRE(x >= 0.0);
            REQUIRE(x <= 2.0 + 1e-9);
        }
        CHECK(*std::max_element(c.n_value.begin(), c.n_value.end()) > 1e-3);
    }
    for (double t : {0.0, 3.0}) {
        const auto c = compute_curve(record(1.0, 0.0, 0.5, 1.0, t), 20.0, 200, true);
        for (double x : c.n_value) CHECK(x < 1e-12);
        for (double x : *c.n_prime) CHECK(x < 1e-12);
    }
}

TEST_CASE("non_markovianity agrees with the curve builder") {
    const auto rec = record(2.0, 1.5, 0.5, 3.0, 1.0);
    const auto c = compute_curve(rec, 10.0, 100);
    const TimeGrid g = measure_grid(1.0, 10.0, 100);
    const auto sd = rec.density();
    const auto table = build_propagator_table(sd, g);
    const auto fluct = build_fluctuation_table(sd, rec.bath(), table, noise_grid(sd, g.t_max), {1.0});
    const auto mc = markov_coefficients(sd, rec.bath());
    for (std::size_t m = 0; m < c.tau.size(); m += 9)
        CHECK(std::abs(non_markovianity(rec.state(), table, fluct, mc, 1.0, c.tau[m]) - c.n_value[m]) < 1e-12);
}

TEST_CASE("asymptotic_measure: limits") {
    const BathSpec bath{kTheta05};
    CHECK(asymptotic_measure(InitialState{1.0}, SpectralDensity::with_relative_coupling(1.0, 0.5), bath) == 0.0);
    CHECK_THROWS_AS(asymptotic_measure(InitialState{1.0}, SpectralDensity::with_relative_coupling(1.0, 0.0), bath),
                    NoDecay);
    for (double s : {0.5, 1.0, 3.0}) {
        const auto sd = SpectralDensity::with_relative_coupling(s, 1.5);
        CHECK(asymptotic_measure(InitialState{1.0}, sd, BathSpec{0.0}) == doctest::Approx(1.0).epsilon(1e-14));
        const double a = asymptotic_measure(InitialState{1.0}, sd, bath);
        CHECK(a > 0.0);
        CHECK(a < 1.0);
        // More initial excitation lifts the plateau.
        CHECK(asymptotic_measure(InitialState{10.0}, sd, bath) > a);
    }
    CHECK_THROWS_AS(asymptotic_measure(InitialState{0.0}, SpectralDensity::with_relative_coupling(1.0, 1.5),
                                       BathSpec{0.0}),
                    DegenerateState);
}

TEST_CASE("strong-coupling plateau matches the long-time closed form") {
    // s = 1 and s = 2; s = 1/2 still creeps at tau = 200 (t^-1/2 tail) and is
    // left out.
    for (double s : {1.0, 2.0}) {
        const auto rec = record(s, 1.5, 0.5, 1.0);
        const auto c = compute_curve(rec, 200.0, 2000);
        double lo = 1e300, hi = -1e300, mean = 0.0;
        std::size_t n = 0;
        for (std::size_t m = 0; m < c.tau.size(); ++m)
            if (c.tau[m] >= 150.0 - 1e-9) {
                lo = std::min(lo, c.n_value[m]);
                hi = std::max(hi, c.n_value[m]);
                mean += c.n_value[m];
                ++n;
            }
        mean /= static_cast<double>(n);
        CHECK((hi - lo) / mean < 0.05);
        CHECK(mean == doctest::Approx(asymptotic_measure(rec.state(), rec.density(), rec.bath())).epsilon(0.02));
    }
}

TEST_CASE("guarnieri_measure") {
    const auto rec = record(1.0, 0.5, 0.5, 1.0, 5.0);
    const TimeGrid g = measure_grid(5.0, 30.0, 300);
    const auto sd = rec.density();
    const auto table = build_propagator_table(sd, g);
    const auto fluct = build_fluctuation_table(sd, rec.bath(), table, noise_grid(sd, g.t_max), {0.0, 5.0});
    double peak = 0.0;
    for (double tau = 0.0; tau <= 30.0; tau += 1.0) {
        CHECK(guarnieri_measure(rec.state(), table, fluct, 0.0, tau) < 1e-12);
        peak = std::max(peak, guarnieri_measure(rec.state(), table, fluct, 5.0, tau));
    }
    CHECK(peak > 1e-3);

    const auto cold = build_fluctuation_table(sd, BathSpec{0.0}, table, noise_grid(sd, g.t_max), {0.0});
    CHECK_THROWS_AS(guarnieri_measure(InitialState{0.0}, table, cold, 0.0, 1.0), ExactZero);

    const auto c = compute_curve(rec, 30.0, 300, true);
    REQUIRE(c.n_prime.has_value());
    CHECK((*c.n_prime)[0] < 1e-12);
    for (std::size_t m = 10; m < c.tau.size(); m += 10)
        CHECK(std::abs((*c.n_prime)[m] - guarnieri_measure(rec.state(), table, fluct, 5.0, c.tau[m])) < 1e-12);
}

TEST_CASE("SweepConfig validation and records") {
    SweepConfig c;
    c.base = record(1.0, 0.5, 0.5, 1.0);
    c.axis = SweepAxis::temperature;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.values = {0.5, 0.05};
    CHECK_NOTHROW(c.validate());
    c.values = {0.05, 0.5, 0.5};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.values = {0.05, 5.0, 0.5};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.values = {-1.0, 0.5};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.values = {0.05, 0.5, 5.0};
    CHECK(c.record(2).kelvin == 5.0);
    CHECK(c.record(2).theta == doctest::Approx(kUnits.theta_from_kelvin(5.0)));
    c.axis = SweepAxis::initial_occupation;
    CHECK(c.record(1).n0 == 0.5);
    c.axis = SweepAxis::coupling;
    CHECK(c.record(0).eta_rel == 0.05);
    CHECK(to_string(SweepAxis::initial_occupation) == "initial_occupation");
}

TEST_CASE("figure presets") {
    std::size_t total[4] = {0, 0, 0, 0};
    for (int f : {1, 2, 3}) {
        const auto panels = figure_preset(f);
        for (const auto& p : panels) {
            CHECK(p.labels.size() == p.sweep.values.size());
            CHECK_NOTHROW(p.sweep.validate());
            CHECK(p.sweep.base.omega_c == 5.0);
            total[f] += p.sweep.values.size();
        }
    }
    CHECK(total[1] == 20);
    CHECK(total[2] == 24);
    CHECK(total[3] == 24);
    const auto f1 = figure_preset(1);
    CHECK(f1[3].sweep.base.s == 3.0);
    CHECK(f1[0].labels[0] == "eta0.1");
    const auto f2 = figure_preset(2);
    CHECK(f2[3].sweep.base.s == 1.0);
    CHECK(f2[3].sweep.base.eta_rel == 1.5);
    CHECK(f2[0].labels[0] == "T0.05K");
    CHECK(figure_preset(3)[6].labels[2] == "n0_50");
    CHECK_THROWS_AS(figure_preset(4), std::invalid_argument);
}

TEST_CASE("run_sweep: shared tables equal separate runs; thread count does not matter") {
    SweepConfig c;
    c.base = record(1.0, 1.5, 0.5, 1.0, 2.0);
    c.units = kUnits;
    c.tau_max = 20.0;
    c.n_tau = 200;
    c.with_nprime = true;
    for (auto axis : {SweepAxis::temperature, SweepAxis::initial_occupation}) {
        c.axis = axis;
        c.values = axis == SweepAxis::temperature ? std::vector<double>{0.05, 0.5, 5.0} : std::vector<double>{1, 10, 50};
        const auto sw = run_sweep(c);
        REQUIRE(sw.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            const auto one = compute_curve(c.record(i), c.tau_max, c.n_tau, true);
            for (std::size_t m = 0; m < one.tau.size(); ++m) {
                REQUIRE(std::abs(sw[i].n_value[m] - one.n_value[m]) < 1e-12);
                REQUIRE(std::abs((*sw[i].n_prime)[m] - (*one.n_prime)[m]) < 1e-12);
            }
        }
    }
    c.axis = SweepAxis::coupling;
    c.values = {0.5, 1.0, 1.5};
    c.with_nprime = false;
    const auto a = run_sweep(c, SweepOptions{1});
    const auto b = run_sweep(c, SweepOptions{3});
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a[i].params.eta_rel == c.values[i]);
        CHECK(a[i].n_value == b[i].n_value);
    }
    CHECK(a[1].route == PropagatorRoute::volterra);
    CHECK(a[2].route == PropagatorRoute::spectral);
}
