// fluctuation.cpp - noise function through the frequency-domain transform F(t, w)

#include "nmcorr/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nmcorr/errors.hpp"
#include "nmcorr/kernels.hpp"

namespace nmcorr {

bool FluctuationTable::has_anchor(std::size_t k) const {
    return std::binary_search(anchors.begin(), anchors.end(), k);
}

cplx FluctuationTable::two_time(std::size_t i, std::size_t k) const {
    const std::size_t lo = std::min(i, k);
    const auto it = std::lower_bound(anchors.begin(), anchors.end(), lo);
    if (it == anchors.end() || *it != lo)
        throw std::invalid_argument("FluctuationTable: no anchor at grid index " + std::to_string(lo));
    const std::size_t a = static_cast<std::size_t>(it - anchors.begin());
    const std::size_t hi = std::max(i, k);
    if (hi >= grid.size()) throw std::out_of_range("FluctuationTable: index beyond grid");
    const cplx v = rows[a][hi - lo];
    return i <= k ? v : std::conj(v);
}

FrequencyGrid noise_grid(const SpectralDensity& sd, double t_max) {
    sd.validate();
    if (sd.eta == 0.0) return {};
    return SpectralPropagator(sd, t_max).grid();
}

cplx compute_transform(const PropagatorTable& table, double omega, double t) {
    const std::size_t last = table.grid.index_of(t);
    const double h = table.grid.dt();
    const kernels::FilonWeights fw = kernels::hermite_filon(omega * h);
    cplx F{};
    for (std::size_t k = 0; k < last; ++k) {
        const cplx z = std::polar(1.0, omega * table.grid.time(k));
        F += z * h *
             (fw.a * table.u[k] + fw.b * table.u[k + 1] + h * (fw.c * table.u_dot[k] + fw.d * table.u_dot[k + 1]));
    }
    return F;
}

std::vector<FluctuationTable> build_fluctuation_tables(const SpectralDensity& sd, const std::vector<BathSpec>& baths,
                                                       const PropagatorTable& table, const FrequencyGrid& freq,
                                                       const std::vector<double>& anchor_times,
                                                       const FluctuationOptions& opts) {
    sd.validate();
    table.grid.validate();
    if (baths.empty()) throw std::invalid_argument("build_fluctuation_tables: no baths");
    for (const auto& b : baths) b.validate();
    if (table.u.size() != table.grid.size() || table.u_dot.size() != table.grid.size())
        throw std::invalid_argument("build_fluctuation_tables: propagator table is incomplete");

    std::vector<std::size_t> anchors;
    for (double t : anchor_times) anchors.push_back(table.grid.index_of(t));
    std::sort(anchors.begin(), anchors.end());
    anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());

    std::vector<std::vector<double>> weights(baths.size(), std::vector<double>(freq.size(), 0.0));
    for (std::size_t b = 0; b < baths.size(); ++b) {
        if (baths[b].theta == 0.0) continue;
        for (std::size_t j = 0; j < freq.size(); ++j) {
            const double w = freq.omega[j];
            weights[b][j] = freq.weight[j] * j_omega(sd, w) * bose_occupation(baths[b], w) / (2.0 * kPi);
        }
    }

    kernels::StreamInput in;
    in.omega = &freq.omega;
    in.weights = &weights;
    in.u = &table.u;
    in.u_dot = &table.u_dot;
    in.dt = table.grid.dt();
    in.anchors = anchors;
    kernels::StreamOutput out = opts.parallel ? kernels::fluctuation_stream(in) : kernels::fluctuation_stream_reference(in);

    std::vector<FluctuationTable> tables(baths.size());
    for (std::size_t b = 0; b < baths.size(); ++b) {
        FluctuationTable& ft = tables[b];
        ft.grid = table.grid;
        ft.bath = baths[b];
        ft.freq = freq;
        ft.v_diag = std::move(out.v_diag[b]);
        ft.v_dot = std::move(out.v_dot[b]);
        ft.anchors = anchors;
        ft.rows = std::move(out.rows[b]);
        ft.F = out.transform;
    }
    return tables;
}

FluctuationTable build_fluctuation_table(const SpectralDensity& sd, const BathSpec& bath, const PropagatorTable& table,
                                         const FrequencyGrid& freq, const std::vector<double>& anchor_times,
                                         const FluctuationOptions& opts) {
    return std::move(build_fluctuation_tables(sd, {bath}, table, freq, anchor_times, opts).front());
}

cplx v_two_time(const SpectralDensity& sd, const BathSpec& bath, const PropagatorTable& table, double t, double s) {
    const double lo = std::min(t, s);
    const auto ft = build_fluctuation_table(sd, bath, table, noise_grid(sd, table.grid.t_max), {lo});
    return ft.two_time(table.grid.index_of(t), table.grid.index_of(s));
}

double v_equal_time(const SpectralDensity& sd, const BathSpec& bath, const PropagatorTable& table, double t) {
    const auto ft = build_fluctuation_table(sd, bath, table, noise_grid(sd, table.grid.t_max), {t});
    const std::size_t k = table.grid.index_of(t);
    const cplx v = ft.two_time(k, k);
    if (std::abs(v.imag()) > 1e-9)
        throw ImaginaryLeak("v_equal_time: Im v(t,t) = " + std::to_string(v.imag()) + " at t = " + std::to_string(t));
    return v.real();
}

cplx thermal_kernel(const SpectralDensity& sd, const BathSpec& bath, double d) {
    sd.validate();
    bath.validate();
    if (sd.eta == 0.0 || bath.theta == 0.0) return {0.0, 0.0};
    const QuadSpec spec = default_quad(sd);
    const double upper = spec.truncation(0.0);
    auto f = [&](double w) {
        return j_omega(sd, w) * bose_occupation(bath, w) / (2.0 * kPi) * std::polar(1.0, -w * d);
    };
    const double period = d == 0.0 ? upper : std::min(upper, kPi / std::abs(d));
    cplx total = integrate_from_zero(f, period, sd.s, spec);
    if (period < upper) {
        std::vector<double> breaks;
        for (double x = period; x < upper; x += period) breaks.push_back(x);
        breaks.push_back(upper);
        if (breaks.size() >= 2) total += integrate_panels(f, breaks, spec);
    }
    return total;
}

namespace {

// Simpson weights over n steps; an odd count ends with a 3/8 panel.
std::vector<double> simpson_weights(std::size_t n) {
    std::vector<double> w(n + 1, 0.0);
    if (n == 0) return w;
    if (n == 1) {
        w[0] = w[1] = 0.5;
        return w;
    }
    const std::size_t even = (n % 2 == 0) ? n : n - 3;
    for (std::size_t i = 0; i + 2 <= even; i += 2) {
        w[i] += 1.0 / 3.0;
        w[i + 1] += 4.0 / 3.0;
        w[i + 2] += 1.0 / 3.0;
    }
    if (even != n) {
        w[even] += 3.0 / 8.0;
        w[even + 1] += 9.0 / 8.0;
        w[even + 2] += 9.0 / 8.0;
        w[even + 3] += 3.0 / 8.0;
    }
    return w;
}

}  // namespace

cplx v_two_time_direct(const SpectralDensity& sd, const BathSpec& bath, const PropagatorTable& table, double t,
                       double s) {
    const std::size_t it = table.grid.index_of(t);
    const std::size_t is = table.grid.index_of(s);
    const double h = table.grid.dt();
    // gt at every difference (a - b) h, a in [0, it], b in [0, is].
    std::vector<cplx> kern(it + is + 1);
    for (std::size_t m = 0; m < kern.size(); ++m)
        kern[m] = thermal_kernel(sd, bath, (static_cast<double>(m) - static_cast<double>(is)) * h);
    const auto wa = simpson_weights(it);
    const auto wb = simpson_weights(is);
    cplx acc{};
    for (std::size_t a = 0; a <= it; ++a) {
        cplx row{};
        for (std::size_t b = 0; b <= is; ++b) row += wb[b] * kern[a + is - b] * std::conj(table.u[is - b]);
        acc += wa[a] * table.u[it - a] * row;
    }
    return acc * h * h;
}

double v_steady(const FluctuationTable& fluct) {
    const auto& v = fluct.v_diag;
    if (v.empty()) throw std::invalid_argument("v_steady: empty table");
    const double end = v.back();
    if (end == 0.0) {
        const bool all_zero = std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
        if (all_zero) return 0.0;
    }
    const std::size_t from = v.size() - std::max<std::size_t>(2, v.size() / 10);
    const auto [lo, hi] = std::minmax_element(v.begin() + static_cast<std::ptrdiff_t>(from), v.end());
    const double drift = (*hi - *lo) / std::abs(end);
    if (!(drift < 0.01))
        throw NotConverged("v_steady: v(t,t) drifts by " + std::to_string(100.0 * drift) +
                           "% over the last 10% of the grid (t_max = " + std::to_string(fluct.grid.t_max) + ")");
    return end;
}

double v_steady(const SpectralDensity& sd, const BathSpec& bath, const TimeGrid& grid) {
    sd.validate();
    bath.validate();
    if (bath.theta == 0.0 || sd.eta == 0.0) return 0.0;
    const SpectralPropagator sp(sd, grid.t_max);
    if (preferred_route(sd) == PropagatorRoute::volterra) {
        const PropagatorTable table = build_propagator_table(sd, grid, &sp);
        return v_steady(build_fluctuation_table(sd, bath, table, sp.grid()));
    }
    // F(t, w) tends to i / (w - w0 - Delta(w) + i J(w)/2) plus, with a bound
    // state, Z e^{-i w_b t} / (w - w_b).  The cross term oscillates and dies
    // like t^-s, which is why the time-domain value settles so slowly.
    const auto& mode = sp.localized();
    const double z2 = mode ? mode->residue_z * mode->residue_z : 0.0;
    const double wb = mode ? mode->omega_b : 0.0;
    const FrequencyGrid& g = sp.grid();
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double w = g.omega[j];
        double a = sp.spectral_weight(w);
        if (mode) a += z2 * j_omega(sd, w) / (2.0 * kPi * (w - wb) * (w - wb));
        acc += g.weight[j] * bose_occupation(bath, w) * a;
    }
    return acc;
}

}  // namespace nmcorr
