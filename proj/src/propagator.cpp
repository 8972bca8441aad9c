// propagator.cpp - Volterra and spectral routes to u(t)

#include "nmcorr/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nmcorr/errors.hpp"
#include "nmcorr/kernels.hpp"

namespace nmcorr {

void TimeGrid::validate() const {
    if (t0 != 0.0) throw std::invalid_argument("TimeGrid: t0 is fixed to 0");
    if (!(t_max > 0.0)) throw std::invalid_argument("TimeGrid: t_max must be > 0");
    if (n_steps < 2) throw std::invalid_argument("TimeGrid: n_steps must be >= 2");
}

std::size_t TimeGrid::index_of(double t) const {
    const double x = (t - t0) / dt();
    const double k = std::round(x);
    if (!(k >= 0.0) || k > static_cast<double>(n_steps) || std::abs(x - k) > 1e-6)
        throw std::invalid_argument("TimeGrid: t = " + std::to_string(t) + " is not a grid point");
    return static_cast<std::size_t>(k);
}

std::string to_string(PropagatorRoute r) { return r == PropagatorRoute::volterra ? "volterra" : "spectral"; }

cplx PropagatorTable::kernel(std::ptrdiff_t offset) const {
    const std::size_t k = static_cast<std::size_t>(offset < 0 ? -offset : offset);
    if (k >= kernel_cache.size()) throw std::out_of_range("PropagatorTable::kernel: offset beyond grid");
    return offset < 0 ? std::conj(kernel_cache[k]) : kernel_cache[k];
}

cplx memory_kernel_closed_form(const SpectralDensity& sd, double d) {
    sd.validate();
    if (sd.eta == 0.0) return {0.0, 0.0};
    const double pre = sd.eta * sd.omega_c * sd.omega_c * std::tgamma(sd.s + 1.0);
    return pre * std::pow(cplx(1.0, sd.omega_c * d), -(sd.s + 1.0));
}

cplx memory_kernel(const SpectralDensity& sd, double d) {
    sd.validate();
    if (sd.eta == 0.0) return {0.0, 0.0};
    const QuadSpec spec = default_quad(sd);
    const double upper = spec.truncation(0.0);
    auto f = [&](double w) { return j_omega(sd, w) / (2.0 * kPi) * std::polar(1.0, -w * d); };
    // One panel per half period of the phase, at most; the first one also
    // carries the w^{s-1} substitution.
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

// ---------------------------------------------------------------------------

namespace {

struct VolterraSolution {
    std::vector<cplx> u;
    std::vector<cplx> u_dot;
};

// Product-trapezoid weights for I_n = int_0^{t_n} g(t_n - s) u(s) ds with u
// linear on each step and g integrated accurately on each step:
//   I_n = A_n u_0 + sum_{m=1}^{n-1} K_{n-m} u_m + B_1 u_n,  K_q = A_q + B_{q+1}.
struct ProductWeights {
    std::vector<cplx> A, B, K;  // index q, entry 0 unused
};

ProductWeights product_weights(const SpectralDensity& sd, double h, std::size_t steps) {
    static const GaussRule rule = gauss_legendre(10);
    ProductWeights pw;
    pw.A.assign(steps + 2, cplx{});
    pw.B.assign(steps + 2, cplx{});
    pw.K.assign(steps + 2, cplx{});
    for (std::size_t q = 1; q <= steps + 1; ++q) {
        const double lo = (static_cast<double>(q) - 1.0) * h;
        cplx a{}, b{};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double x = 0.5 * (rule.nodes[i] + 1.0);  // (d - lo) / h
            const cplx g = memory_kernel_closed_form(sd, lo + x * h) * (0.5 * rule.weights[i]);
            a += g * x;
            b += g * (1.0 - x);
        }
        pw.A[q] = a * h;
        pw.B[q] = b * h;
    }
    for (std::size_t q = 1; q <= steps; ++q) pw.K[q] = pw.A[q] + pw.B[q + 1];
    return pw;
}

// Interaction picture u = e^{-i w0 t} w keeps the free rotation exact:
//   w' = -e^{i w0 t} I(t),  I(t) = int_0^t g(t - s) u(s) ds,
// advanced with the linearly implicit trapezoid rule.
VolterraSolution volterra_once(const SpectralDensity& sd, double dt, std::size_t steps, bool parallel) {
    const std::size_t n = steps + 1;
    const ProductWeights pw = product_weights(sd, dt, steps);
    std::vector<cplx> u(n);
    std::vector<cplx> w(n);
    std::vector<cplx> wd(n);
    u[0] = w[0] = 1.0;
    wd[0] = 0.0;
    const cplx denom = 1.0 + 0.5 * dt * pw.B[1];
    for (std::size_t m = 0; m + 1 < n; ++m) {
        // history_sum(K, u, m) = sum_{k=1}^{m} K[m+1-k] u[k]
        const cplx hist = parallel ? kernels::history_sum(pw.K.data(), u.data(), m)
                                   : kernels::history_sum_reference(pw.K.data(), u.data(), m);
        const cplx S = pw.A[m + 1] * u[0] + hist;
        const double t1 = static_cast<double>(m + 1) * dt;
        const cplx rot = std::polar(1.0, sd.omega0 * t1);
        w[m + 1] = (w[m] + 0.5 * dt * wd[m] - 0.5 * dt * rot * S) / denom;
        wd[m + 1] = -rot * S - pw.B[1] * w[m + 1];
        u[m + 1] = std::conj(rot) * w[m + 1];
    }
    VolterraSolution out;
    out.u = std::move(u);
    out.u_dot.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
        const cplx rot = std::polar(1.0, -sd.omega0 * static_cast<double>(m) * dt);
        out.u_dot[m] = rot * (wd[m] - cplx(0.0, sd.omega0) * w[m]);
    }
    return out;
}

std::vector<cplx> closed_kernel_cache(const SpectralDensity& sd, const TimeGrid& grid) {
    std::vector<cplx> cache(grid.size());
    for (std::size_t m = 0; m < cache.size(); ++m)
        cache[m] = memory_kernel_closed_form(sd, static_cast<double>(m) * grid.dt());
    return cache;
}

}  // namespace

PropagatorTable solve_u_volterra(const SpectralDensity& sd, const TimeGrid& grid, const VolterraOptions& opts) {
    sd.validate();
    grid.validate();
    const double dt = grid.dt();
    const std::size_t steps = grid.n_steps;

    PropagatorTable table;
    table.grid = grid;
    table.route = PropagatorRoute::volterra;
    table.localized = localized_mode(sd);
    table.kernel_cache = closed_kernel_cache(sd, grid);

    VolterraSolution coarse = volterra_once(sd, dt, steps, opts.parallel);
    if (opts.richardson || opts.self_check) {
        const VolterraSolution fine = volterra_once(sd, 0.5 * dt, 2 * steps, opts.parallel);
        if (opts.self_check) {
            // Compare what is returned (plain or extrapolated) at dt and dt/2.
            const std::size_t head = std::max<std::size_t>(1, steps / 10);
            double worst = 0.0;
            if (opts.richardson) {
                const VolterraSolution quarter = volterra_once(sd, 0.25 * dt, 4 * head, opts.parallel);
                for (std::size_t m = 0; m <= head; ++m) {
                    const cplx r1 = (4.0 * fine.u[2 * m] - coarse.u[m]) / 3.0;
                    const cplx r2 = (4.0 * quarter.u[4 * m] - fine.u[2 * m]) / 3.0;
                    worst = std::max(worst, std::abs(r1 - r2));
                }
            } else {
                for (std::size_t m = 0; m <= head; ++m) worst = std::max(worst, std::abs(coarse.u[m] - fine.u[2 * m]));
            }
            if (worst > opts.self_check_tol)
                throw StepTooCoarse("solve_u_volterra: dt = " + std::to_string(dt) +
                                    " and dt/2 differ by " + std::to_string(worst) + " on the first 10% of the grid");
        }
        if (opts.richardson) {
            for (std::size_t m = 0; m <= steps; ++m) {
                coarse.u[m] = (4.0 * fine.u[2 * m] - coarse.u[m]) / 3.0;
                coarse.u_dot[m] = (4.0 * fine.u_dot[2 * m] - coarse.u_dot[m]) / 3.0;
            }
        }
    }
    coarse.u[0] = 1.0;
    table.u = std::move(coarse.u);
    table.u_dot = std::move(coarse.u_dot);
    return table;
}

// ---------------------------------------------------------------------------

SpectralPropagator::SpectralPropagator(const SpectralDensity& sd, double t_max, const GridOptions& opts)
    : sd_(sd), t_max_(t_max) {
    sd_.validate();
    if (!(t_max > 0.0)) throw std::invalid_argument("SpectralPropagator: t_max must be > 0");
    if (sd_.eta == 0.0) return;

    mode_ = localized_mode(sd_);
    const QuadSpec q = precise_quad(sd_);
    GridOptions o = opts;
    o.omega_max = std::min(o.omega_max, 0.995 * q.truncation(0.0));
    lamb_ = std::make_shared<const LambShiftTable>(sd_, o.omega_max, q);
    grid_ = refined_grid(sd_.s, t_max_, [this](double w) { return spectral_weight(w); }, o);
    coef_.resize(grid_.size());
    for (std::size_t j = 0; j < grid_.size(); ++j) coef_[j] = grid_.weight[j] * spectral_weight(grid_.omega[j]);
}

double SpectralPropagator::spectral_weight(double omega) const {
    if (!(omega > 0.0) || !lamb_) return 0.0;
    const double J = j_omega(sd_, omega);
    if (J == 0.0) return 0.0;
    const double detune = omega - sd_.omega0 - (*lamb_)(omega);
    return J / (2.0 * kPi * (detune * detune + 0.25 * J * J));
}

cplx SpectralPropagator::at(double t) const {
    if (sd_.eta == 0.0) return std::polar(1.0, -sd_.omega0 * t);
    cplx acc{};
    for (std::size_t j = 0; j < grid_.size(); ++j) acc += coef_[j] * std::polar(1.0, -grid_.omega[j] * t);
    if (mode_) acc += mode_->residue_z * std::polar(1.0, -mode_->omega_b * t);
    return acc;
}

cplx SpectralPropagator::derivative_at(double t) const {
    const cplx mi(0.0, -1.0);
    if (sd_.eta == 0.0) return mi * sd_.omega0 * std::polar(1.0, -sd_.omega0 * t);
    cplx acc{};
    for (std::size_t j = 0; j < grid_.size(); ++j)
        acc += mi * grid_.omega[j] * coef_[j] * std::polar(1.0, -grid_.omega[j] * t);
    if (mode_) acc += mi * mode_->omega_b * mode_->residue_z * std::polar(1.0, -mode_->omega_b * t);
    return acc;
}

double SpectralPropagator::sum_rule() const {
    if (sd_.eta == 0.0) return 1.0;
    double total = mode_ ? mode_->residue_z : 0.0;
    for (const cplx& c : coef_) total += c.real();
    return total;
}

PropagatorTable SpectralPropagator::tabulate(const TimeGrid& grid) const {
    grid.validate();
    PropagatorTable table;
    table.grid = grid;
    table.route = PropagatorRoute::spectral;
    table.localized = mode_;
    table.kernel_cache = closed_kernel_cache(sd_, grid);
    const std::size_t n = grid.size();
    const double dt = grid.dt();
    const cplx mi(0.0, -1.0);

    if (sd_.eta == 0.0) {
        table.u.resize(n);
        table.u_dot.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            table.u[k] = std::polar(1.0, -sd_.omega0 * grid.time(k));
            table.u_dot[k] = mi * sd_.omega0 * table.u[k];
        }
        return table;
    }

    std::vector<cplx> dcoef(coef_.size());
    for (std::size_t j = 0; j < coef_.size(); ++j) dcoef[j] = mi * grid_.omega[j] * coef_[j];
    table.u = kernels::spectral_sum(grid_.omega, coef_, dt, n);
    table.u_dot = kernels::spectral_sum(grid_.omega, dcoef, dt, n);
    if (mode_) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx z = mode_->residue_z * std::polar(1.0, -mode_->omega_b * grid.time(k));
            table.u[k] += z;
            table.u_dot[k] += mi * mode_->omega_b * z;
        }
    }
    // The initial values are known exactly; the node sums miss them by the
    // sum-rule error.
    table.u[0] = 1.0;
    table.u_dot[0] = mi * sd_.omega0;
    return table;
}

cplx eval_u_spectral(const SpectralDensity& sd, double t) {
    if (t < 0.0) throw std::invalid_argument("eval_u_spectral: t must be >= 0");
    sd.validate();
    if (sd.eta == 0.0) return std::polar(1.0, -sd.omega0 * t);
    return SpectralPropagator(sd, std::max(t, 1.0)).at(t);
}

PropagatorRoute preferred_route(const SpectralDensity& sd) {
    if (sd.eta == 0.0) return PropagatorRoute::spectral;
    const double rel = sd.eta / critical_coupling(sd);
    return std::abs(rel - 1.0) < kBandEdgeMargin ? PropagatorRoute::volterra : PropagatorRoute::spectral;
}

PropagatorTable build_propagator_table(const SpectralDensity& sd, const TimeGrid& grid,
                                       const SpectralPropagator* spectral) {
    if (preferred_route(sd) == PropagatorRoute::volterra) return solve_u_volterra(sd, grid);
    if (spectral) {
        if (spectral->t_max() < grid.t_max * (1.0 - 1e-12))
            throw std::invalid_argument("build_propagator_table: spectral propagator does not cover the grid");
        return spectral->tabulate(grid);
    }
    return SpectralPropagator(sd, grid.t_max).tabulate(grid);
}

}  // namespace nmcorr
