// oracles.cpp - independent reference computations used only by the tests

#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

// Golub-Welsch would be overkill; plain Newton on P_n, kept separate from the library version.
Rule legendre(int n) {
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 60; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * x * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (x * p1 - p2) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = x;
        r.w[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

}  // namespace

double composite_gl(const std::function<double(double)>& f, double a, double b, int panels, int order) {
    const Rule r = legendre(order);
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        for (int i = 0; i < order; ++i) sum += r.w[i] * f(c + 0.5 * h * r.x[i]);
    }
    return 0.5 * h * sum;
}

cplx composite_gl_c(const std::function<cplx(double)>& f, double a, double b, int panels, int order) {
    const Rule r = legendre(order);
    const double h = (b - a) / panels;
    cplx sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        for (int i = 0; i < order; ++i) sum += r.w[i] * f(c + 0.5 * h * r.x[i]);
    }
    return 0.5 * h * sum;
}

double pv_excision(const std::function<double(double)>& f, double a, double b, double pole) {
    auto g = [&](double w) { return f(w) / (pole - w); };
    auto excised = [&](double eps) {
        // Geometric panels towards the excision edges keep the 1/(pole-w) growth resolved.
        double left = 0.0;
        double right = 0.0;
        double lo = pole - eps;
        double hi = pole + eps;
        double d = eps;
        double x = lo;
        while (x - a > 1e-15) {
            const double step = std::min(d, x - a);
            left += composite_gl(g, x - step, x, 1, 24);
            x -= step;
            d *= 2.0;
        }
        d = eps;
        x = hi;
        while (b - x > 1e-15) {
            const double step = std::min(d, b - x);
            right += composite_gl(g, x, x + step, 1, 24);
            x += step;
            d *= 2.0;
        }
        return left + right;
    };
    // The excised window contributes 2 f'(pole) eps + O(eps^3), so the sweep
    // is extrapolated in odd powers of eps.
    const double e = 1e-2;
    const double i1 = excised(e);
    const double i2 = excised(e / 2);
    const double i3 = excised(e / 4);
    const double r1 = 2.0 * i2 - i1;
    const double r2 = 2.0 * i3 - i2;
    return (4.0 * r2 - r1) / 3.0;
}

double lamb_shift_integer_s(const nmcorr::SpectralDensity& sd, double omega) {
    const int n = static_cast<int>(std::lround(sd.s));
    if (std::abs(sd.s - n) > 1e-12 || n < 1) throw std::invalid_argument("integer s only");
    const double c = sd.omega_c;
    double poly = 0.0;
    double fact = 1.0;  // (n-1-k)!
    for (int m = 1; m <= n - 1; ++m) fact *= m;
    for (int k = 0; k <= n - 1; ++k) {
        poly += std::pow(omega, k) * fact * std::pow(c, n - k);
        if (n - 1 - k > 0) fact /= (n - 1 - k);
    }
    double tail = 0.0;
    if (omega != 0.0) tail = std::pow(omega, n) * std::exp(-omega / c) * std::expint(omega / c);
    return -sd.eta * std::pow(c, 1 - n) * (poly - tail);
}

double pole_grid_scan(const nmcorr::SpectralDensity& sd, double lo, int points) {
    auto h = [&](double w) { return w - sd.omega0 - lamb_shift_integer_s(sd, w); };
    double prev_w = lo;
    double prev_h = h(lo);
    for (int i = 1; i < points; ++i) {
        const double w = lo * (1.0 - static_cast<double>(i) / points);
        const double hw = h(w);
        if ((hw > 0) != (prev_h > 0)) {
            // Linear interpolation inside the grid cell where the sign flips.
            return prev_w - prev_h * (w - prev_w) / (hw - prev_h);
        }
        prev_w = w;
        prev_h = hw;
    }
    throw std::runtime_error("pole_grid_scan: no sign change");
}

cplx memory_kernel_closed(const nmcorr::SpectralDensity& sd, double dt) {
    const cplx denom(1.0, sd.omega_c * dt);
    return sd.eta * sd.omega_c * sd.omega_c * std::tgamma(sd.s + 1.0) * std::pow(denom, -(sd.s + 1.0));
}

cplx thermal_kernel_series(const nmcorr::SpectralDensity& sd, double theta, double d) {
    // int dw/2pi J e^{-k w/theta} e^{-i w d} = eta w_c^{1-s} Gamma(s+1) (1/w_c + k/theta + i d)^{-(s+1)}
    const double p = sd.s + 1.0;
    const double pre = sd.eta * std::pow(sd.omega_c, 1.0 - sd.s) * std::tgamma(p);
    const cplx a(1.0 / sd.omega_c, d);
    const double b = 1.0 / theta;
    auto term = [&](double k) { return std::pow(a + k * b, -p); };
    const int kmax = 400;
    cplx sum = 0.0;
    for (int k = 1; k < kmax; ++k) sum += term(k);
    // Euler-Maclaurin for sum_{k >= kmax} f(k).
    const cplx z = a + static_cast<double>(kmax) * b;
    const cplx integral = std::pow(z, 1.0 - p) / (b * (p - 1.0));
    const cplx f0 = std::pow(z, -p);
    const cplx f1 = -p * b * std::pow(z, -p - 1.0);
    const cplx f3 = -p * (p + 1.0) * (p + 2.0) * b * b * b * std::pow(z, -p - 3.0);
    sum += integral + 0.5 * f0 - f1 / 12.0 + f3 / 720.0;
    return pre * sum;
}

cplx free_u(double omega0, double t) { return std::exp(cplx(0.0, -omega0 * t)); }

namespace {

std::vector<double> simpson(std::size_t n) {
    std::vector<double> w(n + 1, 0.0);
    if (n == 0) return w;
    if (n == 1) return {0.5, 0.5};
    const std::size_t m = n % 2 ? n - 3 : n;
    for (std::size_t j = 0; j < m; j += 2) {
        w[j] += 1.0 / 3;
        w[j + 1] += 4.0 / 3;
        w[j + 2] += 1.0 / 3;
    }
    if (m != n) {
        const double c[] = {3.0 / 8, 9.0 / 8, 9.0 / 8, 3.0 / 8};
        for (int j = 0; j < 4; ++j) w[m + j] += c[j];
    }
    return w;
}

}  // namespace

cplx v_double_integral(const nmcorr::SpectralDensity& sd, double theta, const std::vector<cplx>& u, double h,
                       std::size_t i, std::size_t k) {
    std::vector<cplx> gt(i + k + 1);
    for (std::size_t m = 0; m < gt.size(); ++m)
        gt[m] = thermal_kernel_series(sd, theta, (static_cast<double>(m) - static_cast<double>(k)) * h);
    const auto wx = simpson(i), wy = simpson(k);
    cplx acc = 0.0;
    for (std::size_t a = 0; a <= i; ++a)
        for (std::size_t b = 0; b <= k; ++b) acc += wx[a] * wy[b] * u[i - a] * gt[a + k - b] * std::conj(u[k - b]);
    return acc * h * h;
}

}  // namespace oracle
