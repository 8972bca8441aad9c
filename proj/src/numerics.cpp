// numerics.cpp - adaptive Gauss-Kronrod quadrature, principal values, roots

#include "nmcorr/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

#include "nmcorr/errors.hpp"

namespace nmcorr {

namespace {

// 21-point Kronrod abscissae and weights with the embedded 10-point Gauss rule
// (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208814515584, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651146};

constexpr double kEps = std::numeric_limits<double>::epsilon();

template <class T>
struct Segment {
    double a;
    double b;
    T value;
    double err;
};

template <class T>
struct ByError {
    bool operator()(const Segment<T>& x, const Segment<T>& y) const { return x.err < y.err; }
};

template <class T, class F>
Segment<T> kronrod21(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<T, 10> f1{};
    std::array<T, 10> f2{};

    const T fc = f(center);
    T resk = kWgk[10] * fc;
    T resg{};
    double resabs = kWgk[10] * std::abs(fc);
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        const T sum = f1[j] + f2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const T mean = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 10; ++j)
        resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    const double ah = std::abs(half);
    const T value = resk * half;
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
    return {a, b, value, err};
}

template <class T, class F>
T adaptive(const F& f, const std::vector<double>& breaks, const QuadSpec& spec, const char* who) {
    std::priority_queue<Segment<T>, std::vector<Segment<T>>, ByError<T>> heap;
    T total{};
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        auto seg = kronrod21<T>(f, breaks[i], breaks[i + 1]);
        total += seg.value;
        total_err += seg.err;
        heap.push(seg);
    }
    std::vector<Segment<T>> frozen;
    std::size_t count = heap.size();

    auto finite = [](const T& v) {
        if constexpr (std::is_same_v<T, double>) return std::isfinite(v);
        else return std::isfinite(v.real()) && std::isfinite(v.imag());
    };

    while (!heap.empty() && total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (!finite(total))
            throw NonConvergence(std::string(who) + ": integrand is not finite on the interval");
        if (count >= spec.max_subdivisions)
            throw NonConvergence(std::string(who) + ": " + std::to_string(spec.max_subdivisions) +
                                 " subdivisions exhausted, error estimate " + std::to_string(total_err));
        Segment<T> worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            (worst.b - worst.a) < 1e3 * kEps * std::abs(mid)) {
            // Cannot split further at double precision; keep its contribution.
            frozen.push_back(worst);
            total_err -= worst.err;
            continue;
        }
        auto left = kronrod21<T>(f, worst.a, mid);
        auto right = kronrod21<T>(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        ++count;
    }

    // Resum to shed the drift of the incremental updates.
    T sum{};
    while (!heap.empty()) {
        sum += heap.top().value;
        heap.pop();
    }
    for (const auto& s : frozen) sum += s.value;
    if (!finite(sum)) throw NonConvergence(std::string(who) + ": integrand is not finite on the interval");
    return sum;
}

std::vector<double> range_breaks(double a, double b, const QuadSpec& spec, const char* who) {
    spec.validate();
    if (std::isinf(b) && b > 0) b = spec.truncation(a);
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument(std::string(who) + ": requires finite a < b");
    return {a, b};
}

}  // namespace

void QuadSpec::validate() const {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadSpec: rel_tol must be > 0");
    if (!(abs_tol >= 0.0)) throw std::invalid_argument("QuadSpec: abs_tol must be >= 0");
    if (max_subdivisions < 1) throw std::invalid_argument("QuadSpec: max_subdivisions must be >= 1");
    if (!(tail_cutoff_multiplier >= 10.0))
        throw std::invalid_argument("QuadSpec: tail_cutoff_multiplier must be >= 10");
    if (!(tail_scale > 0.0)) throw std::invalid_argument("QuadSpec: tail_scale must be > 0");
}

cplx integrate(const ComplexFn& f, double a, double b, const QuadSpec& spec) {
    return adaptive<cplx>(f, range_breaks(a, b, spec, "integrate"), spec, "integrate");
}

cplx integrate_panels(const ComplexFn& f, const std::vector<double>& breakpoints, const QuadSpec& spec) {
    spec.validate();
    if (breakpoints.size() < 2 || !std::is_sorted(breakpoints.begin(), breakpoints.end()))
        throw std::invalid_argument("integrate_panels: need at least two ordered breakpoints");
    return adaptive<cplx>(f, breakpoints, spec, "integrate");
}

double integrate_real(const RealFn& f, double a, double b, const QuadSpec& spec) {
    return adaptive<double>(f, range_breaks(a, b, spec, "integrate"), spec, "integrate");
}

cplx integrate_from_zero(const ComplexFn& f, double b, double s, const QuadSpec& spec) {
    if (!(s > 0.0)) throw std::invalid_argument("integrate_from_zero: exponent must be > 0");
    if (std::isinf(b) && b > 0) b = spec.truncation(0.0);
    if (s >= 1.0) return integrate(f, 0.0, b, spec);
    const double p = 1.0 / s;
    auto g = [&](double x) -> cplx {
        if (x <= 0.0) return {0.0, 0.0};
        return f(std::pow(x, p)) * (p * std::pow(x, p - 1.0));
    };
    return integrate(g, 0.0, std::pow(b, s), spec);
}

double integrate_from_zero_real(const RealFn& f, double b, double s, const QuadSpec& spec) {
    if (!(s > 0.0)) throw std::invalid_argument("integrate_from_zero: exponent must be > 0");
    if (std::isinf(b) && b > 0) b = spec.truncation(0.0);
    if (s >= 1.0) return integrate_real(f, 0.0, b, spec);
    const double p = 1.0 / s;
    auto g = [&](double x) -> double {
        if (x <= 0.0) return 0.0;
        return f(std::pow(x, p)) * (p * std::pow(x, p - 1.0));
    };
    return integrate_real(g, 0.0, std::pow(b, s), spec);
}

double principal_value(const RealFn& f, double a, double b, double pole, const QuadSpec& spec,
                       double s_lower) {
    spec.validate();
    if (std::isinf(b) && b > 0) b = spec.truncation(a);
    if (!(a < pole && pole < b))
        throw PoleOutOfRange("principal_value: pole " + std::to_string(pole) + " outside (" +
                             std::to_string(a) + ", " + std::to_string(b) + ")");
    const double eps = 0.5 * std::min(pole - a, b - pole);

    auto folded = [&](double h) { return (f(pole - h) - f(pole + h)) / h; };
    auto outer = [&](double w) { return f(w) / (pole - w); };

    const double window = integrate_real(folded, 0.0, eps, spec);
    double left = 0.0;
    if (a == 0.0 && s_lower < 1.0)
        left = integrate_from_zero_real(outer, pole - eps, s_lower, spec);
    else
        left = integrate_real(outer, a, pole - eps, spec);
    const double right = integrate_real(outer, pole + eps, b, spec);
    return window + left + right;
}

double find_root(const RealFn& g, double lo, double hi, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("find_root: tol must be > 0");
    if (lo > hi) std::swap(lo, hi);
    double a = lo;
    double b = hi;
    double fa = g(a);
    double fb = g(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (!(std::isfinite(fa) && std::isfinite(fb)) || std::signbit(fa) == std::signbit(fb))
        throw NoBracket("find_root: g(lo) = " + std::to_string(fa) + " and g(hi) = " +
                        std::to_string(fb) + " do not bracket a root");

    auto shrink = [&](double x, double fx) {
        if (std::signbit(fx) == std::signbit(fa)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    };

    bool force_bisect = false;
    for (int iter = 0; iter < 400 && (b - a) >= tol; ++iter) {
        const double width = b - a;
        double x = 0.5 * (a + b);
        if (!force_bisect) {
            const double secant = b - fb * (b - a) / (fb - fa);
            if (secant > a && secant < b) x = secant;
        }
        const double fx = g(x);
        if (fx == 0.0) return x;
        shrink(x, fx);

        // Probe just past the secant point to collapse the far side of the bracket.
        if (!force_bisect && (b - a) >= tol) {
            const double probe = (x - a > b - x) ? x - 0.49 * tol : x + 0.49 * tol;
            if (probe > a && probe < b) {
                const double fp = g(probe);
                if (fp == 0.0) return probe;
                shrink(probe, fp);
            }
        }
        force_bisect = (b - a) > 0.5 * width;
    }
    return 0.5 * (a + b);
}

GaussRule gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) p0 = 1.0, p1 = x;
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
            p0 = p1;
            p1 = pk;
        }
        dp = (n == 1) ? 1.0 : static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
    }
    return rule;
}

}  // namespace nmcorr
