#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nmcorr/kernels.hpp"
#include "oracles.hpp"

using namespace nmcorr;
namespace k = nmcorr::kernels;

namespace {

std::vector<cplx> random_c(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& x : v) x = {d(rng), d(rng)};
    return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("spectral_sum: parallel form equals the direct sum") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> w(0.0, 60.0);
    std::vector<double> omega(700);
    for (auto& x : omega) x = w(rng);
    const auto coef = random_c(omega.size(), rng);
    for (std::size_t n : {1u, 255u, 256u, 257u, 1500u}) {
        const auto ref = k::spectral_sum_reference(omega, coef, 0.05, n);
        const auto par = k::spectral_sum(omega, coef, 0.05, n);
        REQUIRE(ref.size() == n);
        CHECK(max_diff(ref, par) < 1e-10);
    }
}

TEST_CASE("spectral_sum: single node is a pure phasor") {
    const auto out = k::spectral_sum({2.5}, {cplx(1.0, 0.0)}, 0.1, 1000);
    for (std::size_t i = 0; i < out.size(); i += 97)
        CHECK(std::abs(out[i] - std::polar(1.0, -2.5 * 0.1 * static_cast<double>(i))) < 1e-12);
}

TEST_CASE("history_sum: parallel form equals the serial loop") {
    std::mt19937_64 rng(5);
    const auto g = random_c(20002, rng);
    const auto u = random_c(20002, rng);
    for (std::size_t n : {0u, 1u, 17u, 4095u, 4096u, 10001u, 20000u}) {
        const cplx a = k::history_sum_reference(g.data(), u.data(), n);
        const cplx b = k::history_sum(g.data(), u.data(), n);
        CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)));
    }
    // Brute force on a short case.
    cplx brute{};
    for (std::size_t j = 1; j <= 5; ++j) brute += g[6 - j] * u[j];
    CHECK(std::abs(k::history_sum_reference(g.data(), u.data(), 5) - brute) < 1e-14);
}

TEST_CASE("hermite_filon: exact for cubics, continuous across the series switch") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (double theta : {0.0, 1e-6, 0.3, 0.999999, 1.000001, 2.0, 17.0, -4.0}) {
        const double c0 = d(rng), c1 = d(rng), c2 = d(rng), c3 = d(rng);
        auto p = [&](double x) { return c0 + x * (c1 + x * (c2 + x * c3)); };
        auto dp = [&](double x) { return c1 + x * (2.0 * c2 + 3.0 * x * c3); };
        const auto w = k::hermite_filon(theta);
        const cplx approx = w.a * p(0.0) + w.b * p(1.0) + w.c * dp(0.0) + w.d * dp(1.0);
        const cplx exact =
            oracle::composite_gl_c([&](double x) { return p(x) * std::polar(1.0, theta * x); }, 0.0, 1.0, 8, 20);
        CHECK(std::abs(approx - exact) < 1e-13);
    }
    const auto lo = k::hermite_filon(1.0 - 1e-12), hi = k::hermite_filon(1.0 + 1e-12);
    CHECK(std::abs(lo.a - hi.a) < 1e-11);
    CHECK(std::abs(lo.d - hi.d) < 1e-11);
}

TEST_CASE("fluctuation_stream: parallel form equals the reference pass") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> w(0.0, 40.0), p(0.0, 1e-3);
    std::vector<double> omega(300);
    for (auto& x : omega) x = w(rng);
    std::vector<std::vector<double>> weights(2, std::vector<double>(omega.size()));
    for (auto& row : weights)
        for (auto& x : row) x = p(rng);
    const std::size_t n = 700;
    const double dt = 0.05;
    std::vector<cplx> u(n + 1), ud(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = dt * static_cast<double>(i);
        u[i] = std::exp(cplx(-0.03, -1.0) * t) + 0.1 * std::exp(cplx(0.0, 0.3) * t);
        ud[i] = cplx(-0.03, -1.0) * std::exp(cplx(-0.03, -1.0) * t) + cplx(0.0, 0.03) * std::exp(cplx(0.0, 0.3) * t);
    }
    k::StreamInput in;
    in.omega = &omega;
    in.weights = &weights;
    in.u = &u;
    in.u_dot = &ud;
    in.dt = dt;
    in.anchors = {0, 260, 512};
    const auto a = k::fluctuation_stream_reference(in);
    const auto b = k::fluctuation_stream(in);
    for (std::size_t bb = 0; bb < 2; ++bb) {
        for (std::size_t i = 0; i <= n; ++i) {
            CHECK(std::abs(a.v_diag[bb][i] - b.v_diag[bb][i]) < 1e-10);
            CHECK(std::abs(a.v_dot[bb][i] - b.v_dot[bb][i]) < 1e-10);
        }
        for (std::size_t r = 0; r < 3; ++r) CHECK(max_diff(a.rows[bb][r], b.rows[bb][r]) < 1e-10);
    }
    for (std::size_t r = 0; r < 3; ++r) CHECK(max_diff(a.transform[r], b.transform[r]) < 1e-10);
    // Anchor at 0: all transforms vanish, so the row is identically zero.
    for (const auto& x : a.rows[0][0]) CHECK(std::abs(x) == 0.0);
}

TEST_CASE("max_threads is positive") { CHECK(k::max_threads() >= 1); }
