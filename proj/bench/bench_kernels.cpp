// bench_kernels.cpp - serial reference vs parallel form of each hot loop

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "nmcorr/kernels.hpp"

namespace k = nmcorr::kernels;
using nmcorr::cplx;

namespace {

struct Nodes {
    std::vector<double> omega;
    std::vector<cplx> coef;
};

Nodes make_nodes(std::size_t n) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> w(0.0, 50.0), c(-1.0, 1.0);
    Nodes out;
    for (std::size_t j = 0; j < n; ++j) {
        out.omega.push_back(w(rng));
        out.coef.emplace_back(c(rng), c(rng));
    }
    return out;
}

std::vector<cplx> decaying_u(std::size_t n, double dt) {
    std::vector<cplx> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = std::exp(cplx(-0.05, -1.0) * (dt * static_cast<double>(i)));
    return u;
}

template <bool Parallel>
void BM_SpectralSum(benchmark::State& st) {
    const auto nodes = make_nodes(static_cast<std::size_t>(st.range(0)));
    const std::size_t steps = 4000;
    for (auto _ : st) {
        auto out = Parallel ? k::spectral_sum(nodes.omega, nodes.coef, 0.05, steps)
                            : k::spectral_sum_reference(nodes.omega, nodes.coef, 0.05, steps);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0) * static_cast<long>(steps));
}

template <bool Parallel>
void BM_HistorySum(benchmark::State& st) {
    const std::size_t n = static_cast<std::size_t>(st.range(0));
    const auto g = decaying_u(n + 2, 0.01);
    const auto u = decaying_u(n + 2, 0.05);
    for (auto _ : st) {
        cplx s = Parallel ? k::history_sum(g.data(), u.data(), n) : k::history_sum_reference(g.data(), u.data(), n);
        benchmark::DoNotOptimize(s);
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void BM_FluctuationStream(benchmark::State& st) {
    const auto nodes = make_nodes(static_cast<std::size_t>(st.range(0)));
    const std::size_t steps = 2000;
    const double dt = 0.05;
    const auto u = decaying_u(steps + 1, dt);
    std::vector<cplx> ud(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) ud[i] = cplx(-0.05, -1.0) * u[i];
    std::vector<std::vector<double>> weights(1, std::vector<double>(nodes.omega.size(), 1e-3));
    k::StreamInput in;
    in.omega = &nodes.omega;
    in.weights = &weights;
    in.u = &u;
    in.u_dot = &ud;
    in.dt = dt;
    in.anchors = {0, 100};
    for (auto _ : st) {
        auto out = Parallel ? k::fluctuation_stream(in) : k::fluctuation_stream_reference(in);
        benchmark::DoNotOptimize(out.v_diag.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0) * static_cast<long>(steps));
}

}  // namespace

BENCHMARK(BM_SpectralSum<false>)->Name("spectral_sum/reference")->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpectralSum<true>)->Name("spectral_sum/parallel")->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HistorySum<false>)->Name("history_sum/reference")->Arg(4000)->Arg(40000);
BENCHMARK(BM_HistorySum<true>)->Name("history_sum/parallel")->Arg(4000)->Arg(40000);
BENCHMARK(BM_FluctuationStream<false>)->Name("fluctuation_stream/reference")->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FluctuationStream<true>)->Name("fluctuation_stream/parallel")->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
