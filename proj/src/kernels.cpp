// kernels.cpp - spectral sums, Volterra history sums and the noise-function stream

#include "nmcorr/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef NMCORR_HAVE_OPENMP
#include <omp.h>
#endif

namespace nmcorr::kernels {

namespace {

constexpr std::size_t kTimeBlock = 256;   // phasor resync interval
constexpr std::size_t kStreamBlocks = 16;  // fixed reduction blocks for the stream
constexpr std::size_t kHistoryBlocks = 8;
constexpr std::size_t kHistoryParallelMin = 4096;

void check_stream(const StreamInput& in) {
    if (!in.omega || !in.weights || !in.u || !in.u_dot)
        throw std::invalid_argument("fluctuation_stream: missing input");
    if (in.u->size() != in.u_dot->size() || in.u->size() < 2)
        throw std::invalid_argument("fluctuation_stream: u and u_dot must have equal length >= 2");
    for (const auto& w : *in.weights)
        if (w.size() != in.omega->size()) throw std::invalid_argument("fluctuation_stream: weight size mismatch");
    if (!std::is_sorted(in.anchors.begin(), in.anchors.end()) ||
        (!in.anchors.empty() && in.anchors.back() >= in.u->size()))
        throw std::invalid_argument("fluctuation_stream: anchors must be ascending grid indices");
    if (!(in.dt > 0.0)) throw std::invalid_argument("fluctuation_stream: dt must be > 0");
}

StreamOutput make_output(std::size_t baths, std::size_t n, const std::vector<std::size_t>& anchors,
                         std::size_t nodes, bool with_transform) {
    StreamOutput out;
    out.v_diag.assign(baths, std::vector<double>(n, 0.0));
    out.v_dot.assign(baths, std::vector<double>(n, 0.0));
    out.rows.resize(baths);
    for (auto& r : out.rows) {
        r.resize(anchors.size());
        for (std::size_t a = 0; a < anchors.size(); ++a) r[a].assign(n - anchors[a], cplx{});
    }
    if (with_transform) out.transform.assign(anchors.size(), std::vector<cplx>(nodes, cplx{}));
    return out;
}

}  // namespace

int max_threads() {
#ifdef NMCORR_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

FilonWeights hermite_filon(double theta) {
    cplx m[4];
    if (std::abs(theta) < 1.0) {
        // Taylor series of int_0^1 x^k e^{i theta x} dx.
        for (int k = 0; k < 4; ++k) {
            cplx term(1.0, 0.0);
            cplx sum = term / static_cast<double>(k + 1);
            for (int n = 1; n < 30; ++n) {
                term *= cplx(0.0, theta) / static_cast<double>(n);
                sum += term / static_cast<double>(n + k + 1);
            }
            m[k] = sum;
        }
    } else {
        const cplx e = std::polar(1.0, theta);
        const cplx it(0.0, theta);
        m[0] = (e - 1.0) / it;
        for (int k = 1; k < 4; ++k) m[k] = (e - static_cast<double>(k) * m[k - 1]) / it;
    }
    return {2.0 * m[3] - 3.0 * m[2] + m[0], -2.0 * m[3] + 3.0 * m[2], m[3] - 2.0 * m[2] + m[1], m[3] - m[2]};
}

// ---------------------------------------------------------------------------

std::vector<cplx> spectral_sum_reference(const std::vector<double>& omega, const std::vector<cplx>& coef,
                                         double dt, std::size_t n) {
    if (omega.size() != coef.size()) throw std::invalid_argument("spectral_sum: size mismatch");
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{};
        for (std::size_t j = 0; j < omega.size(); ++j)
            acc += coef[j] * std::polar(1.0, -omega[j] * static_cast<double>(k) * dt);
        out[k] = acc;
    }
    return out;
}

std::vector<cplx> spectral_sum(const std::vector<double>& omega, const std::vector<cplx>& coef, double dt,
                               std::size_t n) {
    if (omega.size() != coef.size()) throw std::invalid_argument("spectral_sum: size mismatch");
    std::vector<cplx> out(n);
    const std::size_t blocks = (n + kTimeBlock - 1) / kTimeBlock;
    const std::size_t nodes = omega.size();

#pragma omp parallel for schedule(dynamic)
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        const std::size_t k0 = blk * kTimeBlock;
        const std::size_t k1 = std::min(n, k0 + kTimeBlock);
        std::vector<cplx> acc(k1 - k0);
        for (std::size_t j = 0; j < nodes; ++j) {
            cplx z = coef[j] * std::polar(1.0, -omega[j] * static_cast<double>(k0) * dt);
            const cplx step = std::polar(1.0, -omega[j] * dt);
            for (std::size_t k = 0; k < acc.size(); ++k) {
                acc[k] += z;
                z *= step;
            }
        }
        std::copy(acc.begin(), acc.end(), out.begin() + static_cast<std::ptrdiff_t>(k0));
    }
    return out;
}

// ---------------------------------------------------------------------------

cplx history_sum_reference(const cplx* g, const cplx* u, std::size_t n) {
    cplx acc{};
    for (std::size_t k = 1; k <= n; ++k) acc += g[n + 1 - k] * u[k];
    return acc;
}

cplx history_sum(const cplx* g, const cplx* u, std::size_t n) {
    if (n < kHistoryParallelMin) {
        double re = 0.0, im = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            const cplx p = g[n + 1 - k] * u[k];
            re += p.real();
            im += p.imag();
        }
        return {re, im};
    }
    double part_re[kHistoryBlocks] = {};
    double part_im[kHistoryBlocks] = {};
    const std::size_t chunk = (n + kHistoryBlocks - 1) / kHistoryBlocks;
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < kHistoryBlocks; ++b) {
        const std::size_t lo = 1 + b * chunk;
        const std::size_t hi = std::min(n, (b + 1) * chunk);
        double re = 0.0, im = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) {
            const cplx p = g[n + 1 - k] * u[k];
            re += p.real();
            im += p.imag();
        }
        part_re[b] = re;
        part_im[b] = im;
    }
    double re = 0.0, im = 0.0;
    for (std::size_t b = 0; b < kHistoryBlocks; ++b) {
        re += part_re[b];
        im += part_im[b];
    }
    return {re, im};
}

// ---------------------------------------------------------------------------

StreamOutput fluctuation_stream_reference(const StreamInput& in) {
    check_stream(in);
    const auto& omega = *in.omega;
    const auto& W = *in.weights;
    const auto& u = *in.u;
    const auto& ud = *in.u_dot;
    const std::size_t n = u.size();
    const std::size_t nodes = omega.size();
    const std::size_t baths = W.size();
    const double h = in.dt;

    StreamOutput out = make_output(baths, n, in.anchors, nodes, true);
    std::vector<cplx> F(nodes, cplx{});
    std::vector<FilonWeights> fw(nodes);
    for (std::size_t j = 0; j < nodes; ++j) fw[j] = hermite_filon(omega[j] * h);
    // held[b][a][j] = W e^{-i w t_a} F(t_a)
    std::vector<std::vector<std::vector<cplx>>> held(baths, std::vector<std::vector<cplx>>(in.anchors.size()));

    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * h;
        for (std::size_t a = 0; a < in.anchors.size(); ++a) {
            if (in.anchors[a] != k) continue;
            out.transform[a] = F;
            for (std::size_t b = 0; b < baths; ++b) {
                held[b][a].resize(nodes);
                for (std::size_t j = 0; j < nodes; ++j)
                    held[b][a][j] = W[b][j] * std::polar(1.0, -omega[j] * t) * F[j];
            }
        }
        for (std::size_t j = 0; j < nodes; ++j) {
            const cplx z = std::polar(1.0, omega[j] * t);
            const double f2 = std::norm(F[j]);
            const double slope = 2.0 * std::real(std::conj(F[j]) * u[k] * z);
            for (std::size_t b = 0; b < baths; ++b) {
                out.v_diag[b][k] += W[b][j] * f2;
                out.v_dot[b][k] += W[b][j] * slope;
                for (std::size_t a = 0; a < in.anchors.size(); ++a)
                    if (k >= in.anchors[a]) out.rows[b][a][k - in.anchors[a]] += held[b][a][j] * z * std::conj(F[j]);
            }
        }
        if (k + 1 == n) break;
        for (std::size_t j = 0; j < nodes; ++j) {
            const cplx z = std::polar(1.0, omega[j] * t);
            const FilonWeights& w = fw[j];
            F[j] += z * h * (w.a * u[k] + w.b * u[k + 1] + h * (w.c * ud[k] + w.d * ud[k + 1]));
        }
    }
    return out;
}

StreamOutput fluctuation_stream(const StreamInput& in) {
    check_stream(in);
    const auto& omega = *in.omega;
    const auto& W = *in.weights;
    const auto& u = *in.u;
    const auto& ud = *in.u_dot;
    const std::size_t n = u.size();
    const std::size_t nodes = omega.size();
    const std::size_t baths = W.size();
    const std::size_t anchors = in.anchors.size();
    const double h = in.dt;

    StreamOutput total = make_output(baths, n, in.anchors, nodes, true);
    std::vector<StreamOutput> parts(kStreamBlocks);
    const std::size_t chunk = (nodes + kStreamBlocks - 1) / kStreamBlocks;

#pragma omp parallel for schedule(dynamic)
    for (std::size_t blk = 0; blk < kStreamBlocks; ++blk) {
        const std::size_t j0 = blk * chunk;
        const std::size_t j1 = std::min(nodes, j0 + chunk);
        if (j0 >= j1) continue;
        StreamOutput acc = make_output(baths, n, in.anchors, 0, false);
        std::vector<double> wj(baths);
        std::vector<cplx> held(baths * anchors);

        for (std::size_t j = j0; j < j1; ++j) {
            for (std::size_t b = 0; b < baths; ++b) wj[b] = W[b][j];
            const FilonWeights fw = hermite_filon(omega[j] * h);
            const cplx step = std::polar(1.0, omega[j] * h);
            cplx F{};
            cplx z(1.0, 0.0);
            std::size_t next_anchor = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k % kTimeBlock == 0) z = std::polar(1.0, omega[j] * static_cast<double>(k) * h);
                while (next_anchor < anchors && in.anchors[next_anchor] == k) {
                    total.transform[next_anchor][j] = F;  // each j is owned by one block
                    for (std::size_t b = 0; b < baths; ++b) held[b * anchors + next_anchor] = wj[b] * std::conj(z) * F;
                    ++next_anchor;
                }
                const double f2 = std::norm(F);
                const cplx zu = z * u[k];
                const double slope = 2.0 * (F.real() * zu.real() + F.imag() * zu.imag());
                const cplx zf = z * std::conj(F);
                for (std::size_t b = 0; b < baths; ++b) {
                    acc.v_diag[b][k] += wj[b] * f2;
                    acc.v_dot[b][k] += wj[b] * slope;
                    for (std::size_t a = 0; a < next_anchor; ++a)
                        acc.rows[b][a][k - in.anchors[a]] += held[b * anchors + a] * zf;
                }
                if (k + 1 == n) break;
                F += z * h * (fw.a * u[k] + fw.b * u[k + 1] + h * (fw.c * ud[k] + fw.d * ud[k + 1]));
                z *= step;
            }
        }
        parts[blk] = std::move(acc);
    }

    for (std::size_t blk = 0; blk < kStreamBlocks; ++blk) {
        const StreamOutput& p = parts[blk];
        if (p.v_diag.empty()) continue;
        for (std::size_t b = 0; b < baths; ++b) {
            for (std::size_t k = 0; k < n; ++k) {
                total.v_diag[b][k] += p.v_diag[b][k];
                total.v_dot[b][k] += p.v_dot[b][k];
            }
            for (std::size_t a = 0; a < anchors; ++a)
                for (std::size_t m = 0; m < total.rows[b][a].size(); ++m) total.rows[b][a][m] += p.rows[b][a][m];
        }
    }
    return total;
}

}  // namespace nmcorr::kernels
