// frequency_grid.cpp - panel layout and Gauss-Legendre nodes

#include "nmcorr/frequency_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nmcorr/numerics.hpp"

namespace nmcorr {

namespace {

void check(double s, double t_max, const GridOptions& o) {
    if (!(s > 0.0)) throw std::invalid_argument("frequency grid: s must be > 0");
    if (!(t_max > 0.0)) throw std::invalid_argument("frequency grid: t_max must be > 0");
    if (!(o.head > 0.0) || !(o.omega_max > o.head))
        throw std::invalid_argument("frequency grid: need 0 < head < omega_max");
    if (!(o.max_width > 0.0) || !(o.phase_span > 0.0) || o.order < 2)
        throw std::invalid_argument("frequency grid: invalid panel options");
}

std::vector<double> panel_edges(double t_max, const GridOptions& o) {
    const double cap = std::min(o.max_width, o.phase_span / t_max);
    std::vector<double> edges{0.0, o.head};
    double width = o.head;
    while (edges.back() < o.omega_max) {
        width = std::min(2.0 * width, cap);
        double next = edges.back() + width;
        // Avoid a sliver at the end.
        if (next > o.omega_max - 0.25 * width) next = o.omega_max;
        edges.push_back(next);
    }
    return edges;
}

void add_head(FrequencyGrid& g, double s, double head, const GaussRule& r) {
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        const double y = 0.5 * (r.nodes[i] + 1.0);
        const double wy = 0.5 * r.weights[i];
        if (s < 1.0) {
            const double p = 1.0 / s;
            g.omega.push_back(head * std::pow(y, p));
            g.weight.push_back(wy * head * p * std::pow(y, p - 1.0));
        } else {
            g.omega.push_back(head * y);
            g.weight.push_back(wy * head);
        }
    }
}

void add_panel(FrequencyGrid& g, double a, double b, const GaussRule& r) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        g.omega.push_back(c + h * r.nodes[i]);
        g.weight.push_back(h * r.weights[i]);
    }
}

double panel_integral(const std::function<double(double)>& f, double a, double b, const GaussRule& r) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * f(c + h * r.nodes[i]);
    return h * sum;
}

void refine(FrequencyGrid& g, const std::function<double(double)>& f, double a, double b, double whole,
            const GaussRule& r, const GridOptions& o, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = panel_integral(f, a, mid, r);
    const double right = panel_integral(f, mid, b, r);
    if (depth >= o.max_depth || std::abs(left + right - whole) <= o.refine_tol) {
        add_panel(g, a, mid, r);
        add_panel(g, mid, b, r);
        return;
    }
    refine(g, f, a, mid, left, r, o, depth + 1);
    refine(g, f, mid, b, right, r, o, depth + 1);
}

}  // namespace

FrequencyGrid oscillatory_grid(double s, double t_max, const GridOptions& opts) {
    check(s, t_max, opts);
    const GaussRule rule = gauss_legendre(opts.order);
    const auto edges = panel_edges(t_max, opts);
    FrequencyGrid g;
    g.omega.reserve(edges.size() * opts.order);
    g.weight.reserve(edges.size() * opts.order);
    add_head(g, s, opts.head, rule);
    for (std::size_t p = 1; p + 1 < edges.size(); ++p) add_panel(g, edges[p], edges[p + 1], rule);
    return g;
}

FrequencyGrid refined_grid(double s, double t_max, const std::function<double(double)>& density,
                           const GridOptions& opts) {
    check(s, t_max, opts);
    const GaussRule rule = gauss_legendre(opts.order);
    const auto edges = panel_edges(t_max, opts);
    FrequencyGrid g;
    add_head(g, s, opts.head, rule);
    for (std::size_t p = 1; p + 1 < edges.size(); ++p) {
        const double a = edges[p];
        const double b = edges[p + 1];
        const double whole = panel_integral(density, a, b, rule);
        const double mid = 0.5 * (a + b);
        const double split = panel_integral(density, a, mid, rule) + panel_integral(density, mid, b, rule);
        if (std::abs(split - whole) <= opts.refine_tol)
            add_panel(g, a, b, rule);
        else
            refine(g, density, a, b, whole, rule, opts, 1);
    }
    return g;
}

}  // namespace nmcorr
