// svg_plot.cpp - minimal static line chart

#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace nmcorr::cli {

namespace {

const char* kColors[] = {"#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d68910"};
const char* kDashes[] = {"", "6,4", "2,3", "8,3,2,3", "1,2"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick_label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::abs(x) < 1e-12 ? 0.0 : x);
    return buf;
}

// 1, 2 or 5 times a power of ten, giving roughly `target` intervals.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double p = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * p >= raw) return m * p;
    return 10.0 * p;
}

}  // namespace

std::string render_svg(const ChartSpec& spec, const std::vector<Series>& series) {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    bool first = true;
    for (const auto& s : series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (first) {
                x0 = x1 = s.x[i];
                y0 = y1 = s.y[i];
                first = false;
            }
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    y0 = std::min(y0, 0.0);
    if (x1 <= x0) x1 = x0 + 1.0;
    if (y1 <= y0) y1 = y0 + 1.0;
    y1 += 0.05 * (y1 - y0);

    const double ml = 70, mr = 20, mt = 40, mb = 55;
    const double pw = spec.width - ml - mr, ph = spec.height - mt - mb;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return mt + ph - (y - y0) / (y1 - y0) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << num(ml + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(spec.title) << "</text>\n";
    os << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    const double xs = nice_step(x1 - x0, 8), ys = nice_step(y1 - y0, 6);
    for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
        os << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(mt + ph) << "\" x2=\"" << num(px(t)) << "\" y2=\""
           << num(mt + ph + 5) << "\" stroke=\"black\"/>";
        os << "<text x=\"" << num(px(t)) << "\" y=\"" << num(mt + ph + 18) << "\" text-anchor=\"middle\">"
           << tick_label(t) << "</text>\n";
    }
    for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
        os << "<line x1=\"" << num(ml - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(ml) << "\" y2=\""
           << num(py(t)) << "\" stroke=\"black\"/>";
        os << "<text x=\"" << num(ml - 8) << "\" y=\"" << num(py(t) + 4) << "\" text-anchor=\"end\">"
           << tick_label(t) << "</text>\n";
    }
    os << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(spec.height - 12.0) << "\" text-anchor=\"middle\">"
       << escape(spec.x_label) << "</text>\n";
    os << "<text transform=\"translate(18," << num(mt + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(spec.y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        os << "<polyline fill=\"none\" stroke=\"" << kColors[k % 5] << "\" stroke-width=\"1.5\"";
        if (*kDashes[k % 5]) os << " stroke-dasharray=\"" << kDashes[k % 5] << "\"";
        os << " points=\"";
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            os << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
        }
        os << "\"/>\n";
        const double ly = mt + 16 + 18.0 * static_cast<double>(k);
        const double lx = ml + pw - 150;
        os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 28) << "\" y2=\""
           << num(ly - 4) << "\" stroke=\"" << kColors[k % 5] << "\" stroke-width=\"1.5\"";
        if (*kDashes[k % 5]) os << " stroke-dasharray=\"" << kDashes[k % 5] << "\"";
        os << "/><text x=\"" << num(lx + 34) << "\" y=\"" << num(ly) << "\">" << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace nmcorr::cli
