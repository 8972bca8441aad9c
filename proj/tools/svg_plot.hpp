// svg_plot.hpp - minimal static line chart

#pragma once

#include <string>
#include <vector>

namespace nmcorr::cli {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct ChartSpec {
    std::string title;
    std::string x_label{"omega0 tau"};
    std::string y_label{"N(t, tau)"};
    int width{720};
    int height{440};
};

/// Self-contained SVG with linear axes, ticks and a legend.
std::string render_svg(const ChartSpec& spec, const std::vector<Series>& series);

}  // namespace nmcorr::cli
