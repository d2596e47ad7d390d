#pragma once

#include <string>
#include <vector>

namespace fgstdp {

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool markers = true;
    bool line = true;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    int width = 720;
    int height = 480;
};

/// Static SVG line/marker chart with linear axes and a legend.
std::string render_svg(const PlotSpec& spec);

} // namespace fgstdp
