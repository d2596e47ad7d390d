#include "fgstdp/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <iterator>
#include <limits>

namespace fgstdp {

namespace {

constexpr std::array palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                             "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    void settle() {
        if (!(lo <= hi)) {
            lo = 0;
            hi = 1;
        } else if (lo == hi) {
            const double pad = lo == 0 ? 1.0 : std::abs(lo) * 0.1;
            lo -= pad;
            hi += pad;
        }
    }
};

/// Tick step of 1, 2 or 5 times a power of ten giving about n ticks.
double tick_step(const Range& r, int n) {
    const double raw = (r.hi - r.lo) / n;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return mag * (f < 1.5 ? 1 : f < 3.5 ? 2 : f < 7.5 ? 5 : 10);
}

} // namespace

std::string render_svg(const PlotSpec& spec) {
    const double W = spec.width, H = spec.height;
    const double left = 70, right = 160, top = 40, bottom = 55;
    const double pw = W - left - right, ph = H - top - bottom;

    Range xr, yr;
    for (const auto& s : spec.series) {
        for (double v : s.x) xr.add(v);
        for (double v : s.y) yr.add(v);
    }
    xr.settle();
    yr.settle();
    const double xstep = tick_step(xr, 6), ystep = tick_step(yr, 6);
    xr.lo = std::floor(xr.lo / xstep) * xstep;
    xr.hi = std::ceil(xr.hi / xstep) * xstep;
    yr.lo = std::floor(yr.lo / ystep) * ystep;
    yr.hi = std::ceil(yr.hi / ystep) * ystep;

    auto X = [&](double v) { return left + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto Y = [&](double v) { return top + (yr.hi - v) / (yr.hi - yr.lo) * ph; };

    std::string out;
    auto it = std::back_inserter(out);
    fmt::format_to(it,
                   "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
                   "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n",
                   spec.width, spec.height);
    fmt::format_to(it, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    fmt::format_to(it, "<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                   left + pw / 2, escape(spec.title));

    for (double v = xr.lo; v <= xr.hi + xstep * 1e-9; v += xstep) {
        const double x = X(v);
        fmt::format_to(it, "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"#ddd\"/>\n",
                       x, top, top + ph);
        fmt::format_to(it, "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:g}</text>\n", x,
                       top + ph + 16, std::abs(v) < xstep * 1e-9 ? 0.0 : v);
    }
    for (double v = yr.lo; v <= yr.hi + ystep * 1e-9; v += ystep) {
        const double y = Y(v);
        fmt::format_to(it, "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"#ddd\"/>\n",
                       left, y, left + pw);
        fmt::format_to(it, "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:g}</text>\n", left - 6,
                       y + 4, std::abs(v) < ystep * 1e-9 ? 0.0 : v);
    }
    fmt::format_to(it, "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" stroke=\"black\"/>\n",
                   left, top, pw, ph);
    fmt::format_to(it, "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", left + pw / 2,
                   H - 14, escape(spec.x_label));
    fmt::format_to(it,
                   "<text x=\"16\" y=\"{0:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0:.1f})\">{1}</text>\n",
                   top + ph / 2, escape(spec.y_label));

    for (std::size_t k = 0; k < spec.series.size(); ++k) {
        const auto& s = spec.series[k];
        const char* color = palette[k % palette.size()];
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (s.line && n > 1) {
            std::string pts;
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                fmt::format_to(std::back_inserter(pts), "{:.2f},{:.2f} ", X(s.x[i]), Y(s.y[i]));
            }
            fmt::format_to(it, "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                           color, pts);
        }
        if (s.markers) {
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                fmt::format_to(it, "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", X(s.x[i]),
                               Y(s.y[i]), color);
            }
        }
        const double ly = top + 10 + 18 * static_cast<double>(k);
        fmt::format_to(it, "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                       left + pw + 12, ly, left + pw + 32, color);
        fmt::format_to(it, "<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", left + pw + 38, ly + 4,
                       escape(s.name));
    }
    out += "</svg>\n";
    return out;
}

} // namespace fgstdp
