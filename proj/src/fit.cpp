#include "fgstdp/fit.hpp"

#include "fgstdp/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fgstdp {

ExponentialFit fit_exponential_window(std::span<const WindowPoint> points, FitWeighting weighting) {
    if (points.size() < 2) throw FitError("exponential fit needs at least two points");
    const bool negative_dt = points.front().dt < 0;
    const bool negative_dw = points.front().dw < 0;
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& pt : points) {
        if ((pt.dt < 0) != negative_dt) throw FitError("exponential fit: dt of mixed sign");
        if (pt.dw == 0.0 || (pt.dw < 0) != negative_dw || !std::isfinite(pt.dw)) {
            throw FitError("exponential fit: dw of mixed sign or zero");
        }
        const double x = std::abs(pt.dt);
        const double y = std::log(std::abs(pt.dw));
        const double w = weighting == FitWeighting::magnitude ? pt.dw * pt.dw : 1.0;
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    const double denom = sw * sxx - sx * sx;
    if (!(std::abs(denom) > 0)) throw FitError("exponential fit: all |dt| equal");
    const double slope = (sw * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / sw;
    if (!(slope < 0)) throw FitError("exponential fit: data do not decay with |dt|");

    ExponentialFit fit;
    fit.n = points.size();
    fit.tau = -1.0 / slope;
    fit.amplitude = (negative_dw ? -1.0 : 1.0) * std::exp(intercept);
    double ss = 0;
    for (const auto& pt : points) {
        const double x = std::abs(pt.dt);
        const double r = std::log(std::abs(pt.dw)) - (intercept + slope * x);
        ss += r * r;
        const double model = fit.amplitude * std::exp(-x / fit.tau);
        fit.max_rel_residual = std::max(fit.max_rel_residual, std::abs(model - pt.dw) / std::abs(pt.dw));
    }
    fit.log_rms = std::sqrt(ss / static_cast<double>(points.size()));
    return fit;
}

} // namespace fgstdp
