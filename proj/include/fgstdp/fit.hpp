#pragma once

#include <span>

namespace fgstdp {

struct WindowPoint {
    double dt;
    double dw;
};

/// Result of fitting dw = amplitude exp(-|dt| / tau).
struct ExponentialFit {
    double amplitude = 0.0;
    double tau = 0.0;
    /// RMS residual of the log-domain fit.
    double log_rms = 0.0;
    /// Largest relative residual |fit - dw| / |dw| over the points.
    double max_rel_residual = 0.0;
    std::size_t n = 0;
};

enum class FitWeighting {
    uniform,
    /// Each log residual weighted by dw^2, so points close to zero (where
    /// log|dw| is dominated by small offsets) count for little.
    magnitude,
};

/// Log-domain linear least squares fit of one branch of a learning window.
/// Needs at least two points, all dt on one side of zero and all dw of one
/// sign; throws FitError otherwise or if the data do not decay.
ExponentialFit fit_exponential_window(std::span<const WindowPoint> points,
                                      FitWeighting weighting = FitWeighting::uniform);

} // namespace fgstdp
