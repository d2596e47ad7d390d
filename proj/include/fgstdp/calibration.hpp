#pragma once

#include "fgstdp/device.hpp"
#include "fgstdp/fit.hpp"
#include "fgstdp/protocols.hpp"

#include <string>
#include <vector>

namespace fgstdp {

struct WindowTargets {
    double A_plus = 0.26;     // %
    double A_minus = -0.15;   // %
    double tau_plus = 25e-3;  // s
    double tau_minus = 22e-3; // s
};

/// Learning window sampled on a dt grid and fitted on each side.
struct WindowReport {
    std::vector<WindowPoint> points;
    ExponentialFit potentiation;
    ExponentialFit depression;
    /// Points left out of a branch fit because their sign disagrees with
    /// the branch.
    std::size_t excluded = 0;
    /// Number of sign changes of dw when walking the dt grid in order.
    std::size_t sign_changes = 0;
};

/// Default grid: +-[2, 100] ms, 25 points per side.
std::vector<double> default_window_grid();

/// Fits both branches (magnitude-weighted, sign-consistent points only) and
/// counts sign changes. Throws FitError if a branch has too few points.
WindowReport summarize_window(std::vector<WindowPoint> points);

WindowReport measure_window(const std::vector<double>& dts, const WaveformConfig& cfg,
                            const DeviceParams& p, const EngineOptions& opts = {});

struct CalibrationResult {
    DeviceParams params;
    WindowReport report;
    int evaluations = 0;
    std::vector<std::string> log;
};

/// Adjusts I_inj0 (A+), V_ox (tau-) and I_tun0 (A-) by bisection until the
/// fitted window matches the targets within tolerance. tau+ is fixed by C_T
/// and the gate slope and is only checked. Throws CalibrationError when a
/// search does not bracket its target or tau+ is out of tolerance.
CalibrationResult calibrate_window(const WindowTargets& target, const WaveformConfig& cfg,
                                   const DeviceParams& start, double tolerance = 0.05);

/// C_T giving injection decay time constant tau_plus for the gate waveform.
double total_capacitance_for_tau_plus(double tau_plus, const WaveformConfig& cfg,
                                      const DeviceParams& p);

} // namespace fgstdp
