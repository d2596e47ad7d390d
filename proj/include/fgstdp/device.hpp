#pragma once

#include "fgstdp/waveform_config.hpp"

namespace fgstdp {

/// Physical constants of the floating-gate pFET synapse.
///
/// I_s0, I_inj0, I_tun0 and V_ox have no measured values; the defaults are
/// the output of calibrate_window() against the reference learning window
/// (A+ 0.26 %, A- -0.15 %, tau+ 25 ms, tau- 22 ms). C_T is chosen so that
/// the injection decay rate X = alpha kappa C_g S2 / (C_T U_T) equals
/// 1 / 25 ms for the default gate waveform.
struct DeviceParams {
    double I_s0 = 1e-16;        // A
    double kappa = 0.7;
    double U_T = 25.85e-3;      // V
    double I_inj0 = 0.0;        // A, see defaults()
    double V_inj = 0.25;        // V
    double alpha = 1.0 - 25.85e-3 / 0.25;
    double I_tun0 = 0.0;        // A, see defaults()
    double V_ox = 0.9;          // V, see defaults()
    double C_T = 26.707e-12;    // F
    double C_g = 5.5e-12;       // F
    double C_tun = 10e-15;      // F
    double V_dd = 5.2;          // V
    /// Slow-timescale FG voltage at rest (set by the stored charge).
    double V_fg_rest = 4.4;     // V
    /// Largest exponent any device equation may evaluate.
    double exponent_cap = 200.0;

    /// Calibrated default parameter set.
    static DeviceParams defaults();

    /// Recomputes alpha from U_T and V_inj.
    void refresh_alpha() { alpha = 1.0 - U_T / V_inj; }

    void validate() const;
};

/// Slow-timescale state of the floating-gate node.
struct FgState {
    double V_fg_slow = 0.0;
    double t = 0.0;
};

/// Instantaneous FG voltage: slow component plus capacitive coupling of the
/// gate and tunnel nodes relative to their rest levels.
double fg_voltage(const FgState& state, double v_g, double v_tun,
                  const WaveformConfig& cfg, const DeviceParams& p);

/// Subthreshold saturated pFET drain current, well tied to V_dd.
double drain_current(double v_fg, const DeviceParams& p);

/// Hot-electron injection current.
///
/// delta_v_ds is the drain-to-source voltage V_d - V_dd (non-positive for a
/// pulled-down drain), so exp(-delta_v_ds / V_inj) grows as the drain is
/// pulled lower. Use drain_source_voltage() to form it.
double injection_current(double i_d, double delta_v_ds, const DeviceParams& p);

double drain_source_voltage(double v_d, const DeviceParams& p);

/// Fowler-Nordheim tunneling current.
double tunneling_current(double v_tun, double v_fg, const DeviceParams& p);

/// Synaptic weight exp(-kappa V_fg / U_T).
double weight_of(double v_fg, const DeviceParams& p);

/// Percent weight change 100 (exp(-kappa dV / U_T) - 1) for a slow FG
/// voltage change dV.
double percent_weight_change(double dv_fg_slow, const DeviceParams& p);

} // namespace fgstdp
