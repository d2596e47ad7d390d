#pragma once

#include <string_view>

namespace fgstdp {

enum class DrainMode { doublet_flat, single_pulsed, double_pulsed };

std::string_view to_string(DrainMode mode);
DrainMode drain_mode_from_string(std::string_view name);

/// Voltage and timing parameters of the gate, tunnel and drain control
/// waveforms. Voltages in V, durations in s.
struct WaveformConfig {
    double V_g_init = 3.3;
    double V_g_min = 2.5;
    double T_g = 100e-3;
    double t_fall_gate = 1e-6;
    double V_tun_init = 5.4;
    double V_tun_max = 16.5;
    double T_tun = 300e-3;
    double T_tun_delay = 1e-3;
    double T_tun_pulse = 2e-3;
    double V_d_init = 5.0;
    double V_d_min = 0.3;
    double T_d = 500e-6;
    DrainMode drain_mode = DrainMode::single_pulsed;

    /// Rising slope of the gate ramp (V/s), positive.
    double S2() const { return (V_g_init - V_g_min) / T_g; }
    /// Falling slope of the global tunnel triangle (V/s), negative. The
    /// triangle peaks T_tun_delay after the post-spike and returns to rest
    /// T_tun after it.
    double S3() const { return (V_tun_init - V_tun_max) / (T_tun - T_tun_delay); }

    /// Throws ValidationError when an invariant does not hold.
    void validate() const;
};

} // namespace fgstdp
