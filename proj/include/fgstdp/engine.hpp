#pragma once

#include "fgstdp/device.hpp"
#include "fgstdp/schedule.hpp"
#include "fgstdp/waveforms.hpp"

#include <vector>

namespace fgstdp {

struct EngineOptions {
    /// Largest step anywhere (s).
    double dt_max = 100e-6;
    /// Steps inside drain pulses are at most T_d / pulse_subdivisions, and
    /// inside tunnel windows at most T_tun_pulse / pulse_subdivisions.
    int pulse_subdivisions = 50;
    /// Evaluate both currents everywhere (at rest biases outside pulses and
    /// windows) instead of only where they are switched on.
    bool rest_currents = false;
    /// Sample period of the optional trace; 0 disables tracing.
    double trace_period = 0.0;
};

struct TraceSample {
    double t;
    double v_g;
    double v_tun_eff;
    double v_d;
    double v_fg;
    double i_d;
    double i_inj;
    double i_tun;
};

struct RunResult {
    /// Net slow FG voltage change (V).
    double dv_fg_slow = 0.0;
    /// Share of dv_fg_slow from injection (<= 0) and tunneling (>= 0).
    double dv_injection = 0.0;
    double dv_tunneling = 0.0;
    double dw_percent = 0.0;
    std::size_t steps = 0;
    std::vector<TraceSample> traces;
};

/// Integrates C_T dV_fg_slow/dt = I_tun - I_inj over [0, horizon] with a
/// fixed-step RK4 stepper whose grid is forced through every waveform
/// breakpoint. Injection is switched on only while the drain is pulled low
/// and tunneling only inside sampled tunnel windows, unless rest_currents.
RunResult integrate(const SpikeSchedule& sched, const WaveformConfig& cfg,
                    const TripletAmplitudeParams& amp, const DeviceParams& p,
                    const EngineOptions& opts = {});

double weight_change_percent(const RunResult& result, const DeviceParams& p);

} // namespace fgstdp
