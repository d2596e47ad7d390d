#pragma once

#include "fgstdp/schedule.hpp"
#include "fgstdp/waveform_config.hpp"

#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace fgstdp {

/// Parameters of the triplet drain-amplitude laws.
struct TripletAmplitudeParams {
    double A2_plus = 4.6e-3;
    double A3_plus = 9.1e-3;
    double tau_y = 48e-3;
    double V_inj = 0.25;
    /// Time-axis compression: measured gaps are scaled by r before the law
    /// is evaluated.
    double r = 2.0;
    /// Upper bound on any drain-pulse depth increment.
    double delta_vd_max = std::numeric_limits<double>::infinity();

    void validate() const;
};

/// Extra single-pulse depth for a post-spike arriving dt2 after the
/// previous one. dt2 = +inf gives 0.
double delta_vd_single(double dt2, const TripletAmplitudeParams& p);

/// Depth of the second pulse of the double-pulsed waveform, or nullopt when
/// the law yields a non-positive depth (pulse absent).
std::optional<double> delta_vd_double(double dt2, const TripletAmplitudeParams& p);

/// Gate node: drop to V_g_min over t_fall_gate at each pre-spike, linear
/// recovery with slope S2, V_g_init otherwise. A pre-spike during a ramp
/// restarts the drop from the current value.
class GateWaveform {
public:
    GateWaveform(std::span<const double> pre, const WaveformConfig& cfg);

    double operator()(double t) const;
    /// Times at which the trace changes slope.
    std::vector<double> breakpoints() const;

private:
    double after_spike(double v_start, double tau) const;

    WaveformConfig cfg_;
    std::vector<double> spikes_;
    std::vector<double> start_values_;
};

/// Global tunnel triangle (retriggered at each post-spike) sampled inside
/// [t_pre, t_pre + T_tun_pulse] windows; V_tun_init elsewhere.
class TunnelWaveform {
public:
    TunnelWaveform(std::span<const double> pre, std::span<const double> post,
                   const WaveformConfig& cfg);

    /// Unsampled global triangle.
    double global(double t) const;
    /// Effective tunnel-node voltage seen by the FG.
    double operator()(double t) const;
    bool in_window(double t) const;
    std::vector<double> breakpoints() const;

private:
    double after_spike(double v_start, double tau) const;

    WaveformConfig cfg_;
    std::vector<double> post_;
    std::vector<double> start_values_;
    std::vector<double> window_start_;
};

/// One drain pulse [begin, end) held at a fixed voltage.
struct DrainPulse {
    double begin;
    double end;
    double voltage;
};

/// Drain node: rectangular pulses below V_d_init at post-spikes, shaped by
/// the configured drain mode.
class DrainWaveform {
public:
    /// Throws ValidationError if two post-spikes are closer than 2 T_d.
    DrainWaveform(std::span<const double> post, const WaveformConfig& cfg,
                  const TripletAmplitudeParams& amp);

    double operator()(double t) const;
    bool pulled_low(double t) const;
    const std::vector<DrainPulse>& pulses() const { return pulses_; }
    std::vector<double> breakpoints() const;

private:
    const DrainPulse* find(double t) const;

    WaveformConfig cfg_;
    std::vector<DrainPulse> pulses_;
};

double gate_trace(double t, const SpikeSchedule& sched, const WaveformConfig& cfg);
double tunnel_eff_trace(double t, const SpikeSchedule& sched, const WaveformConfig& cfg);
double drain_trace(double t, const SpikeSchedule& sched, const WaveformConfig& cfg,
                   const TripletAmplitudeParams& amp);

/// All three control waveforms for one schedule.
struct ControlWaveforms {
    ControlWaveforms(const SpikeSchedule& sched, const WaveformConfig& cfg,
                     const TripletAmplitudeParams& amp);

    GateWaveform gate;
    TunnelWaveform tunnel;
    DrainWaveform drain;

    /// Sorted, de-duplicated union of all breakpoints.
    std::vector<double> breakpoints() const;
};

} // namespace fgstdp
