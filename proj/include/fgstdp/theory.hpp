#pragma once

#include "fgstdp/device.hpp"
#include "fgstdp/schedule.hpp"
#include "fgstdp/waveform_config.hpp"

#include <limits>
#include <string_view>

namespace fgstdp {

inline constexpr double no_previous_spike = std::numeric_limits<double>::infinity();

/// Pair-based STDP window.
struct DstdpParams {
    double A_plus = 4.6e-3;
    double A_minus = 3e-3;
    double tau_plus = 16.8e-3;
    double tau_minus = 33.7e-3;

    void validate() const;
};

enum class MinimalModel { full, visual_cortex, hippocampal };

std::string_view to_string(MinimalModel m);

/// Triplet STDP parameters. The minimal models zero A2_plus/A3_minus
/// (visual cortex) or A3_minus (hippocampal) when evaluated.
struct TstdpParams {
    double A2_plus = 4.6e-3;
    double A2_minus = 3e-3;
    double A3_plus = 9.1e-3;
    double A3_minus = 0.0;
    double tau_plus = 16.8e-3;
    double tau_minus = 33.7e-3;
    double tau_x = 101e-3;
    double tau_y = 48e-3;
    MinimalModel minimal_model = MinimalModel::hippocampal;

    /// Copy with the minimal-model zeroing applied.
    TstdpParams effective() const;
    void validate() const;
};

enum class SpikeSide { pre, post };

/// Pair-based weight change for dt = t_post - t_pre (dt = 0 potentiates).
double dstdp_dw(double dt, const DstdpParams& p);

/// Triplet weight change at a post (dt1 >= 0, dt2 = post-post gap) or pre
/// (dt1 <= 0, dt3 = pre-pre gap) event. Gaps may be no_previous_spike.
double tstdp_dw(double dt1, double dt2, double dt3, SpikeSide event,
                const TstdpParams& p);

/// Constants of the closed-form FG doublet predictions.
struct ClosedFormConstants {
    double A = 0.0;        // V, injection prefactor (negative: a decrease)
    double X = 0.0;        // 1/s
    double B = 0.0;        // A, tunneling prefactor
    double B_prime = 0.0;  // A s
    double Y = 0.0;        // 1/s
    double V_fg_min = 0.0; // V, FG voltage at the bottom of the gate drop
};

ClosedFormConstants closed_form_constants(const DeviceParams& p, const WaveformConfig& cfg);

/// Magnitude of the slow FG voltage decrease from one pre-post pair with
/// dt >= 0 and drain pulse depth v_d_min.
double fg_doublet_injection(double dt, const ClosedFormConstants& cf, double v_d_min,
                            const DeviceParams& p);

/// Slow FG voltage increase from one post-pre pair, dt < 0.
double fg_doublet_tunneling(double dt, const ClosedFormConstants& cf,
                            const WaveformConfig& cfg, const DeviceParams& p);

/// Triplet-to-doublet injection ratio realised by a drain increment.
double ratio_yfg(DrainMode mode, double delta_vd, const DeviceParams& p);

/// Triplet-to-doublet potentiation ratio of the T-STDP rule.
double ratio_ytheory(double dt2, const TstdpParams& p);

double compression_factor(double tau_plus_theory, double tau_plus_fg);

/// Nearest-spike accumulation of a T-STDP rule over a schedule. Times are
/// multiplied by time_scale before the rule is applied. Coincident pre and
/// post spikes are ordered pre first.
double tstdp_weight_change(const SpikeSchedule& sched, const TstdpParams& p,
                           double time_scale = 1.0);

/// Nearest-spike accumulation of the pair rule.
double dstdp_weight_change(const SpikeSchedule& sched, const DstdpParams& p,
                           double time_scale = 1.0);

} // namespace fgstdp
